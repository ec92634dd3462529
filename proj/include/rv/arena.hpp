#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace rv {

using Rational = mpq_class;

Rational parse_rational(const std::string& text);
// num/den in lowest terms.
Rational ratio(const mpz_class& num, const mpz_class& den);
std::string format_rational(const Rational& q);

class GameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rational extended with both infinities and the energy violation marker.
class ExtendedValue {
public:
    enum class Kind { finite, plus_infinity, minus_infinity, bottom };

    ExtendedValue() = default;
    ExtendedValue(Rational q) : kind_(Kind::finite), value_(std::move(q)) {}
    ExtendedValue(long v) : kind_(Kind::finite), value_(v) {}

    static ExtendedValue plus_infinity() { return ExtendedValue(Kind::plus_infinity); }
    static ExtendedValue minus_infinity() { return ExtendedValue(Kind::minus_infinity); }
    static ExtendedValue bottom() { return ExtendedValue(Kind::bottom); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::finite; }
    bool is_bottom() const { return kind_ == Kind::bottom; }
    const Rational& value() const;

    // Throws on bottom: energy violations are never ordered implicitly.
    friend bool operator<(const ExtendedValue& a, const ExtendedValue& b);
    friend bool operator==(const ExtendedValue& a, const ExtendedValue& b);
    friend bool operator<=(const ExtendedValue& a, const ExtendedValue& b) { return !(b < a); }
    friend bool operator>(const ExtendedValue& a, const ExtendedValue& b) { return b < a; }
    friend bool operator>=(const ExtendedValue& a, const ExtendedValue& b) { return !(a < b); }

    std::string str() const;

private:
    explicit ExtendedValue(Kind k) : kind_(k) {}
    Kind kind_ = Kind::finite;
    Rational value_ = 0;
};

enum class PayoffClass { parity, reach, energy, discounted, mean };

std::string class_name(PayoffClass c);
PayoffClass parse_class(const std::string& name);

struct Edge {
    int from;
    int to;
};

// A finite multiplayer game. Vertex and player indices follow declaration order.
// Edge durations are 1 unless set; product games use 0 on their bookkeeping
// edges so that time-sensitive payoffs keep the original clock.
struct Game {
    std::vector<std::string> players;
    std::vector<std::string> vertices;
    std::vector<int> owner;
    std::vector<Edge> edges;
    PayoffClass payoff = PayoffClass::mean;
    std::vector<std::vector<long>> colors;        // [player][vertex]
    std::vector<std::vector<char>> targets;       // [player][vertex]
    std::vector<std::vector<Rational>> rewards;   // [player][edge]
    Rational discount = Rational(1, 2);
    std::vector<int> durations;                   // [edge], empty means all 1
    std::optional<int> init;
    std::optional<int> leader;

    // Derived by index().
    std::vector<std::vector<int>> out;            // [vertex] -> edge ids
    std::map<std::pair<int, int>, int> edge_id;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_players() const { return static_cast<int>(players.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    void index();
    int find_edge(int u, int v) const;  // -1 if absent
    int vertex(const std::string& name) const;
    int player(const std::string& name) const;
    int duration(int e) const { return durations.empty() ? 1 : durations[e]; }
    bool unit_durations() const;
    std::vector<int> successors(int v) const;
    const Rational& reward(int player, int u, int v) const;
};

// Incremental construction by names.
class GameBuilder {
public:
    GameBuilder(PayoffClass c, std::vector<std::string> players);
    int vertex(const std::string& name, const std::string& owner);
    int vertex(const std::string& name, int owner);
    int edge(const std::string& from, const std::string& to);
    int edge(int from, int to);
    void reward(int edge, int player, const Rational& r);
    void reward(int edge, const std::string& player, const Rational& r);
    void color(int vertex, int player, long c);
    void target(int vertex, int player);
    void duration(int edge, int d);
    void discount(const Rational& lambda);
    void init(const std::string& v);
    void leader(const std::string& p);
    Game& raw() { return g_; }
    Game build();

private:
    Game g_;
    std::map<std::string, int> names_;
};

void validate(const Game& g);

// A play stem . cycle^omega.
struct Lasso {
    std::vector<int> stem;
    std::vector<int> cycle;

    int at(long k) const;  // vertex at position k
    long length() const { return static_cast<long>(stem.size() + cycle.size()); }
    friend bool operator==(const Lasso&, const Lasso&) = default;
};

// Shortest stem and primitive cycle.
Lasso canonical(Lasso l);
bool is_valid_lasso(const Game& g, const Lasso& l);
// Lasso starting at position k of l.
Lasso suffix(const Lasso& l, long k);
// Prepend a finite path whose last vertex leads into l.
Lasso prepend(const std::vector<int>& prefix, const Lasso& l);

using PayoffVector = std::vector<Rational>;

ExtendedValue energy_level(const Game& g, int player, const std::vector<int>& history);
PayoffVector eval_payoff(const Game& g, const Lasso& play);
Rational eval_payoff(const Game& g, const Lasso& play, int player);
// Discounted sum of the first n edges of a play.
Rational truncated_discounted(const Game& g, const Lasso& play, int player, long n);

std::string render_lasso(const Game& g, const Lasso& l);

}  // namespace rv
