#include "rv/arena.hpp"

#include <algorithm>
#include <sstream>

namespace rv {

Rational ratio(const mpz_class& num, const mpz_class& den)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (c != ' ')
            s.push_back(c);
    if (s.empty())
        throw GameError("empty rational");
    auto valid_int = [](const std::string& t) {
        size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size())
            return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9')
                return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den))
        throw GameError("malformed rational '" + text + "'");
    if (num[0] == '+')
        num.erase(0, 1);
    if (den[0] == '+')
        den.erase(0, 1);
    mpz_class n(num), d(den);
    if (d == 0)
        throw GameError("zero denominator in '" + text + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

const Rational& ExtendedValue::value() const
{
    if (kind_ != Kind::finite)
        throw GameError("value of non-finite extended value " + str());
    return value_;
}

bool operator<(const ExtendedValue& a, const ExtendedValue& b)
{
    using K = ExtendedValue::Kind;
    if (a.kind_ == K::bottom || b.kind_ == K::bottom)
        throw GameError("energy bottom compared as a number");
    auto rank = [](K k) { return k == K::minus_infinity ? 0 : k == K::finite ? 1 : 2; };
    if (rank(a.kind_) != rank(b.kind_))
        return rank(a.kind_) < rank(b.kind_);
    return a.kind_ == K::finite && a.value_ < b.value_;
}

bool operator==(const ExtendedValue& a, const ExtendedValue& b)
{
    if (a.kind_ != b.kind_)
        return false;
    return a.kind_ != ExtendedValue::Kind::finite || a.value_ == b.value_;
}

std::string ExtendedValue::str() const
{
    switch (kind_) {
    case Kind::finite: return format_rational(value_);
    case Kind::plus_infinity: return "+inf";
    case Kind::minus_infinity: return "-inf";
    case Kind::bottom: return "bottom";
    }
    return "?";
}

std::string class_name(PayoffClass c)
{
    switch (c) {
    case PayoffClass::parity: return "parity";
    case PayoffClass::reach: return "qr";
    case PayoffClass::energy: return "energy";
    case PayoffClass::discounted: return "ds";
    case PayoffClass::mean: return "mp";
    }
    return "?";
}

PayoffClass parse_class(const std::string& name)
{
    for (auto c : {PayoffClass::parity, PayoffClass::reach, PayoffClass::energy,
                   PayoffClass::discounted, PayoffClass::mean})
        if (class_name(c) == name)
            return c;
    throw GameError("unknown payoff class '" + name + "'");
}

void Game::index()
{
    out.assign(vertices.size(), {});
    edge_id.clear();
    for (int e = 0; e < num_edges(); ++e) {
        const auto& ed = edges[e];
        if (ed.from < 0 || ed.from >= num_vertices() || ed.to < 0 || ed.to >= num_vertices())
            throw GameError("edge endpoint outside the vertex set");
        if (!edge_id.emplace(std::make_pair(ed.from, ed.to), e).second)
            throw GameError("duplicate edge " + vertices[ed.from] + " -> " + vertices[ed.to]);
        out[ed.from].push_back(e);
    }
}

int Game::find_edge(int u, int v) const
{
    auto it = edge_id.find({u, v});
    return it == edge_id.end() ? -1 : it->second;
}

int Game::vertex(const std::string& name) const
{
    for (int v = 0; v < num_vertices(); ++v)
        if (vertices[v] == name)
            return v;
    throw GameError("unknown vertex '" + name + "'");
}

int Game::player(const std::string& name) const
{
    for (int p = 0; p < num_players(); ++p)
        if (players[p] == name)
            return p;
    throw GameError("unknown player '" + name + "'");
}

bool Game::unit_durations() const
{
    return std::all_of(durations.begin(), durations.end(), [](int d) { return d == 1; });
}

std::vector<int> Game::successors(int v) const
{
    std::vector<int> s;
    for (int e : out[v])
        s.push_back(edges[e].to);
    return s;
}

const Rational& Game::reward(int player, int u, int v) const
{
    int e = find_edge(u, v);
    if (e < 0)
        throw GameError("no edge " + vertices[u] + " -> " + vertices[v]);
    return rewards[player][e];
}

GameBuilder::GameBuilder(PayoffClass c, std::vector<std::string> players)
{
    g_.payoff = c;
    g_.players = std::move(players);
    g_.colors.assign(g_.players.size(), {});
    g_.targets.assign(g_.players.size(), {});
    g_.rewards.assign(g_.players.size(), {});
}

int GameBuilder::vertex(const std::string& name, int owner)
{
    auto [it, fresh] = names_.emplace(name, static_cast<int>(g_.vertices.size()));
    if (!fresh)
        throw GameError("duplicate vertex '" + name + "'");
    g_.vertices.push_back(name);
    g_.owner.push_back(owner);
    for (auto& c : g_.colors)
        c.push_back(0);
    for (auto& t : g_.targets)
        t.push_back(0);
    return it->second;
}

int GameBuilder::vertex(const std::string& name, const std::string& owner)
{
    auto it = std::find(g_.players.begin(), g_.players.end(), owner);
    if (it == g_.players.end())
        throw GameError("unknown player '" + owner + "'");
    return vertex(name, static_cast<int>(it - g_.players.begin()));
}

int GameBuilder::edge(int from, int to)
{
    int e = static_cast<int>(g_.edges.size());
    g_.edges.push_back({from, to});
    for (auto& r : g_.rewards)
        r.push_back(0);
    if (!g_.durations.empty())
        g_.durations.push_back(1);
    return e;
}

int GameBuilder::edge(const std::string& from, const std::string& to)
{
    auto f = names_.find(from), t = names_.find(to);
    if (f == names_.end() || t == names_.end())
        throw GameError("edge " + from + " -> " + to + " uses an unknown vertex");
    return edge(f->second, t->second);
}

void GameBuilder::reward(int edge, int player, const Rational& r) { g_.rewards[player][edge] = r; }

void GameBuilder::reward(int edge, const std::string& player, const Rational& r)
{
    reward(edge, g_.player(player), r);
}

void GameBuilder::color(int vertex, int player, long c) { g_.colors[player][vertex] = c; }
void GameBuilder::target(int vertex, int player) { g_.targets[player][vertex] = 1; }

void GameBuilder::duration(int edge, int d)
{
    if (g_.durations.empty())
        g_.durations.assign(g_.edges.size(), 1);
    g_.durations[edge] = d;
}

void GameBuilder::discount(const Rational& lambda) { g_.discount = lambda; }
void GameBuilder::init(const std::string& v) { g_.init = names_.at(v); }
void GameBuilder::leader(const std::string& p) { g_.leader = g_.player(p); }

Game GameBuilder::build()
{
    Game g = g_;
    if (g.payoff != PayoffClass::parity)
        g.colors.assign(g.players.size(), {});
    if (g.payoff != PayoffClass::reach)
        g.targets.assign(g.players.size(), {});
    if (g.payoff == PayoffClass::parity || g.payoff == PayoffClass::reach)
        g.rewards.assign(g.players.size(), {});
    g.index();
    validate(g);
    return g;
}

void validate(const Game& g)
{
    const int n = g.num_vertices(), np = g.num_players();
    if (np == 0)
        throw GameError("game has no players");
    if (n == 0)
        throw GameError("game has no vertices");
    if (static_cast<int>(g.owner.size()) != n)
        throw GameError("owner map is not total");
    for (int v = 0; v < n; ++v)
        if (g.owner[v] < 0 || g.owner[v] >= np)
            throw GameError("vertex '" + g.vertices[v] + "' has an owner outside the player set");
    if (static_cast<int>(g.out.size()) != n)
        throw GameError("game not indexed");
    for (const auto& e : g.edges)
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
            throw GameError("edge endpoint outside the vertex set");
    for (int v = 0; v < n; ++v)
        if (g.out[v].empty())
            throw GameError("sink vertex '" + g.vertices[v] + "' has no outgoing edge");
    if (g.init && (*g.init < 0 || *g.init >= n))
        throw GameError("initial vertex outside the vertex set");
    if (g.leader && (*g.leader < 0 || *g.leader >= np))
        throw GameError("leader is not a player");
    if (!g.durations.empty()) {
        if (static_cast<int>(g.durations.size()) != g.num_edges())
            throw GameError("durations are not total over edges");
        for (int d : g.durations)
            if (d != 0 && d != 1)
                throw GameError("edge durations must be 0 or 1");
    }
    switch (g.payoff) {
    case PayoffClass::parity:
        if (static_cast<int>(g.colors.size()) != np)
            throw GameError("colors are not given for every player");
        for (const auto& c : g.colors) {
            if (static_cast<int>(c.size()) != n)
                throw GameError("color map is not total");
            for (long x : c)
                if (x < 0)
                    throw GameError("negative color");
        }
        break;
    case PayoffClass::reach:
        if (static_cast<int>(g.targets.size()) != np)
            throw GameError("targets are not given for every player");
        for (const auto& t : g.targets)
            if (static_cast<int>(t.size()) != n)
                throw GameError("target map is not total");
        break;
    case PayoffClass::discounted:
        if (g.discount <= 0 || g.discount >= 1)
            throw GameError("bad lambda: discount factor must lie strictly between 0 and 1");
        [[fallthrough]];
    case PayoffClass::energy:
    case PayoffClass::mean:
        if (static_cast<int>(g.rewards.size()) != np)
            throw GameError("rewards are not given for every player");
        for (const auto& r : g.rewards)
            if (static_cast<int>(r.size()) != g.num_edges())
                throw GameError("reward map is not total");
        break;
    }
}

int Lasso::at(long k) const
{
    long s = static_cast<long>(stem.size());
    if (k < s)
        return stem[k];
    return cycle[(k - s) % static_cast<long>(cycle.size())];
}

Lasso canonical(Lasso l)
{
    if (l.cycle.empty())
        throw GameError("lasso with empty cycle");
    const size_t c = l.cycle.size();
    for (size_t p = 1; p < c; ++p) {
        if (c % p)
            continue;
        bool periodic = true;
        for (size_t k = p; k < c && periodic; ++k)
            periodic = l.cycle[k] == l.cycle[k - p];
        if (periodic) {
            l.cycle.resize(p);
            break;
        }
    }
    while (!l.stem.empty() && l.stem.back() == l.cycle.back()) {
        l.stem.pop_back();
        std::rotate(l.cycle.rbegin(), l.cycle.rbegin() + 1, l.cycle.rend());
    }
    return l;
}

bool is_valid_lasso(const Game& g, const Lasso& l)
{
    if (l.cycle.empty())
        return false;
    std::vector<int> seq = l.stem;
    seq.insert(seq.end(), l.cycle.begin(), l.cycle.end());
    seq.push_back(l.cycle.front());
    for (int v : seq)
        if (v < 0 || v >= g.num_vertices())
            return false;
    for (size_t k = 0; k + 1 < seq.size(); ++k)
        if (g.find_edge(seq[k], seq[k + 1]) < 0)
            return false;
    return true;
}

Lasso suffix(const Lasso& l, long k)
{
    long s = static_cast<long>(l.stem.size());
    if (k <= s)
        return Lasso{std::vector<int>(l.stem.begin() + k, l.stem.end()), l.cycle};
    long c = static_cast<long>(l.cycle.size());
    long r = (k - s) % c;
    Lasso out;
    out.cycle.assign(l.cycle.begin() + r, l.cycle.end());
    out.cycle.insert(out.cycle.end(), l.cycle.begin(), l.cycle.begin() + r);
    return out;
}

Lasso prepend(const std::vector<int>& prefix, const Lasso& l)
{
    Lasso out = l;
    out.stem.insert(out.stem.begin(), prefix.begin(), prefix.end());
    return out;
}

namespace {

// Edge ids along stem followed by one pass of the cycle, including the closing edge.
std::vector<int> lasso_edges(const Game& g, const Lasso& l, size_t& stem_edges)
{
    std::vector<int> seq = l.stem;
    seq.insert(seq.end(), l.cycle.begin(), l.cycle.end());
    seq.push_back(l.cycle.front());
    std::vector<int> ids;
    for (size_t k = 0; k + 1 < seq.size(); ++k) {
        int e = g.find_edge(seq[k], seq[k + 1]);
        if (e < 0)
            throw GameError("invalid lasso: no edge " + g.vertices[seq[k]] + " -> " +
                            g.vertices[seq[k + 1]]);
        ids.push_back(e);
    }
    stem_edges = l.stem.size();
    return ids;
}

Rational power(const Rational& x, long n)
{
    Rational r = 1;
    for (long k = 0; k < n; ++k)
        r *= x;
    return r;
}

}  // namespace

ExtendedValue energy_level(const Game& g, int player, const std::vector<int>& history)
{
    if (history.empty())
        throw GameError("empty history");
    Rational level = 0;
    for (size_t k = 0; k + 1 < history.size(); ++k) {
        int e = g.find_edge(history[k], history[k + 1]);
        if (e < 0)
            throw GameError("invalid path in energy_level");
        level += g.rewards[player][e];
        if (level < 0)
            return ExtendedValue::bottom();
    }
    return level;
}

Rational eval_payoff(const Game& g, const Lasso& play, int i)
{
    size_t ns = 0;
    const auto ids = lasso_edges(g, play, ns);
    switch (g.payoff) {
    case PayoffClass::parity: {
        long m = g.colors[i][play.cycle.front()];
        for (int v : play.cycle)
            m = std::min(m, g.colors[i][v]);
        return m % 2 == 0 ? 1 : 0;
    }
    case PayoffClass::reach: {
        long time = 0;
        const long total = static_cast<long>(play.stem.size() + play.cycle.size());
        for (long k = 0; k < total; ++k) {
            if (g.targets[i][play.at(k)])
                return Rational(1, time + 1);
            time += g.duration(ids[k]);
        }
        return 0;
    }
    case PayoffClass::energy: {
        Rational cycle_sum = 0;
        for (size_t k = ns; k < ids.size(); ++k)
            cycle_sum += g.rewards[i][ids[k]];
        if (cycle_sum < 0)
            return 0;
        Rational level = 0;
        for (int e : ids) {
            level += g.rewards[i][e];
            if (level < 0)
                return 0;
        }
        return 1;
    }
    case PayoffClass::discounted: {
        Rational x = 0, y = 0, w = 1;
        for (size_t k = 0; k < ids.size(); ++k) {
            if (k == ns) {
                Rational wc = 1;
                long tc = 0;
                for (size_t j = ns; j < ids.size(); ++j) {
                    y += wc * g.rewards[i][ids[j]];
                    wc *= power(g.discount, g.duration(ids[j]));
                    tc += g.duration(ids[j]);
                }
                if (tc == 0)
                    throw GameError("cycle of zero duration");
                return x + y * w / (1 - wc);
            }
            x += w * g.rewards[i][ids[k]];
            w *= power(g.discount, g.duration(ids[k]));
        }
        return x;
    }
    case PayoffClass::mean: {
        Rational sum = 0;
        long time = 0;
        for (size_t k = ns; k < ids.size(); ++k) {
            sum += g.rewards[i][ids[k]];
            time += g.duration(ids[k]);
        }
        if (time == 0)
            throw GameError("cycle of zero duration");
        return sum / time;
    }
    }
    return 0;
}

PayoffVector eval_payoff(const Game& g, const Lasso& play)
{
    PayoffVector p;
    for (int i = 0; i < g.num_players(); ++i)
        p.push_back(eval_payoff(g, play, i));
    return p;
}

Rational truncated_discounted(const Game& g, const Lasso& play, int player, long n)
{
    Rational sum = 0, w = 1;
    for (long k = 0; k < n; ++k) {
        int e = g.find_edge(play.at(k), play.at(k + 1));
        if (e < 0)
            throw GameError("invalid lasso");
        sum += w * g.rewards[player][e];
        w *= power(g.discount, g.duration(e));
    }
    return sum;
}

std::string render_lasso(const Game& g, const Lasso& l)
{
    std::ostringstream os;
    for (int v : l.stem)
        os << g.vertices[v] << ' ';
    os << '(';
    for (size_t k = 0; k < l.cycle.size(); ++k)
        os << (k ? " " : "") << g.vertices[l.cycle[k]];
    os << ")^w";
    return os.str();
}

}  // namespace rv
