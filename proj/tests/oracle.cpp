#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace oracle {

namespace {

constexpr long never = std::numeric_limits<long>::max();

Rational edge_reward(const Game& g, int player, int u, int v)
{
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (g.edges[e].from == u && g.edges[e].to == v)
            return g.rewards[player][e];
    throw rv::GameError("not an edge");
}

Rational pow(const Rational& x, long k)
{
    Rational r = 1;
    for (long i = 0; i < k; ++i)
        r *= x;
    return r;
}

// A one-player graph whose nodes stand for game vertices.
struct Graph {
    std::vector<int> vertex;
    std::vector<std::vector<int>> out;
};

// Calls f(path, back) for every simple path from s closed by an edge to path[back].
void for_each_rho(const Graph& gr, int s, const std::function<void(const std::vector<int>&, int)>& f)
{
    std::vector<int> path{s};
    std::vector<int> pos(gr.vertex.size(), -1);
    pos[s] = 0;
    std::function<void()> grow = [&] {
        const int x = path.back();
        for (int y : gr.out[x]) {
            if (pos[y] >= 0) {
                f(path, pos[y]);
                continue;
            }
            pos[y] = static_cast<int>(path.size());
            path.push_back(y);
            grow();
            path.pop_back();
            pos[y] = -1;
        }
    };
    grow();
}

Lasso to_lasso(const Graph& gr, const std::vector<int>& path, int back)
{
    Lasso l;
    for (int k = 0; k < static_cast<int>(path.size()); ++k)
        (k < back ? l.stem : l.cycle).push_back(gr.vertex[path[k]]);
    return l;
}

// Least initial credit that survives the lasso, never if none does.
long energy_need(const Game& g, const Lasso& l, int player)
{
    std::vector<int> seq = l.stem;
    seq.insert(seq.end(), l.cycle.begin(), l.cycle.end());
    seq.push_back(l.cycle.front());
    Rational level = 0, low = 0, cycle = 0;
    for (size_t k = 0; k + 1 < seq.size(); ++k) {
        const Rational r = edge_reward(g, player, seq[k], seq[k + 1]);
        level += r;
        low = std::min(low, level);
        if (k >= l.stem.size())
            cycle += r;
    }
    if (cycle < 0)
        return never;
    const Rational need = -low;
    return static_cast<long>(need.get_num().get_si() / need.get_den().get_si() +
                             (need.get_num() % need.get_den() != 0));
}

long hit_time(const Game& g, const Lasso& l, int player)
{
    const long total = static_cast<long>(l.stem.size() + l.cycle.size());
    for (long k = 0; k < total; ++k)
        if (g.targets[player][l.at(k)])
            return k;
    return never;
}

bool strongly_connected(const Game& g, const std::vector<int>& set)
{
    std::set<int> in(set.begin(), set.end());
    for (int s : set) {
        std::set<int> seen;
        std::vector<int> stack;
        for (int w : g.successors(s))
            if (in.count(w) && seen.insert(w).second)
                stack.push_back(w);
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int w : g.successors(x))
                if (in.count(w) && seen.insert(w).second)
                    stack.push_back(w);
        }
        if (seen.size() != in.size())
            return false;
    }
    return true;
}

std::set<int> reachable(const Game& g, int v0)
{
    std::set<int> seen{v0};
    std::vector<int> stack{v0};
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int w : g.successors(x))
            if (seen.insert(w).second)
                stack.push_back(w);
    }
    return seen;
}

}  // namespace

Rational payoff(const Game& g, const Lasso& l, int player)
{
    switch (g.payoff) {
    case rv::PayoffClass::parity: {
        long m = std::numeric_limits<long>::max();
        for (int v : l.cycle)
            m = std::min(m, g.colors[player][v]);
        return m % 2 == 0 ? 1 : 0;
    }
    case rv::PayoffClass::reach: {
        const long t = hit_time(g, l, player);
        return t == never ? Rational(0) : Rational(1, t + 1);
    }
    case rv::PayoffClass::energy:
        return energy_need(g, l, player) == 0 ? 1 : 0;
    case rv::PayoffClass::mean: {
        Rational sum = 0;
        for (size_t k = 0; k < l.cycle.size(); ++k)
            sum += edge_reward(g, player, l.cycle[k], l.cycle[(k + 1) % l.cycle.size()]);
        return sum / static_cast<long>(l.cycle.size());
    }
    case rv::PayoffClass::discounted: {
        const Rational lambda = g.discount;
        Rational stem = 0, cycle = 0;
        std::vector<int> seq = l.stem;
        seq.push_back(l.cycle.front());
        for (size_t k = 0; k + 1 < seq.size(); ++k)
            stem += pow(lambda, static_cast<long>(k)) * edge_reward(g, player, seq[k], seq[k + 1]);
        const long c = static_cast<long>(l.cycle.size());
        for (long k = 0; k < c; ++k)
            cycle += pow(lambda, k) * edge_reward(g, player, l.cycle[k], l.cycle[(k + 1) % c]);
        return stem + pow(lambda, static_cast<long>(l.stem.size())) * cycle / (1 - pow(lambda, c));
    }
    }
    return 0;
}

std::vector<Lasso> rho_lassos(const Game& g, int v0)
{
    Graph gr;
    gr.vertex.resize(g.num_vertices());
    gr.out.resize(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) {
        gr.vertex[v] = v;
        gr.out[v] = g.successors(v);
    }
    std::vector<Lasso> out;
    for_each_rho(gr, v0, [&](const std::vector<int>& path, int back) { out.push_back(to_lasso(gr, path, back)); });
    return out;
}

bool privilege_violated(const Game& g, int v0, const Rational& epsilon)
{
    if (g.payoff == rv::PayoffClass::parity) {
        if (epsilon >= 1)
            return false;
        const auto reach = reachable(g, v0);
        const int n = g.num_vertices();
        for (int mask = 1; mask < (1 << n); ++mask) {
            std::vector<int> set;
            for (int v = 0; v < n; ++v)
                if (mask >> v & 1)
                    set.push_back(v);
            if (!reach.count(set.front()) || !strongly_connected(g, set))
                continue;
            long ca = std::numeric_limits<long>::max(), ce = ca;
            for (int v : set) {
                ca = std::min(ca, g.colors[0][v]);
                ce = std::min(ce, g.colors[1][v]);
            }
            if (ca % 2 == 1 && ce % 2 == 0)
                return true;
        }
        return false;
    }
    for (const Lasso& l : rho_lassos(g, v0))
        if (payoff(g, l, 1) - payoff(g, l, 0) > epsilon)
            return true;
    return false;
}

namespace {

// The product of a game and a machine seen by one player: compliant moves follow
// the machine, free moves let the player pick any successor at its own vertices.
struct Product {
    const Game& g;
    const MealyMachine& m;
    int nodes() const { return m.num_states() * g.num_vertices(); }
    int node(int q, int v) const { return q * g.num_vertices() + v; }

    // (next state, successor) pairs allowed at (q, v).
    std::set<std::pair<int, int>> moves(int q, int v, int free_player, bool any_output) const
    {
        std::set<std::pair<int, int>> out;
        for (const auto& t : m.transitions) {
            if (t.from != q || t.read != v)
                continue;
            const bool free = any_output || g.owner[v] == free_player || t.output < 0;
            if (free)
                for (int w : g.successors(v))
                    out.insert({t.to, w});
            else
                out.insert({t.to, t.output});
        }
        return out;
    }

    Graph graph(int free_player, bool any_output) const
    {
        Graph gr;
        gr.vertex.resize(nodes());
        gr.out.resize(nodes());
        for (int q = 0; q < m.num_states(); ++q)
            for (int v = 0; v < g.num_vertices(); ++v) {
                gr.vertex[node(q, v)] = v;
                for (auto [q2, w] : moves(q, v, free_player, any_output))
                    gr.out[node(q, v)].push_back(node(q2, w));
            }
        return gr;
    }
};

// Best or worst outcome for the player over the rho lassos from a node.
struct Extreme {
    Rational value;  // parity, mean payoff, discounted
    long time = 0;   // reachability: first hit
    long need = 0;   // energy: least credit
};

Extreme extreme(const Game& g, const Graph& gr, int start, int player, bool best)
{
    Extreme x;
    bool first = true;
    for_each_rho(gr, start, [&](const std::vector<int>& path, int back) {
        const Lasso l = to_lasso(gr, path, back);
        Extreme y;
        if (g.payoff == rv::PayoffClass::reach)
            y.time = hit_time(g, l, player);
        else if (g.payoff == rv::PayoffClass::energy)
            y.need = energy_need(g, l, player);
        else
            y.value = payoff(g, l, player);
        if (first) {
            x = y;
            first = false;
            return;
        }
        if (best) {
            x.value = std::max(x.value, y.value);
            x.time = std::min(x.time, y.time);
            x.need = std::min(x.need, y.need);
        } else {
            x.value = std::min(x.value, y.value);
            x.time = std::max(x.time, y.time);
            x.need = std::max(x.need, y.need);
        }
    });
    return x;
}

long largest_reward(const Game& g)
{
    long w = 1;
    for (const auto& rs : g.rewards)
        for (const auto& r : rs)
            w = std::max(w, mpz_class(abs(r.get_num()) / r.get_den()).get_si() + 1);
    return w;
}

}  // namespace

bool check_violated(const Game& g, int v0, const MealyMachine& m, bool spe)
{
    if (!g.unit_durations())
        throw rv::GameError("oracle needs unit durations");
    const Product p{g, m};
    const bool energy = g.payoff == rv::PayoffClass::energy;
    const bool reach = g.payoff == rv::PayoffClass::reach;
    const long cap = (p.nodes() + 1) * largest_reward(g);
    for (int i = 0; i < g.num_players(); ++i) {
        const Graph compliant = p.graph(-1, false);
        const Graph deviating = p.graph(i, false);
        std::vector<Extreme> worst(p.nodes()), best(p.nodes());
        for (int x = 0; x < p.nodes(); ++x) {
            worst[x] = extreme(g, compliant, x, i, false);
            best[x] = extreme(g, deviating, x, i, true);
        }
        // Histories summarised by (state, vertex, energy level or target flag).
        std::set<std::tuple<int, int, long>> seen;
        std::vector<std::tuple<int, int, long>> stack;
        auto visit = [&](int q, int v, long level) {
            if (energy) {
                if (level < 0)
                    return;
                level = std::min(level, cap);
            }
            if (reach && g.targets[i][v])
                return;
            if (seen.insert({q, v, level}).second)
                stack.push_back({q, v, level});
        };
        visit(m.initial, v0, 0);
        while (!stack.empty()) {
            const auto [q, u, level] = stack.back();
            stack.pop_back();
            // Continue the shared history.
            for (auto [q2, w] : p.moves(q, u, -1, spe)) {
                const long r = energy ? edge_reward(g, i, u, w).get_num().get_si() : 0;
                visit(q2, w, level + r);
            }
            if (g.owner[u] != i)
                continue;
            for (auto [q1, v] : p.moves(q, u, -1, false))
                for (auto [q2, w] : p.moves(q, u, i, false)) {
                    if (w == v)
                        continue;
                    const Extreme& c = worst[p.node(q1, v)];
                    const Extreme& d = best[p.node(q2, w)];
                    bool gain = false;
                    switch (g.payoff) {
                    case rv::PayoffClass::parity:
                    case rv::PayoffClass::mean:
                        gain = d.value > c.value;
                        break;
                    case rv::PayoffClass::discounted:
                        gain = edge_reward(g, i, u, w) + g.discount * d.value >
                               edge_reward(g, i, u, v) + g.discount * c.value;
                        break;
                    case rv::PayoffClass::reach:
                        gain = d.time < c.time;
                        break;
                    case rv::PayoffClass::energy: {
                        const long lc = level + edge_reward(g, i, u, v).get_num().get_si();
                        const long ld = level + edge_reward(g, i, u, w).get_num().get_si();
                        const bool dies = lc < 0 || c.need == never || c.need > lc;
                        const bool lives = ld >= 0 && d.need != never && d.need <= ld;
                        gain = dies && lives;
                        break;
                    }
                    }
                    if (gain)
                        return true;
                }
        }
    }
    return false;
}

std::vector<Rational> punish_mp_bruteforce(const Game& g, int player)
{
    const int n = g.num_vertices();
    std::vector<int> own, other;
    for (int v = 0; v < n; ++v)
        (g.owner[v] == player ? own : other).push_back(v);
    auto enumerate = [&](const std::vector<int>& vs, const std::function<void(const std::vector<int>&)>& f) {
        std::vector<int> choice(n, -1);
        std::function<void(size_t)> rec = [&](size_t k) {
            if (k == vs.size()) {
                f(choice);
                return;
            }
            for (int w : g.successors(vs[k])) {
                choice[vs[k]] = w;
                rec(k + 1);
            }
        };
        rec(0);
    };
    std::vector<Rational> result(n);
    for (int v0 = 0; v0 < n; ++v0) {
        std::optional<Rational> lo;
        enumerate(other, [&](const std::vector<int>& coalition) {
            std::optional<Rational> hi;
            enumerate(own, [&](const std::vector<int>& mine) {
                std::vector<int> next(n);
                for (int v = 0; v < n; ++v)
                    next[v] = g.owner[v] == player ? mine[v] : coalition[v];
                std::vector<int> pos(n, -1), seq;
                int v = v0;
                while (pos[v] < 0) {
                    pos[v] = static_cast<int>(seq.size());
                    seq.push_back(v);
                    v = next[v];
                }
                Lasso l{std::vector<int>(seq.begin(), seq.begin() + pos[v]),
                        std::vector<int>(seq.begin() + pos[v], seq.end())};
                const Rational x = payoff(g, l, player);
                if (!hi || x > *hi)
                    hi = x;
            });
            if (!lo || *hi < *lo)
                lo = hi;
        });
        result[v0] = *lo;
    }
    return result;
}

bool subset_sums_to(const std::vector<long>& set, long target)
{
    const size_t n = set.size();
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        long s = 0;
        for (size_t k = 0; k < n; ++k)
            if (mask >> k & 1)
                s += set[k];
        if (s == target)
            return true;
    }
    return false;
}

bool satisfiable(int variables, const std::vector<std::vector<int>>& clauses)
{
    for (int mask = 0; mask < (1 << variables); ++mask) {
        bool all = true;
        for (const auto& c : clauses) {
            bool any = false;
            for (int lit : c) {
                const bool val = mask >> (std::abs(lit) - 1) & 1;
                any = any || (lit > 0 ? val : !val);
            }
            all = all && any;
        }
        if (all)
            return true;
    }
    return false;
}

}  // namespace oracle
