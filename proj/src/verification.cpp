#include "rv/verification.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "rv/constructions.hpp"
#include "rv/graph.hpp"
#include "rv/simplex.hpp"
#include "rv/values.hpp"

namespace rv {

namespace {

constexpr long default_machine_budget = 10000;
constexpr long max_witness_length = 200000;

Adjacency adjacency(const Game& g)
{
    Adjacency adj(g.num_vertices());
    for (const auto& e : g.edges)
        adj[e.from].push_back(e.to);
    return adj;
}

Rational power(const Rational& x, long n)
{
    Rational r = 1;
    for (long k = 0; k < n; ++k)
        r *= x;
    return r;
}

void require_vertex(const Game& g, int v0)
{
    if (v0 < 0 || v0 >= g.num_vertices())
        throw GameError("initial vertex outside the game");
}

void require_player(const Game& g, int player)
{
    if (player < 0 || player >= g.num_players())
        throw GameError("unknown player");
}

// Lasso entering `cycle` from v0 through allowed vertices.
Lasso enter_cycle(const Game& g, int v0, const std::vector<char>& allowed, const std::vector<int>& cycle)
{
    const auto parent = bfs(adjacency(g), {v0}, allowed);
    auto path = path_to(parent, cycle.front());
    path.pop_back();
    return Lasso{path, cycle};
}

Rational ds_tolerance(const Game& g)
{
    const Rational m = discounted_bound(g);
    return m == 0 ? Rational(1) : m / (mpz_class(1) << 30);
}

// Certain violation, uncertain, or satisfied, for discounted-sum suffix conditions.
Status ds_conditions(const Game& g, const Lasso& play, const std::vector<std::vector<Enclosure>>& value)
{
    Status out = Status::holds;
    const long len = play.length();
    for (long k = 0; k < len; ++k) {
        const int v = play.at(k);
        const int j = g.owner[v];
        const Rational s = eval_payoff(g, suffix(play, k), j);
        if (s < value[j][v].low)
            return Status::fails;
        if (s < value[j][v].high)
            out = Status::inconclusive;
    }
    return out;
}

std::vector<std::vector<Enclosure>> ds_values(const Game& g)
{
    std::vector<std::vector<Enclosure>> value;
    const Rational tol = ds_tolerance(g);
    for (int j = 0; j < g.num_players(); ++j)
        value.push_back(punish_ds(g, j, tol));
    return value;
}

// ---------------------------------------------------------------- parity

// A strongly connected set inside `alive` whose least colour is even for the
// players in `even_for` and odd for `odd_for` (when not -1).
std::optional<std::vector<int>> parity_core(const Game& g, const Adjacency& adj, const std::vector<char>& alive,
                                            const std::vector<char>& even_for, int odd_for)
{
    std::vector<int> comp;
    const auto roots = scc(adj, comp, alive);
    const int n = g.num_vertices();
    for (size_t c = 0; c < roots.size(); ++c) {
        if (!nontrivial(adj, comp, static_cast<int>(c), roots[c]))
            continue;
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (comp[v] == static_cast<int>(c))
                members.push_back(v);
        std::vector<char> rest(n, 0);
        for (int v : members)
            rest[v] = 1;
        bool ok = true;
        for (int j = 0; j < g.num_players() && ok; ++j) {
            const bool want_even = even_for[j] != 0;
            const bool want_odd = j == odd_for;
            if (!want_even && !want_odd)
                continue;
            long low = g.colors[j][members.front()];
            for (int v : members)
                low = std::min(low, g.colors[j][v]);
            if ((low % 2 == 0) == want_even && (low % 2 != 0) == want_odd)
                continue;
            ok = false;
            for (int v : members)
                if (g.colors[j][v] == low)
                    rest[v] = 0;
        }
        if (ok)
            return members;
        if (auto inner = parity_core(g, adj, rest, even_for, odd_for))
            return inner;
    }
    return std::nullopt;
}

UTVerdict ut_parity(const Game& g, int v0, int player, const Rational& t)
{
    UTVerdict out;
    if (t < 0)
        return out;
    const bool lose = t < 1;
    const int np = g.num_players(), n = g.num_vertices();
    std::vector<std::vector<int>> win(np);
    for (int j = 0; j < np; ++j)
        win[j] = punish_parity(g, j);
    std::vector<int> relevant;
    for (int j = 0; j < np; ++j) {
        if (lose && j == player)
            continue;
        for (int v = 0; v < n; ++v)
            if (g.owner[v] == j && win[j][v]) {
                relevant.push_back(j);
                break;
            }
    }
    if (relevant.size() > 24)
        throw GameError("too many players for the parity threshold search");
    const Adjacency adj = adjacency(g);
    for (unsigned long mask = 0; mask < (1UL << relevant.size()); ++mask) {
        std::vector<char> even_for(np, 0);
        for (size_t b = 0; b < relevant.size(); ++b)
            even_for[relevant[b]] = (mask >> b) & 1;
        std::vector<char> allowed(n, 0);
        for (int v = 0; v < n; ++v)
            allowed[v] = even_for[g.owner[v]] || !win[g.owner[v]][v];
        if (!allowed[v0])
            continue;
        const auto parent = bfs(adj, {v0}, allowed);
        std::vector<char> reach(n, 0);
        for (int v = 0; v < n; ++v)
            reach[v] = parent[v] != -2;
        auto core = parity_core(g, adj, reach, even_for, lose ? player : -1);
        if (!core)
            continue;
        std::vector<char> inside(n, 0);
        for (int v : *core)
            inside[v] = 1;
        // Enter at the first core vertex on a shortest path.
        int start = core->front();
        long best = -1;
        for (int v : *core) {
            long d = static_cast<long>(path_to(parent, v).size());
            if (best < 0 || d < best) {
                best = d;
                start = v;
            }
        }
        out.status = Status::fails;
        out.witness = enter_cycle(g, v0, allowed, covering_cycle(adj, inside, *core, start));
        return out;
    }
    return out;
}

// ---------------------------------------------------------------- reachability

UTVerdict ut_qr(const Game& g, int v0, int player, const Rational& t)
{
    UTVerdict out;
    if (t < 0)
        return out;
    const int np = g.num_players(), n = g.num_vertices();
    if (np > 30)
        throw GameError("too many players for the reachability threshold search");
    // Time within which the owner must reach its target once it has visited v.
    std::vector<std::vector<long>> limit(np, std::vector<long>(n, -1));
    for (int j = 0; j < np; ++j) {
        const auto values = punish_qr(g, j).value;
        for (int v = 0; v < n; ++v)
            if (values[v] > 0)
                limit[j][v] = static_cast<long>(values[v].get_den().get_si()) - 1;
    }
    const bool free = t >= 1;
    const bool never = t == 0;
    long late = 0;  // earliest allowed hitting time for the player
    if (!free && !never) {
        Rational x = (1 - t) / t;
        mpz_class c = x.get_num() / x.get_den();
        if (c * x.get_den() != x.get_num())
            ++c;
        late = c.get_si();
    }
    // State: vertex, hit mask, deadlines, elapsed time of the player (capped).
    using State = std::vector<long>;
    auto arrive = [&](State& s, int v) {
        s[0] = v;
        for (int j = 0; j < np; ++j) {
            if (!g.targets[j][v] || (s[1] >> j & 1))
                continue;
            if (j == player && !free && (never || s[2 + np] < late))
                return false;
            s[1] |= 1L << j;
            s[2 + j] = -1;
        }
        const int j = g.owner[v];
        if (!(s[1] >> j & 1) && limit[j][v] >= 0)
            s[2 + j] = s[2 + j] < 0 ? limit[j][v] : std::min(s[2 + j], limit[j][v]);
        return true;
    };
    State init(3 + np, -1);
    init[1] = 0;
    init[2 + np] = 0;
    if (!arrive(init, v0))
        return out;
    std::map<State, int> id;
    std::vector<State> states;
    std::vector<std::vector<int>> next;
    id[init] = 0;
    states.push_back(init);
    for (size_t k = 0; k < states.size(); ++k) {
        next.emplace_back();
        const State s = states[k];
        for (int e : g.out[s[0]]) {
            State r = s;
            const long d = g.duration(e);
            bool dead = false;
            for (int j = 0; j < np; ++j)
                if (r[2 + j] >= 0 && (r[2 + j] -= d) < 0)
                    dead = true;
            if (dead)
                continue;
            if (!free && !never && !(r[1] >> player & 1))
                r[2 + np] = std::min(r[2 + np] + d, late);
            if (!arrive(r, g.edges[e].to))
                continue;
            auto [it, fresh] = id.emplace(r, static_cast<int>(states.size()));
            if (fresh)
                states.push_back(r);
            next[k].push_back(it->second);
        }
    }
    std::vector<int> comp;
    const auto roots = scc(next, comp);
    for (size_t k = 0; k < states.size(); ++k) {
        const int c = comp[k];
        if (!nontrivial(next, comp, c, roots[c]))
            continue;
        // Path to state k, then back to k inside its component.
        auto parent = bfs(next, {0});
        auto path = path_to(parent, static_cast<int>(k));
        std::vector<char> inside(states.size(), 0);
        for (size_t x = 0; x < states.size(); ++x)
            inside[x] = comp[x] == c;
        auto loop = covering_cycle(next, inside, {static_cast<int>(k)}, static_cast<int>(k));
        Lasso l;
        for (size_t x = 0; x + 1 < path.size(); ++x)
            l.stem.push_back(static_cast<int>(states[path[x]][0]));
        for (int x : loop)
            l.cycle.push_back(static_cast<int>(states[x][0]));
        out.status = Status::fails;
        out.witness = l;
        return out;
    }
    return out;
}

// ---------------------------------------------------------------- mean payoff

struct Circulation {
    std::vector<int> edges;
    std::vector<Rational> flow;
};

bool connected_support(const Game& g, const Circulation& c)
{
    std::vector<int> root(g.num_vertices());
    std::iota(root.begin(), root.end(), 0);
    std::function<int(int)> find = [&](int x) { return root[x] == x ? x : root[x] = find(root[x]); };
    int first = -1;
    for (size_t k = 0; k < c.edges.size(); ++k) {
        if (c.flow[k] == 0)
            continue;
        const auto& e = g.edges[c.edges[k]];
        root[find(e.from)] = find(e.to);
        first = e.from;
    }
    for (size_t k = 0; k < c.edges.size(); ++k)
        if (c.flow[k] != 0 && find(g.edges[c.edges[k]].from) != find(first))
            return false;
    return true;
}

// Closed walk using every edge of the support as often as its scaled flow.
std::optional<std::vector<int>> euler_walk(const Game& g, const Circulation& c, int start)
{
    mpz_class den = 1;
    for (const auto& f : c.flow)
        if (f != 0)
            den = lcm(den, mpz_class(f.get_den()));
    mpz_class common = 0;
    std::vector<mpz_class> count(c.flow.size());
    for (size_t k = 0; k < c.flow.size(); ++k) {
        count[k] = c.flow[k].get_num() * (den / c.flow[k].get_den());
        common = gcd(common, count[k]);
    }
    mpz_class total = 0;
    for (auto& x : count) {
        x /= common;
        total += x;
    }
    if (total > max_witness_length)
        return std::nullopt;
    std::vector<std::vector<std::pair<int, long>>> out(g.num_vertices());
    for (size_t k = 0; k < count.size(); ++k)
        if (count[k] > 0)
            out[g.edges[c.edges[k]].from].push_back({g.edges[c.edges[k]].to, count[k].get_si()});
    std::vector<int> stack{start}, walk;
    while (!stack.empty()) {
        int v = stack.back();
        auto it = std::find_if(out[v].begin(), out[v].end(), [](const auto& p) { return p.second > 0; });
        if (it == out[v].end()) {
            walk.push_back(v);
            stack.pop_back();
        } else {
            --it->second;
            stack.push_back(it->first);
        }
    }
    std::reverse(walk.begin(), walk.end());
    walk.pop_back();
    return walk;
}

struct MpQuery {
    const Game& g;
    int player;
    Rational t;
    std::vector<std::optional<Rational>> level;  // lower bound on each player's payoff

    std::vector<LinearConstraint> rows(const std::vector<int>& edges, const std::vector<int>& members,
                                       bool slack) const
    {
        const int m = static_cast<int>(edges.size()) + slack;
        std::vector<LinearConstraint> out;
        for (int v : members) {
            LinearConstraint r{std::vector<Rational>(m, 0), Sense::eq, 0};
            for (size_t k = 0; k < edges.size(); ++k) {
                if (g.edges[edges[k]].to == v)
                    r.coef[k] += 1;
                if (g.edges[edges[k]].from == v)
                    r.coef[k] -= 1;
            }
            out.push_back(r);
        }
        LinearConstraint norm{std::vector<Rational>(m, 0), Sense::eq, 1};
        for (size_t k = 0; k < edges.size(); ++k)
            norm.coef[k] = g.duration(edges[k]);
        out.push_back(norm);
        for (int j = 0; j < g.num_players(); ++j) {
            if (!level[j])
                continue;
            LinearConstraint r{std::vector<Rational>(m, 0), Sense::ge, 0};
            for (size_t k = 0; k < edges.size(); ++k)
                r.coef[k] = g.rewards[j][edges[k]] - *level[j] * g.duration(edges[k]);
            if (slack)
                r.coef[m - 1] = -1;
            out.push_back(r);
        }
        LinearConstraint own{std::vector<Rational>(m, 0), Sense::le, 0};
        for (size_t k = 0; k < edges.size(); ++k)
            own.coef[k] = g.rewards[player][edges[k]] - t * g.duration(edges[k]);
        if (slack)
            own.coef[m - 1] = 1;
        out.push_back(own);
        if (slack) {
            LinearConstraint cap{std::vector<Rational>(m, 0), Sense::le, 1};
            cap.coef[m - 1] = 1;
            out.push_back(cap);
        }
        return out;
    }

    bool satisfied(const std::vector<int>& edges, const std::vector<Rational>& f) const
    {
        for (const auto& r : rows(edges, {}, false)) {
            Rational lhs = 0;
            for (size_t k = 0; k < f.size(); ++k)
                lhs += r.coef[k] * f[k];
            if ((r.sense == Sense::ge && lhs < r.rhs) || (r.sense == Sense::le && lhs > r.rhs))
                return false;
        }
        return true;
    }
};

// Cycle of a connected circulation meeting the query inside the component.
std::optional<std::vector<int>> mp_cycle(const MpQuery& q, const Adjacency& adj, const std::vector<int>& members,
                                         const std::vector<int>& edges, std::vector<Rational> flow, int start)
{
    const Game& g = q.g;
    Circulation c{edges, flow};
    if (!connected_support(g, c)) {
        std::vector<Rational> obj(edges.size() + 1, 0);
        obj.back() = 1;
        auto best = maximize(static_cast<int>(edges.size()) + 1, q.rows(edges, members, true), obj);
        if (!best || best->back() <= 0)
            return std::nullopt;
        best->pop_back();
        // Blend with a walk through every member of the component.
        std::vector<char> inside(g.num_vertices(), 0);
        for (int v : members)
            inside[v] = 1;
        auto walk = covering_cycle(adj, inside, members, members.front());
        std::vector<Rational> spread(edges.size(), 0);
        Rational time = 0;
        for (size_t k = 0; k < walk.size(); ++k) {
            int e = g.find_edge(walk[k], walk[(k + 1) % walk.size()]);
            auto pos = std::find(edges.begin(), edges.end(), e) - edges.begin();
            spread[pos] += 1;
            time += g.duration(e);
        }
        for (auto& x : spread)
            x /= time;
        Rational delta = Rational(1, 2);
        for (;; delta /= 2) {
            for (size_t k = 0; k < edges.size(); ++k)
                flow[k] = (1 - delta) * (*best)[k] + delta * spread[k];
            if (q.satisfied(edges, flow))
                break;
        }
        c.flow = flow;
    }
    int from = start;
    bool in_support = false;
    for (size_t k = 0; k < edges.size(); ++k)
        in_support = in_support || (c.flow[k] != 0 && g.edges[edges[k]].from == from);
    if (!in_support)
        for (size_t k = 0; k < edges.size(); ++k)
            if (c.flow[k] != 0) {
                from = g.edges[edges[k]].from;
                break;
            }
    return euler_walk(g, c, from);
}

UTVerdict ut_mp(const Game& g, int v0, int player, const Rational& t)
{
    UTVerdict out;
    const int np = g.num_players(), n = g.num_vertices();
    std::vector<std::vector<Rational>> value(np);
    std::vector<std::vector<Rational>> levels(np);
    for (int j = 0; j < np; ++j) {
        value[j] = punish_mp(g, j);
        for (int v = 0; v < n; ++v)
            if (g.owner[v] == j)
                levels[j].push_back(value[j][v]);
        std::sort(levels[j].begin(), levels[j].end());
        levels[j].erase(std::unique(levels[j].begin(), levels[j].end()), levels[j].end());
    }
    const Adjacency adj = adjacency(g);
    std::vector<size_t> choice(np, 0);  // 0: owns no visited vertex, k: level k-1
    MpQuery q{g, player, t, std::vector<std::optional<Rational>>(np)};
    for (;;) {
        bool skip = false;
        for (int j = 0; j < np; ++j)
            q.level[j] = choice[j] ? std::optional<Rational>(levels[j][choice[j] - 1]) : std::nullopt;
        if (q.level[player] && *q.level[player] > t)
            skip = true;
        std::vector<char> allowed(n, 0);
        for (int v = 0; v < n; ++v) {
            const auto& l = q.level[g.owner[v]];
            allowed[v] = l && value[g.owner[v]][v] <= *l;
        }
        if (!skip && allowed[v0]) {
            const auto parent = bfs(adj, {v0}, allowed);
            std::vector<char> reach(n, 0);
            for (int v = 0; v < n; ++v)
                reach[v] = parent[v] != -2;
            std::vector<int> comp;
            const auto roots = scc(adj, comp, reach);
            for (size_t c = 0; c < roots.size(); ++c) {
                if (!nontrivial(adj, comp, static_cast<int>(c), roots[c]))
                    continue;
                std::vector<int> members, edges;
                for (int v = 0; v < n; ++v)
                    if (comp[v] == static_cast<int>(c))
                        members.push_back(v);
                for (int e = 0; e < g.num_edges(); ++e)
                    if (comp[g.edges[e].from] == static_cast<int>(c) && comp[g.edges[e].to] == static_cast<int>(c))
                        edges.push_back(e);
                auto flow = feasible_point(static_cast<int>(edges.size()), q.rows(edges, members, false));
                if (!flow)
                    continue;
                int start = members.front();
                size_t best = 0;
                for (int v : members) {
                    size_t d = path_to(parent, v).size();
                    if (best == 0 || d < best) {
                        best = d;
                        start = v;
                    }
                }
                out.status = Status::fails;
                if (auto cycle = mp_cycle(q, adj, members, edges, *flow, start))
                    out.witness = enter_cycle(g, v0, allowed, *cycle);
                return out;
            }
        }
        int j = 0;
        while (j < np && ++choice[j] > levels[j].size())
            choice[j++] = 0;
        if (j == np)
            break;
    }
    return out;
}

// ---------------------------------------------------------------- discounted sum

UTVerdict ut_ds(const Game& g, int v0, int player, const Rational& t, long bound)
{
    UTVerdict out;
    const int n = g.num_vertices();
    // Every play gives the player at least the least value of the all-minimising game.
    {
        const Rational tol = ds_tolerance(g);
        const auto order = zero_duration_order(g);
        std::vector<Rational> x(n, 0), next(n, 0);
        Rational radius = discounted_bound(g);
        while (radius > tol) {
            for (int v : order) {
                bool first = true;
                Rational low;
                for (int e : g.out[v]) {
                    int to = g.edges[e].to;
                    Rational c = g.rewards[player][e] + (g.duration(e) == 0 ? next[to] : g.discount * x[to]);
                    if (first || c < low)
                        low = c;
                    first = false;
                }
                next[v] = low;
            }
            std::swap(x, next);
            radius *= g.discount;
        }
        if (x[v0] - radius > t)
            return out;
    }
    const auto value = ds_values(g);
    const long cap = bound > 0 ? bound : n;
    out.status = Status::inconclusive;
    out.bound = cap;
    std::vector<int> path{v0};
    bool done = false;
    std::function<void()> grow = [&]() {
        const long len = static_cast<long>(path.size());
        for (long j = 0; j <= std::min(cap, len - 1) && !done; ++j) {
            if (g.find_edge(path.back(), path[j]) < 0)
                continue;
            std::vector<int> cyc(path.begin() + j, path.end());
            auto sorted = cyc;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                continue;
            Lasso l{std::vector<int>(path.begin(), path.begin() + j), cyc};
            if (eval_payoff(g, l, player) > t)
                continue;
            if (ds_conditions(g, l, value) == Status::holds) {
                out.status = Status::fails;
                out.witness = l;
                done = true;
            }
        }
        if (done || len >= cap + n)
            return;
        for (int w : g.successors(path.back())) {
            if (len >= cap && std::find(path.begin() + cap, path.end(), w) != path.end())
                continue;
            path.push_back(w);
            grow();
            path.pop_back();
            if (done)
                return;
        }
    };
    grow();
    return out;
}

// ---------------------------------------------------------------- enumeration

MealyMachine table_machine(const Game& g, int states, const std::vector<int>& next, const std::vector<int>& output,
                           bool complete)
{
    const int n = g.num_vertices();
    MealyMachine m;
    for (int q = 0; q < states; ++q)
        m.states.push_back("q" + std::to_string(q));
    m.controlled.assign(g.num_players(), 1);
    for (int q = 0; q < states; ++q)
        for (int v = 0; v < n; ++v) {
            const int e = q * n + v;
            if (next[e] >= 0)
                m.transitions.push_back({q, v, next[e], output[e]});
            else if (complete)
                m.transitions.push_back({q, v, 0, g.edges[g.out[v].front()].to});
        }
    m.index(n);
    return m;
}

UTVerdict energy_search(const Game& g, int v0, int player, long budget, bool need_loss)
{
    if (budget <= 0)
        throw GameError("budget must be positive");
    const int n = g.num_vertices();
    UTVerdict out;
    out.status = Status::inconclusive;
    long count = 0;
    for (int s = 1;; ++s) {
        const int entries = s * n;
        std::vector<int> digit(entries, 0), radix(entries);
        for (int e = 0; e < entries; ++e)
            radix[e] = s * static_cast<int>(g.out[e % n].size());
        for (;;) {
            if (count >= budget) {
                out.bound = count;
                return out;
            }
            ++count;
            std::vector<int> next(entries), output(entries);
            for (int e = 0; e < entries; ++e) {
                const int v = e % n;
                const int deg = static_cast<int>(g.out[v].size());
                next[e] = digit[e] / deg;
                output[e] = g.edges[g.out[v][digit[e] % deg]].to;
            }
            MealyMachine m = table_machine(g, s, next, output, true);
            const Lasso outcome = deterministic_outcome(g, v0, m).lasso;
            if ((!need_loss || eval_payoff(g, outcome, player) == 0) &&
                check_energy_det_nash(g, v0, m).status == Status::holds) {
                out.status = Status::fails;
                out.witness = outcome;
                out.machine = m;
                out.bound = count;
                return out;
            }
            int e = entries - 1;
            while (e >= 0 && ++digit[e] == radix[e])
                digit[e--] = 0;
            if (e < 0)
                break;
        }
    }
}

// Depth-first search over machine tables, filling the outcome first and then every
// configuration reachable along some history. A failed subtree reports the entries
// its failure rests on, so that branches not involving them are skipped.
class SpeSearch {
public:
    SpeSearch(const Game& g, int v0, int player, const Rational& t, int memory)
        : g_(g), v0_(v0), player_(player), t_(t), memory_(memory), n_(g.num_vertices()),
          next_(memory * n_, -1), output_(memory * n_, -1)
    {
        energy_ = g.payoff == PayoffClass::energy;
        // From a forced vertex every continuation is the same, so its entries keep
        // the state and never branch.
        std::vector<char> forced(n_, 1);
        for (bool changed = true; changed;) {
            changed = false;
            for (int v = 0; v < n_; ++v) {
                if (!forced[v])
                    continue;
                const auto succ = g.successors(v);
                if (succ.size() != 1 || !forced[succ.front()]) {
                    forced[v] = 0;
                    changed = true;
                }
            }
        }
        for (int q = 0; q < memory_; ++q)
            for (int v = 0; v < n_; ++v)
                if (forced[v]) {
                    next_[q * n_ + v] = q;
                    output_[q * n_ + v] = g.successors(v).front();
                }
        fixed_ = forced;
    }

    std::optional<UTVerdict> run()
    {
        explore();
        return found_;
    }

private:
    using Conflict = std::vector<char>;

    Conflict assigned() const
    {
        Conflict c(next_.size(), 0);
        for (size_t e = 0; e < next_.size(); ++e)
            c[e] = next_[e] >= 0 && !fixed_[e % n_];
        return c;
    }

    Conflict explore()
    {
        // Follow the outcome first.
        std::map<std::pair<int, int>, int> seen;
        std::vector<int> verts;
        Conflict used(next_.size(), 0);
        int q = 0, v = v0_;
        while (!seen.count({q, v})) {
            seen[{q, v}] = static_cast<int>(verts.size());
            verts.push_back(v);
            const int e = q * n_ + v;
            if (next_[e] < 0)
                return branch(e);
            used[e] = !fixed_[v];
            q = next_[e];
            v = output_[e];
        }
        const int k = seen[{q, v}];
        const Lasso outcome{std::vector<int>(verts.begin(), verts.begin() + k),
                            std::vector<int>(verts.begin() + k, verts.end())};
        if (eval_payoff(g_, outcome, player_) > t_)
            return used;
        // Then the other configurations reachable along any history.
        std::vector<char> reached(memory_ * n_, 0);
        std::vector<int> stack{v0_};
        reached[v0_] = 1;
        int pending = -1;
        while (!stack.empty()) {
            const int e = stack.back();
            stack.pop_back();
            if (next_[e] < 0) {
                if (pending < 0 || e < pending)
                    pending = e;
                continue;
            }
            for (int w : g_.successors(e % n_)) {
                const int f = next_[e] * n_ + w;
                if (!reached[f]) {
                    reached[f] = 1;
                    stack.push_back(f);
                }
            }
        }
        if (pending >= 0)
            return branch(pending);
        MealyMachine m = table_machine(g_, used_, next_, output_, true);
        if (check_spe(g_, v0_, m).status == Status::holds) {
            UTVerdict out;
            out.status = Status::fails;
            out.witness = outcome;
            out.machine = m;
            out.bound = memory_;
            found_ = out;
        }
        return assigned();
    }

    Conflict branch(int e)
    {
        const int v = e % n_;
        const int limit = std::min(used_ + 1, memory_);
        // While states remain to be introduced, the available values depend on the
        // whole assignment.
        Conflict acc = used_ < memory_ ? assigned() : Conflict(next_.size(), 0);
        for (int q = 0; q < limit; ++q)
            for (int w : g_.successors(v)) {
                const bool fresh = q == used_;
                used_ += fresh;
                next_[e] = q;
                output_[e] = w;
                Conflict sub = refuted();
                if (sub.empty())
                    sub = explore();
                next_[e] = output_[e] = -1;
                used_ -= fresh;
                if (found_)
                    return {};
                if (!sub[e])
                    return sub;
                for (size_t x = 0; x < sub.size(); ++x)
                    acc[x] = acc[x] || sub[x];
            }
        acc[e] = 0;
        return acc;
    }

    // Entries of an already profitable deviation, whatever the missing transitions
    // are; empty when there is none.
    Conflict refuted()
    {
        if (!energy_)
            return {};
        MealyMachine m = table_machine(g_, used_, next_, output_, false);
        const long cap = std::max(1L, default_check_cap(g_, m) / 4);
        std::vector<std::pair<int, int>> support;
        if (check_energy_general(g_, v0_, m, CheckMode::spe, cap, &support).status != Status::fails)
            return {};
        Conflict c(next_.size(), 0);
        for (auto [q, v] : support)
            if (next_[q * n_ + v] >= 0 && !fixed_[v])
                c[q * n_ + v] = 1;
        return c;
    }

    const Game& g_;
    int v0_, player_;
    Rational t_;
    int memory_, n_;
    std::vector<int> next_, output_;
    int used_ = 1;
    bool energy_ = false;
    std::vector<char> fixed_;
    std::optional<UTVerdict> found_;
};

// ---------------------------------------------------------------- discounted tree search

class DsTree {
public:
    DsTree(const Game& g, int v0, int player, const Rational& t, int depth, CheckMode mode)
        : g_(g), player_(player), t_(t), depth_(depth), mode_(mode), bound_(discounted_bound(g))
    {
        hist_.push_back({v0});
        parent_.push_back(-1);
        size_t level_begin = 0;
        // Complete levels, one beyond the deepest history that can receive a move.
        while (true) {
            const size_t level_end = hist_.size();
            const bool enough = level_end > static_cast<size_t>(depth);
            for (size_t h = level_begin; h < level_end; ++h) {
                auto succ = g.successors(hist_[h].back());
                std::sort(succ.begin(), succ.end());
                for (int w : succ) {
                    auto next = hist_[h];
                    next.push_back(w);
                    child_[{static_cast<int>(h), w}] = static_cast<int>(hist_.size());
                    hist_.push_back(next);
                    parent_.push_back(static_cast<int>(h));
                }
            }
            level_begin = level_end;
            if (enough)
                break;
        }
        sigma_.assign(hist_.size(), -1);
    }

    bool closes() { return explore(0).has_value(); }

private:
    Rational weight(long k) const { return power(g_.discount, k); }

    // Discounted sum of h from position k.
    Rational ds(const std::vector<int>& h, size_t k, int j) const
    {
        Rational s = 0, w = 1;
        for (size_t x = k; x + 1 < h.size(); ++x) {
            s += w * g_.reward(j, h[x], h[x + 1]);
            w *= g_.discount;
        }
        return s;
    }

    // Prefix of history `id` of length len + 1.
    int prefix(int id, size_t len) const
    {
        while (hist_[id].size() > len + 1)
            id = parent_[id];
        return id;
    }

    using Conflict = std::set<int>;

    // Positions from..end-1 follow sigma, except moves of `skip`. The consulted
    // moves go to `used` when given.
    bool follows(int id, size_t from, int skip, Conflict* used = nullptr) const
    {
        const auto& h = hist_[id];
        for (size_t s = from; s + 1 < h.size(); ++s) {
            if (g_.owner[h[s]] == skip)
                continue;
            const int at = prefix(id, s);
            if (sigma_[at] != h[s + 1])
                return false;
            if (used)
                used->insert(at);
        }
        return true;
    }

    bool off_topic(int n, Conflict& used) const
    {
        int id = 0;
        while (id < n && sigma_[id] >= 0) {
            auto it = child_.find({id, sigma_[id]});
            if (it == child_.end())
                break;
            used.insert(id);
            id = it->second;
        }
        const auto& h = hist_[id];
        return ds(h, 0, player_) - bound_ * weight(static_cast<long>(h.size()) - 1) > t_;
    }

    bool irrational(int n, Conflict& used) const
    {
        if (n == 0)
            return false;
        // Histories whose proper prefixes may already carry moves. Pairs outside
        // the subtree of the latest move were cleared on the way down.
        std::map<size_t, std::vector<int>> by_length;
        std::vector<char> fresh(hist_.size(), 0);
        for (size_t id = 0; id < hist_.size(); ++id) {
            fresh[id] = static_cast<int>(id) == n - 1 || (parent_[id] >= 0 && fresh[parent_[id]]);
            if (parent_[id] < n)
                by_length[hist_[id].size()].push_back(static_cast<int>(id));
        }
        for (const auto& [p, ids] : by_length)
            for (int l : ids)
                for (int m : ids) {
                    if (l == m || !(fresh[l] || fresh[m]))
                        continue;
                    const auto& hl = hist_[l];
                    const auto& hm = hist_[m];
                    for (size_t k = 0; k + 1 < p && hl[k] == hm[k]; ++k) {
                        if (!follows(l, k, -1))
                            continue;
                        if (mode_ == CheckMode::nash && !follows(prefix(l, k), 0, -1))
                            continue;
                        const Rational gap = 2 * bound_ * weight(static_cast<long>(p - k) - 1);
                        for (int j = 0; j < g_.num_players(); ++j)
                            if (follows(m, k, j) && ds(hm, k, j) - ds(hl, k, j) > gap) {
                                follows(l, k, -1, &used);
                                if (mode_ == CheckMode::nash)
                                    follows(prefix(l, k), 0, -1, &used);
                                follows(m, k, j, &used);
                                used.insert(parent_[l]);
                                used.insert(parent_[m]);
                                return true;
                            }
                    }
                }
        return false;
    }

    // The moves a closed subtree rests on; empty optional when a branch stays open.
    // A child closed without looking at the move at n closes n as well.
    std::optional<Conflict> explore(int n)
    {
        Conflict used;
        if (off_topic(n, used) || irrational(n, used))
            return used;
        if (n == depth_)
            return std::nullopt;
        auto succ = g_.successors(hist_[n].back());
        std::sort(succ.begin(), succ.end());
        Conflict all;
        for (int w : succ) {
            sigma_[n] = w;
            auto sub = explore(n + 1);
            sigma_[n] = -1;
            if (!sub)
                return sub;
            if (!sub->count(n))
                return sub;
            sub->erase(n);
            all.insert(sub->begin(), sub->end());
        }
        return all;
    }

    const Game& g_;
    int player_;
    Rational t_;
    int depth_;
    CheckMode mode_;
    Rational bound_;
    std::vector<std::vector<int>> hist_;
    std::vector<int> parent_;
    std::map<std::pair<int, int>, int> child_;
    std::vector<int> sigma_;
};

}  // namespace

Status nash_outcome_status(const Game& g, const Lasso& play)
{
    if (!is_valid_lasso(g, play))
        throw GameError("invalid lasso");
    const int np = g.num_players();
    const long len = play.length();
    std::vector<char> visited(np, 0);
    for (long k = 0; k < len; ++k)
        visited[g.owner[play.at(k)]] = 1;
    const auto payoff = eval_payoff(g, play);
    switch (g.payoff) {
    case PayoffClass::parity:
        for (int j = 0; j < np; ++j) {
            if (!visited[j] || payoff[j] == 1)
                continue;
            const auto win = punish_parity(g, j);
            for (long k = 0; k < len; ++k)
                if (g.owner[play.at(k)] == j && win[play.at(k)])
                    return Status::fails;
        }
        return Status::holds;
    case PayoffClass::mean:
        for (int j = 0; j < np; ++j) {
            if (!visited[j])
                continue;
            const auto value = punish_mp(g, j);
            for (long k = 0; k < len; ++k)
                if (g.owner[play.at(k)] == j && payoff[j] < value[play.at(k)])
                    return Status::fails;
        }
        return Status::holds;
    case PayoffClass::reach:
        for (int j = 0; j < np; ++j) {
            if (!visited[j])
                continue;
            const auto value = punish_qr(g, j).value;
            bool hit = false;
            for (long k = 0; k < len && !hit; ++k) {
                const int v = play.at(k);
                if (g.owner[v] == j && !g.targets[j][v] && eval_payoff(g, suffix(play, k), j) < value[v])
                    return Status::fails;
                hit = g.targets[j][v];
            }
        }
        return Status::holds;
    case PayoffClass::energy:
        for (int j = 0; j < np; ++j) {
            if (!visited[j] || payoff[j] == 1)
                continue;
            const auto credit = punish_energy(g, j);
            Rational level = 0;
            for (long k = 0; level >= 0; ++k) {
                const int v = play.at(k);
                if (g.owner[v] == j && credit[v].is_finite() && credit[v].value() <= level)
                    return Status::fails;
                level += g.reward(j, v, play.at(k + 1));
            }
        }
        return Status::holds;
    case PayoffClass::discounted:
        return ds_conditions(g, play, ds_values(g));
    }
    return Status::holds;
}

UTVerdict verify_nash_ut(const Game& g, int v0, int player, const Rational& t, long bound)
{
    require_vertex(g, v0);
    require_player(g, player);
    switch (g.payoff) {
    case PayoffClass::parity: return ut_parity(g, v0, player, t);
    case PayoffClass::reach: return ut_qr(g, v0, player, t);
    case PayoffClass::mean: return ut_mp(g, v0, player, t);
    case PayoffClass::discounted: return ut_ds(g, v0, player, t, bound);
    case PayoffClass::energy:
        if (t < 0)
            return UTVerdict{};
        return energy_search(g, v0, player, bound > 0 ? bound : default_machine_budget, t < 1);
    }
    return UTVerdict{};
}

UTVerdict verify_nash_rv(const Game& g, int v0, const MealyMachine& m, const Rational& t, long bound)
{
    require_vertex(g, v0);
    const ProductGame p = build_product(g, m, v0);
    UTVerdict out = verify_nash_ut(p.game, p.start, *g.leader, t, bound);
    if (out.witness)
        out.witness = project_product(p, *out.witness);
    out.machine.reset();
    return out;
}

UTVerdict spe_counterexample_oracle(const Game& g, int v0, int player, const Rational& t, int memory)
{
    require_vertex(g, v0);
    require_player(g, player);
    if (memory < 1)
        throw GameError("memory bound must be at least 1");
    for (int k = 1; k <= memory; ++k)
        if (auto found = SpeSearch(g, v0, player, t, k).run())
            return *found;
    UTVerdict out;
    out.status = Status::inconclusive;
    out.bound = memory;
    return out;
}

UTVerdict ds_semi_verify(const Game& g, int v0, int player, const Rational& t, int depth, CheckMode mode)
{
    require_vertex(g, v0);
    require_player(g, player);
    if (g.payoff != PayoffClass::discounted)
        throw GameError("the tree search needs a discounted-sum game");
    if (!g.unit_durations())
        throw GameError("the tree search needs unit durations");
    if (depth < 0)
        throw GameError("depth must be nonnegative");
    UTVerdict out;
    DsTree tree(g, v0, player, t, depth, mode);
    if (!tree.closes()) {
        out.status = Status::inconclusive;
        out.bound = depth;
    }
    return out;
}

UTVerdict energy_nash_co_re(const Game& g, int v0, int player, long budget)
{
    require_vertex(g, v0);
    require_player(g, player);
    if (g.payoff != PayoffClass::energy)
        throw GameError("machine enumeration needs an energy game");
    return energy_search(g, v0, player, budget, true);
}

CheckVerdict epsilon_equilibrium_check(const Game& g, int v0, const MealyMachine& m, CheckMode mode,
                                       const Rational& epsilon)
{
    if (g.payoff != PayoffClass::mean && g.payoff != PayoffClass::discounted)
        throw GameError("margins are supported for mean-payoff and discounted games");
    if (epsilon < 0)
        throw GameError("margin must be nonnegative");
    return check(g, v0, m, mode, epsilon);
}

}  // namespace rv
