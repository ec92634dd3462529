#include "rv/checking.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "rv/constructions.hpp"
#include "rv/numeric.hpp"

namespace rv {

namespace {

void require_full_machine(const Game& g, const MealyMachine& m)
{
    validate_machine(g, m);
    for (char c : m.controlled)
        if (!c)
            throw GameError("checking needs a machine for all players");
}

std::vector<int> common_history(const Lasso& a, const Lasso& b)
{
    const long bound = a.length() + b.length() + 1;
    std::vector<int> h;
    for (long k = 0; k < bound && a.at(k) == b.at(k); ++k)
        h.push_back(a.at(k));
    return h;
}

Counterexample translate(const DeviationGame& d, const Lasso& w)
{
    using Kind = DeviationGame::Kind;
    auto project = [&](bool eve_side) {
        auto pick = [&](int id) {
            const auto& n = d.nodes[id];
            return eve_side && n.kind == Kind::deviated ? n.dev_vertex : n.vertex;
        };
        Lasso l;
        for (int id : w.stem)
            l.stem.push_back(pick(id));
        for (int id : w.cycle)
            l.cycle.push_back(pick(id));
        return canonical(l);
    };
    Counterexample c;
    c.compliant = project(false);
    c.deviating = project(true);
    for (long k = 0; k < w.length(); ++k)
        if (d.nodes[w.at(k)].kind != Kind::start) {
            c.deviator = d.nodes[w.at(k)].deviator;
            break;
        }
    std::vector<int> h;
    for (long k = 0; k < w.length(); ++k) {
        const auto& n = d.nodes[w.at(k)];
        if (n.kind == Kind::deviated)
            break;
        h.push_back(n.vertex);
    }
    c.history = h;
    return c;
}

CheckVerdict via_deviation_game(const Game& g, int v0, const MealyMachine& m, CheckMode mode,
                                const Rational& epsilon)
{
    require_full_machine(g, m);
    const DeviationGame d = mode == CheckMode::nash ? build_ndev(g, m, v0) : build_spdev(g, m, v0);
    const PrivilegeVerdict p = privilege(d.game, d.start, epsilon);
    CheckVerdict out;
    out.status = p.status;
    if (p.witness)
        out.counterexample = translate(d, *p.witness);
    return out;
}

// The deviator's view of the game played against a machine: nodes are (vertex, state)
// pairs, green arcs follow the machine, and the remaining arcs are the deviator's
// alternative moves.
struct DeviatorGraph {
    int states = 0;
    std::vector<std::vector<std::pair<int, long long>>> green, all;
    std::vector<long long> reward;  // scaled reward per game edge
    long long wmax = 1;

    int node(int v, int q) const { return v * states + q; }
    int vertex(int id) const { return id / states; }
    int state(int id) const { return id % states; }
};

DeviatorGraph deviator_graph(const Game& g, const MealyMachine& m, int player)
{
    DeviatorGraph d;
    d.states = m.num_states();
    const mpz_class scale = common_denominator(g.rewards[player]);
    d.reward = scale_to_integers(g.rewards[player], scale);
    for (long long r : d.reward)
        d.wmax = std::max(d.wmax, std::abs(r));
    const int n = g.num_vertices() * d.states;
    d.green.resize(n);
    d.all.resize(n);
    for (int v = 0; v < g.num_vertices(); ++v)
        for (int q = 0; q < d.states; ++q) {
            std::set<int> seen_green, seen_all;
            for (int t : m.applicable(q, v)) {
                const auto& tr = m.transitions[t];
                auto add = [&](auto& arcs, std::set<int>& seen, int w) {
                    int to = d.node(w, tr.to);
                    if (seen.insert(to).second)
                        arcs.push_back({to, d.reward[g.find_edge(v, w)]});
                };
                add(d.green[d.node(v, q)], seen_green, tr.output);
                add(d.all[d.node(v, q)], seen_all, tr.output);
                if (g.owner[v] == player)
                    for (int w : g.successors(v))
                        add(d.all[d.node(v, q)], seen_all, w);
            }
        }
    return d;
}

std::vector<long long> winning_credits(const DeviatorGraph& d)
{
    CreditGraph cg;
    cg.out = d.all;
    cg.chooser.assign(d.all.size(), 1);
    return least_credits(cg, static_cast<long long>(d.all.size()) * d.wmax);
}

struct NodeLasso {
    std::vector<int> stem, cycle;
};

// An infinite path from `start` along all arcs never dropping below zero.
std::optional<NodeLasso> surviving_path(const DeviatorGraph& d, const std::vector<long long>& credit,
                                        int start, long long level)
{
    if (credit[start] == infinite_credit || level < credit[start])
        return std::nullopt;
    long long top = 0;
    for (long long c : credit)
        top = std::max(top, c);
    level = std::min(level, top);
    std::map<std::pair<int, long long>, size_t> seen;
    std::vector<int> path;
    int v = start;
    while (!seen.count({v, level})) {
        seen[{v, level}] = path.size();
        path.push_back(v);
        int next = -1;
        for (const auto& [w, r] : d.all[v])
            if (credit[w] != infinite_credit && level + r >= credit[w]) {
                next = w;
                level = std::min(level + r, top);
                break;
            }
        if (next < 0)
            return std::nullopt;
        v = next;
    }
    size_t k = seen[{v, level}];
    NodeLasso l;
    l.stem.assign(path.begin(), path.begin() + k);
    l.cycle.assign(path.begin() + k, path.end());
    return l;
}

// Longest prefix drop along green arcs; -1 marks an unbounded drop.
std::vector<long long> green_drops(const DeviatorGraph& d)
{
    const int n = static_cast<int>(d.green.size());
    std::vector<long long> drop(n, 0);
    for (int round = 0; round + 1 < n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u)
            for (const auto& [w, r] : d.green[u])
                if (-r + drop[w] > drop[u]) {
                    drop[u] = -r + drop[w];
                    changed = true;
                }
        if (!changed)
            break;
    }
    std::vector<char> unbounded(n, 0);
    std::vector<std::vector<int>> pred(n);
    std::vector<int> stack;
    for (int u = 0; u < n; ++u)
        for (const auto& [w, r] : d.green[u]) {
            pred[w].push_back(u);
            if (-r + drop[w] > drop[u] && !unbounded[u]) {
                unbounded[u] = 1;
                stack.push_back(u);
            }
        }
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        for (int u : pred[w])
            if (!unbounded[u]) {
                unbounded[u] = 1;
                stack.push_back(u);
            }
    }
    for (int u = 0; u < n; ++u)
        if (unbounded[u])
            drop[u] = -1;
    return drop;
}

bool can_lose(const std::vector<long long>& drop, int node, long long level)
{
    return drop[node] < 0 || level < drop[node];
}

// A green lasso from `start` ending in a negative cycle.
std::optional<NodeLasso> negative_lasso(const DeviatorGraph& d, int start)
{
    const int n = static_cast<int>(d.green.size());
    const long long unset = std::numeric_limits<long long>::max();
    std::vector<long long> dist(n, unset);
    std::vector<int> pred(n, -1);
    dist[start] = 0;
    int last = -1;
    for (int round = 0; round < n; ++round) {
        last = -1;
        for (int u = 0; u < n; ++u)
            if (dist[u] != unset)
                for (const auto& [w, r] : d.green[u])
                    if (dist[u] + r < dist[w]) {
                        dist[w] = dist[u] + r;
                        pred[w] = u;
                        last = w;
                    }
    }
    if (last < 0)
        return std::nullopt;
    for (int k = 0; k < n; ++k)
        last = pred[last];
    NodeLasso l;
    for (int x = last;;) {
        l.cycle.push_back(x);
        x = pred[x];
        if (x == last)
            break;
    }
    std::reverse(l.cycle.begin(), l.cycle.end());
    std::vector<int> from(n, -2);
    std::deque<int> queue{start};
    from[start] = -1;
    while (!queue.empty() && from[last] == -2) {
        int u = queue.front();
        queue.pop_front();
        for (const auto& arc : d.green[u])
            if (from[arc.first] == -2) {
                from[arc.first] = u;
                queue.push_back(arc.first);
            }
    }
    for (int x = from[last]; x >= 0; x = from[x])
        l.stem.push_back(x);
    std::reverse(l.stem.begin(), l.stem.end());
    return l;
}

// A green path from `start` on which the level becomes negative, continued forever.
std::optional<NodeLasso> losing_path(const DeviatorGraph& d, const std::vector<long long>& drop, int start,
                                     long long level)
{
    if (drop[start] < 0)
        return negative_lasso(d, start);
    const long long top = level + 2 * static_cast<long long>(d.green.size()) * d.wmax;
    std::map<std::pair<int, long long>, std::pair<int, long long>> parent;
    std::deque<std::pair<int, long long>> queue{{start, level}};
    parent[{start, level}] = {-1, 0};
    std::vector<int> path;
    while (!queue.empty() && path.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        if (cur.second < 0) {
            for (auto x = cur; x.first >= 0; x = parent[x])
                path.push_back(x.first);
            std::reverse(path.begin(), path.end());
            break;
        }
        for (const auto& [w, r] : d.green[cur.first]) {
            std::pair<int, long long> nx{w, cur.second + r};
            if (nx.second > top || parent.count(nx))
                continue;
            parent[nx] = cur;
            queue.push_back(nx);
        }
    }
    if (path.empty())
        return std::nullopt;
    // The loss is already recorded; any green continuation will do.
    std::map<int, size_t> seen;
    std::vector<int> tail;
    int v = path.back();
    path.pop_back();
    while (!seen.count(v)) {
        seen[v] = tail.size();
        tail.push_back(v);
        if (d.green[v].empty())
            return std::nullopt;
        v = d.green[v].front().first;
    }
    NodeLasso l;
    l.stem = path;
    l.stem.insert(l.stem.end(), tail.begin(), tail.begin() + seen[v]);
    l.cycle.assign(tail.begin() + seen[v], tail.end());
    return l;
}

Lasso to_play(const DeviatorGraph& d, const std::vector<int>& prefix, const NodeLasso& l)
{
    Lasso out;
    out.stem = prefix;
    for (int id : l.stem)
        out.stem.push_back(d.vertex(id));
    for (int id : l.cycle)
        out.cycle.push_back(d.vertex(id));
    return canonical(out);
}

}  // namespace

CheckVerdict check_energy_det_nash(const Game& g, int v0, const MealyMachine& m)
{
    if (g.payoff != PayoffClass::energy)
        throw GameError("energy checking applied to a " + class_name(g.payoff) + " game");
    require_full_machine(g, m);
    if (!is_deterministic(m))
        throw GameError("the machine is not deterministic");
    const ProfileOutcome outcome = deterministic_outcome(g, v0, m);
    CheckVerdict out;
    for (int i = 0; i < g.num_players(); ++i) {
        if (eval_payoff(g, outcome.lasso, i) != 0)
            continue;
        const DeviatorGraph d = deviator_graph(g, m, i);
        const auto credit = winning_credits(d);
        auto win = surviving_path(d, credit, d.node(v0, m.initial), 0);
        if (!win)
            continue;
        Counterexample c;
        c.deviator = i;
        c.compliant = outcome.lasso;
        c.deviating = to_play(d, {}, *win);
        c.history = common_history(c.compliant, c.deviating);
        out.status = Status::fails;
        out.counterexample = c;
        return out;
    }
    return out;
}

long default_check_cap(const Game& g, const MealyMachine& m)
{
    long w = 0;
    for (int i = 0; i < g.num_players(); ++i) {
        const mpz_class scale = common_denominator(g.rewards[i]);
        for (long long r : scale_to_integers(g.rewards[i], scale))
            w = std::max<long>(w, std::abs(r));
    }
    return 4L * g.num_vertices() * m.num_states() * (w + 1);
}

namespace {

// Levels beyond this bound never matter: a shortest witness climbing higher
// contains a pair of cycles of equal and opposite weight that can be cut out.
long long exact_level_bound(const DeviatorGraph& d, const std::vector<long long>& credit,
                            const std::vector<long long>& drop)
{
    const long long s = static_cast<long long>(d.green.size()), w = d.wmax;
    long long finite_drop = 0, finite_credit = 0;
    for (long long x : drop)
        finite_drop = std::max(finite_drop, x);
    for (long long c : credit)
        if (c != infinite_credit)
            finite_credit = std::max(finite_credit, c);
    const long long below = finite_drop + w + 2 * w + s * s * w * (2 * w - 1);
    const long long above = finite_credit + w + (s - 1) * w;
    return std::max(below, above);
}

constexpr long long dense_limit = 1LL << 24;
constexpr long long explored_limit = 1LL << 25;

}  // namespace

CheckVerdict check_energy_general(const Game& g, int v0, const MealyMachine& m, CheckMode mode, long cap,
                                  std::vector<std::pair<int, int>>* support)
{
    if (g.payoff != PayoffClass::energy)
        throw GameError("energy checking applied to a " + class_name(g.payoff) + " game");
    validate_machine(g, m, true);
    for (char c : m.controlled)
        if (!c)
            throw GameError("checking needs a machine for all players");
    if (cap < 0)
        throw GameError("energy cap must be positive");
    bool saturated = true;
    for (int i = 0; i < g.num_players(); ++i) {
        const DeviatorGraph d = deviator_graph(g, m, i);
        const auto credit = winning_credits(d);
        const auto drop = green_drops(d);
        const int nodes = static_cast<int>(d.green.size());

        long long top = cap;
        if (cap == 0)
            top = std::max<long long>(default_check_cap(g, m),
                                      std::min(exact_level_bound(d, credit, drop), explored_limit / nodes));
        const bool exact = top >= exact_level_bound(d, credit, drop);

        using Config = std::pair<int, long long>;
        const long long width = top + 1;
        // Predecessor configuration code, -2 when unvisited, -1 at the root.
        const bool dense = nodes * width <= dense_limit;
        std::vector<long long> parent_dense(dense ? static_cast<size_t>(nodes * width) : 0, -2);
        std::unordered_map<long long, long long> parent_sparse;
        auto parent = [&](long long key) -> long long {
            if (dense)
                return parent_dense[key];
            auto it = parent_sparse.find(key);
            return it == parent_sparse.end() ? -2 : it->second;
        };
        auto set_parent = [&](long long key, long long value) {
            if (dense)
                parent_dense[key] = value;
            else
                parent_sparse[key] = value;
        };
        auto code = [&](const Config& c) { return c.first * width + c.second; };
        // First climb above the bound into each node, keyed by the node.
        std::map<int, long long> climbs;

        std::deque<Config> queue;
        const Config root{d.node(v0, m.initial), 0};
        set_parent(code(root), -1);
        queue.push_back(root);
        auto visit = [&](const Config& from, int to, long long level) {
            if (level < 0)
                return;
            if (level > top) {
                climbs.emplace(to, code(from));
                return;
            }
            Config c{to, level};
            if (parent(code(c)) == -2) {
                set_parent(code(c), code(from));
                queue.push_back(c);
            }
        };
        auto expand = [&](int node, const auto& step) {
            const int v = d.vertex(node), q = d.state(node);
            for (int t : m.applicable(q, v)) {
                const auto& tr = m.transitions[t];
                if (mode == CheckMode::nash) {
                    step(d.node(tr.output, tr.to), d.reward[g.find_edge(v, tr.output)]);
                    continue;
                }
                for (int w : g.successors(v))
                    step(d.node(w, tr.to), d.reward[g.find_edge(v, w)]);
            }
        };

        // A profitable deviation after the history `h` (nodes), reaching node `at` at level n.
        auto deviation = [&](int at, long long n, bool unbounded_only,
                             const auto& make_history) -> std::optional<CheckVerdict> {
            const int v = d.vertex(at), q = d.state(at);
            if (g.owner[v] != i)
                return std::nullopt;
            for (int t : m.applicable(q, v)) {
                const auto& tr = m.transitions[t];
                const int stay = d.node(tr.output, tr.to);
                const long long kept = n + d.reward[g.find_edge(v, tr.output)];
                if (unbounded_only ? drop[stay] >= 0 : !can_lose(drop, stay, kept))
                    continue;
                for (int w : g.successors(v)) {
                    if (w == tr.output)
                        continue;
                    const int dev = d.node(w, tr.to);
                    const long long moved = n + d.reward[g.find_edge(v, w)];
                    if (credit[dev] == infinite_credit || moved < credit[dev])
                        continue;
                    const std::vector<int> h = make_history();
                    if (support) {
                        support->clear();
                        auto entry = [&](int node) { support->push_back({d.state(node), d.vertex(node)}); };
                        for (int x : h)
                            entry(x);
                        auto sweep = [&](int from, const auto& arcs) {
                            std::vector<char> seen(arcs.size(), 0);
                            std::vector<int> stack{from};
                            seen[from] = 1;
                            while (!stack.empty()) {
                                int x = stack.back();
                                stack.pop_back();
                                entry(x);
                                for (const auto& arc : arcs[x])
                                    if (!seen[arc.first]) {
                                        seen[arc.first] = 1;
                                        stack.push_back(arc.first);
                                    }
                            }
                        };
                        sweep(stay, d.green);
                        sweep(dev, d.all);
                    }
                    CheckVerdict out;
                    out.status = Status::fails;
                    std::vector<int> played;
                    for (int x : h)
                        played.push_back(d.vertex(x));
                    auto lose = losing_path(d, drop, stay, kept);
                    auto win = surviving_path(d, credit, dev, moved);
                    if (lose && win) {
                        Counterexample c;
                        c.history = played;
                        c.deviator = i;
                        c.compliant = to_play(d, played, *lose);
                        c.deviating = to_play(d, played, *win);
                        out.counterexample = c;
                    }
                    return out;
                }
            }
            return std::nullopt;
        };
        auto history = [&](long long key) {
            std::vector<int> h;
            for (long long x = key; x >= 0; x = parent(x))
                h.push_back(static_cast<int>(x / width));
            std::reverse(h.begin(), h.end());
            return h;
        };

        while (!queue.empty()) {
            const Config cur = queue.front();
            queue.pop_front();
            if (g.owner[d.vertex(cur.first)] == i)
                if (auto found = deviation(cur.first, cur.second, false, [&] { return history(code(cur)); }))
                    return *found;
            expand(cur.first, [&](int to, long long r) { visit(cur, to, cur.second + r); });
        }
        if (climbs.empty())
            continue;
        if (!exact) {
            saturated = false;
            continue;
        }
        // Above the bound every drop short of an unbounded one is survivable and
        // every finite credit is met, so only reachability is left to decide.
        std::map<int, int> from;
        std::deque<int> frontier;
        for (const auto& [node, key] : climbs) {
            from[node] = -1;
            frontier.push_back(node);
        }
        while (!frontier.empty()) {
            const int x = frontier.front();
            frontier.pop_front();
            std::vector<int> tail;
            for (int y = x; y >= 0; y = from[y])
                tail.push_back(y);
            std::reverse(tail.begin(), tail.end());
            const long long key = climbs.at(tail.front());
            std::vector<int> h = history(key);
            long long level = key % width;
            for (int y : tail) {
                level += d.reward[g.find_edge(d.vertex(h.back()), d.vertex(y))];
                h.push_back(y);
            }
            if (auto found = deviation(x, level, true, [&] { return h; }))
                return *found;
            expand(x, [&](int to, long long) {
                if (!from.count(to)) {
                    from[to] = x;
                    frontier.push_back(to);
                }
            });
        }
    }
    CheckVerdict out;
    out.status = saturated ? Status::holds : Status::inconclusive;
    return out;
}

CheckVerdict check(const Game& g, int v0, const MealyMachine& m, CheckMode mode, const Rational& epsilon,
                   long energy_cap)
{
    if (epsilon < 0)
        throw GameError("negative margin");
    if (g.payoff == PayoffClass::energy) {
        require_full_machine(g, m);
        if (epsilon >= 1)
            return {};
        if (mode == CheckMode::nash && is_deterministic(m))
            return check_energy_det_nash(g, v0, m);
        return check_energy_general(g, v0, m, mode, energy_cap);
    }
    return via_deviation_game(g, v0, m, mode, epsilon);
}

CheckVerdict check_nash(const Game& g, int v0, const MealyMachine& m, const Rational& epsilon)
{
    return check(g, v0, m, CheckMode::nash, epsilon);
}

CheckVerdict check_spe(const Game& g, int v0, const MealyMachine& m, const Rational& epsilon)
{
    return check(g, v0, m, CheckMode::spe, epsilon);
}

}  // namespace rv
