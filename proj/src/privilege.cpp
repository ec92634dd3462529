#include "rv/privilege.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "rv/graph.hpp"
#include "rv/numeric.hpp"

namespace rv {

std::string status_name(Status s)
{
    switch (s) {
    case Status::holds: return "holds";
    case Status::fails: return "fails";
    case Status::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

constexpr int A = 0, E = 1;

void require_two_players(const Game& g, PayoffClass c)
{
    if (g.num_players() != 2)
        throw GameError("privilege needs a two-player game");
    if (g.payoff != c)
        throw GameError("privilege solver applied to a " + class_name(g.payoff) + " game");
}

Adjacency adjacency(const Game& g)
{
    Adjacency adj(g.num_vertices());
    for (const auto& e : g.edges)
        adj[e.from].push_back(e.to);
    return adj;
}

// Lasso from a path whose last vertex is followed by an arbitrary continuation.
Lasso extend_to_lasso(const Game& g, std::vector<int> path)
{
    std::map<int, size_t> pos;
    for (size_t k = 0; k < path.size(); ++k)
        pos.emplace(path[k], k);
    while (true) {
        int next = g.edges[g.out[path.back()].front()].to;
        auto it = pos.find(next);
        if (it != pos.end()) {
            Lasso l;
            l.stem.assign(path.begin(), path.begin() + it->second);
            l.cycle.assign(path.begin() + it->second, path.end());
            return canonical(l);
        }
        pos.emplace(next, path.size());
        path.push_back(next);
    }
}

Lasso join(const std::vector<int>& to_cycle, const std::vector<int>& cycle)
{
    // to_cycle ends at cycle.front()
    Lasso l;
    l.stem.assign(to_cycle.begin(), to_cycle.end() - 1);
    l.cycle = cycle;
    return canonical(l);
}

bool boolean_margin_trivial(const Rational& eps)
{
    if (eps < 0)
        throw GameError("negative margin");
    return eps >= 1;
}

}  // namespace

PrivilegeVerdict privilege_parity(const Game& g, int v0, const Rational& epsilon)
{
    require_two_players(g, PayoffClass::parity);
    if (boolean_margin_trivial(epsilon))
        return {};
    const auto adj = adjacency(g);
    const auto reach = bfs(adj, {v0});
    std::set<long> odd_a, even_e;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.colors[A][v] % 2)
            odd_a.insert(g.colors[A][v]);
        if (g.colors[E][v] % 2 == 0)
            even_e.insert(g.colors[E][v]);
    }
    for (long ca : odd_a)
        for (long ce : even_e) {
            std::vector<char> alive(g.num_vertices(), 0);
            for (int v = 0; v < g.num_vertices(); ++v)
                alive[v] = reach[v] != -2 && g.colors[A][v] >= ca && g.colors[E][v] >= ce;
            std::vector<int> comp;
            scc(adj, comp, alive);
            std::map<int, std::pair<int, int>> found;  // comp -> (u with ca, v with ce)
            for (int v = 0; v < g.num_vertices(); ++v) {
                if (comp[v] < 0)
                    continue;
                auto& f = found.try_emplace(comp[v], -1, -1).first->second;
                if (g.colors[A][v] == ca && f.first < 0)
                    f.first = v;
                if (g.colors[E][v] == ce && f.second < 0)
                    f.second = v;
            }
            for (const auto& [c, uv] : found) {
                auto [u, w] = uv;
                if (u < 0 || w < 0 || !nontrivial(adj, comp, c, u))
                    continue;
                std::vector<char> inside(g.num_vertices(), 0);
                for (int v = 0; v < g.num_vertices(); ++v)
                    inside[v] = comp[v] == c;
                auto cycle = covering_cycle(adj, inside, {u, w}, u);
                return {Status::fails, join(path_to(reach, u), cycle)};
            }
        }
    return {};
}

PrivilegeVerdict privilege_qr(const Game& g, int v0, const Rational& epsilon)
{
    require_two_players(g, PayoffClass::reach);
    if (boolean_margin_trivial(epsilon))
        return {};
    if (epsilon != 0)
        throw GameError("reachability privilege supports margins 0 and >= 1 only");
    if (!g.unit_durations())
        throw GameError("reachability privilege needs unit durations");
    const auto adj = adjacency(g);
    std::vector<char> alive(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v)
        alive[v] = !g.targets[A][v];
    const auto parent = bfs(adj, {v0}, alive);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (parent[v] != -2 && g.targets[E][v]) {
            // The BFS tree path may cross earlier Eve targets; that only helps Eve.
            return {Status::fails, extend_to_lasso(g, path_to(parent, v))};
        }
    return {};
}

PrivilegeVerdict privilege_mp(const Game& g, int v0, const Rational& epsilon)
{
    require_two_players(g, PayoffClass::mean);
    if (epsilon < 0)
        throw GameError("negative margin");
    const int n = g.num_vertices();
    const auto adj = adjacency(g);
    const auto reach = bfs(adj, {v0});
    // Weight r_A - r_E + eps * duration; a negative reachable cycle is a witness.
    std::vector<Rational> w(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e)
        w[e] = g.rewards[A][e] - g.rewards[E][e] + epsilon * g.duration(e);
    const mpz_class scale = common_denominator(w);
    const auto iw = scale_to_integers(w, scale);

    std::vector<long long> dist(n, 0);
    std::vector<int> parent(n, -1);
    int touched = -1;
    for (int round = 0; round <= n; ++round) {
        touched = -1;
        for (int e = 0; e < g.num_edges(); ++e) {
            const auto& ed = g.edges[e];
            if (reach[ed.from] == -2)
                continue;
            if (dist[ed.from] + iw[e] < dist[ed.to]) {
                dist[ed.to] = dist[ed.from] + iw[e];
                parent[ed.to] = ed.from;
                touched = ed.to;
            }
        }
        if (touched < 0)
            return {};
    }
    int x = touched;
    for (int k = 0; k < n; ++k)
        x = parent[x];
    std::vector<int> cycle{x};
    for (int y = parent[x]; y != x; y = parent[y])
        cycle.push_back(y);
    std::reverse(cycle.begin(), cycle.end());
    return {Status::fails, join(path_to(reach, cycle.front()), cycle)};
}

PrivilegeVerdict privilege_ds(const Game& g, int v0, const Rational& epsilon)
{
    require_two_players(g, PayoffClass::discounted);
    if (epsilon < 0)
        throw GameError("negative margin");
    if (!g.unit_durations())
        throw GameError("discounted privilege needs unit durations");
    const int n = g.num_vertices();
    const Rational& lambda = g.discount;
    std::vector<Rational> r(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e)
        r[e] = g.rewards[E][e] - g.rewards[A][e];

    // Positional policy iteration for the maximal discounted sum of r.
    std::vector<int> policy(n);
    for (int v = 0; v < n; ++v)
        policy[v] = g.out[v].front();
    std::vector<Rational> value(n);
    auto evaluate = [&]() {
        std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
        for (int s = 0; s < n; ++s) {
            if (state[s])
                continue;
            std::vector<int> path;
            int v = s;
            while (state[v] == 0) {
                state[v] = 1;
                path.push_back(v);
                v = g.edges[policy[v]].to;
            }
            size_t stop = path.size();
            if (state[v] == 1) {
                size_t k = std::find(path.begin(), path.end(), v) - path.begin();
                Rational sum = 0, w = 1;
                for (size_t j = k; j < path.size(); ++j) {
                    sum += w * r[policy[path[j]]];
                    w *= lambda;
                }
                value[path[k]] = sum / (1 - w);
                for (size_t j = path.size(); j-- > k + 1;) {
                    int u = path[j];
                    value[u] = r[policy[u]] + lambda * value[g.edges[policy[u]].to];
                }
                for (size_t j = k; j < path.size(); ++j)
                    state[path[j]] = 2;
                stop = k;
            }
            for (size_t j = stop; j-- > 0;) {
                int u = path[j];
                value[u] = r[policy[u]] + lambda * value[g.edges[policy[u]].to];
                state[u] = 2;
            }
        }
    };
    for (bool changed = true; changed;) {
        evaluate();
        changed = false;
        for (int v = 0; v < n; ++v)
            for (int e : g.out[v]) {
                Rational cand = r[e] + lambda * value[g.edges[e].to];
                Rational cur = r[policy[v]] + lambda * value[g.edges[policy[v]].to];
                if (cand > cur) {
                    policy[v] = e;
                    changed = true;
                }
            }
    }
    if (value[v0] <= epsilon)
        return {};
    std::vector<int> path;
    std::map<int, size_t> pos;
    for (int v = v0; !pos.count(v); v = g.edges[policy[v]].to) {
        pos[v] = path.size();
        path.push_back(v);
    }
    int back = g.edges[policy[path.back()]].to;
    Lasso l;
    l.stem.assign(path.begin(), path.begin() + pos[back]);
    l.cycle.assign(path.begin() + pos[back], path.end());
    return {Status::fails, canonical(l)};
}

long default_energy_cap(const Game& g)
{
    Rational wmax = 0;
    for (const auto& rs : g.rewards)
        for (const auto& r : rs)
            wmax = std::max(wmax, Rational(abs(r)));
    mpz_class c = wmax.get_num() / wmax.get_den() + 1;
    return 4L * g.num_vertices() * to_small_integer(c);
}

PrivilegeVerdict privilege_energy_bounded(const Game& g, int v0, long cap, const Rational& epsilon)
{
    require_two_players(g, PayoffClass::energy);
    if (cap <= 0)
        throw GameError("energy cap must be positive");
    if (boolean_margin_trivial(epsilon))
        return {};
    const int n = g.num_vertices();
    std::vector<Rational> all = g.rewards[A];
    all.insert(all.end(), g.rewards[E].begin(), g.rewards[E].end());
    const mpz_class scale = common_denominator(all);
    const auto ra = scale_to_integers(g.rewards[A], scale);
    const auto re = scale_to_integers(g.rewards[E], scale);
    const long long bound = cap * to_small_integer(scale);

    // Eve's least credit to survive on her own (she owns every vertex).
    CreditGraph cg;
    cg.out.resize(n);
    cg.chooser.assign(n, 1);
    long long wmax = 1;
    for (int e = 0; e < g.num_edges(); ++e) {
        cg.out[g.edges[e].from].push_back({g.edges[e].to, re[e]});
        wmax = std::max(wmax, std::abs(re[e]));
    }
    const auto survive = least_credits(cg, std::max<long long>(1, n) * wmax);

    // Exact exploration of (vertex, Adam level or bottom, Eve level).
    struct Key {
        int v;
        long long a, e;
        bool operator==(const Key& o) const { return v == o.v && a == o.a && e == o.e; }
    };
    struct Hash {
        size_t operator()(const Key& k) const
        {
            return std::hash<long long>()(k.a * 1000003 + k.e) ^ (static_cast<size_t>(k.v) << 20);
        }
    };
    constexpr long long bottom = -1;
    std::unordered_map<Key, Key, Hash> parent;
    std::deque<Key> queue;
    Key root{v0, 0, 0};
    parent.emplace(root, root);
    queue.push_back(root);
    bool saturated = true;
    while (!queue.empty()) {
        Key k = queue.front();
        queue.pop_front();
        if (k.a == bottom) {
            if (survive[k.v] != infinite_credit && survive[k.v] <= k.e) {
                std::vector<int> path;
                for (Key x = k;; x = parent.at(x)) {
                    path.push_back(x.v);
                    if (x == root)
                        break;
                }
                std::reverse(path.begin(), path.end());
                // Continue with Eve's survival strategy.
                long long level = k.e;
                std::map<std::pair<int, long long>, size_t> seen;
                int v = k.v;
                seen[{v, level}] = path.size() - 1;
                while (true) {
                    int next = -1;
                    long long nl = 0;
                    for (int e : g.out[v]) {
                        int w = g.edges[e].to;
                        long long l2 = level + re[e];
                        if (l2 >= 0 && survive[w] != infinite_credit && survive[w] <= l2) {
                            next = w;
                            nl = std::min(l2, wmax * n);
                            break;
                        }
                    }
                    v = next;
                    level = nl;
                    auto it = seen.find({v, level});
                    if (it != seen.end()) {
                        Lasso l;
                        l.stem.assign(path.begin(), path.begin() + it->second);
                        l.cycle.assign(path.begin() + it->second, path.end());
                        return {Status::fails, canonical(l)};
                    }
                    seen[{v, level}] = path.size();
                    path.push_back(v);
                }
            }
            continue;
        }
        for (int e : g.out[k.v]) {
            Key nk{g.edges[e].to, k.a + ra[e], k.e + re[e]};
            if (nk.e < 0)
                continue;
            if (nk.a < 0)
                nk.a = bottom;
            if (nk.a > bound || nk.e > bound) {
                saturated = false;
                continue;
            }
            if (parent.emplace(nk, k).second)
                queue.push_back(nk);
        }
    }
    return {saturated ? Status::holds : Status::inconclusive, std::nullopt};
}

PrivilegeVerdict privilege(const Game& g, int v0, const Rational& epsilon, long energy_cap)
{
    switch (g.payoff) {
    case PayoffClass::parity: return privilege_parity(g, v0, epsilon);
    case PayoffClass::reach: return privilege_qr(g, v0, epsilon);
    case PayoffClass::mean: return privilege_mp(g, v0, epsilon);
    case PayoffClass::discounted: return privilege_ds(g, v0, epsilon);
    case PayoffClass::energy:
        return privilege_energy_bounded(g, v0, energy_cap > 0 ? energy_cap : default_energy_cap(g),
                                        epsilon);
    }
    return {};
}

}  // namespace rv
