#include "rv/values.hpp"

#include <algorithm>
#include <functional>

#include "rv/numeric.hpp"

namespace rv {

namespace {

void require(const Game& g, PayoffClass c, int player)
{
    if (g.payoff != c)
        throw GameError("punishment value requested for the wrong payoff class");
    if (player < 0 || player >= g.num_players())
        throw GameError("unknown player");
}

using VertexSet = std::vector<char>;

// Vertices of `alive` from which `side` (true: the player) can force a visit to target.
VertexSet attractor(const Game& g, int player, const VertexSet& alive, const VertexSet& target, bool side)
{
    const int n = g.num_vertices();
    VertexSet in = target;
    std::vector<int> pending(n, 0);
    std::vector<int> stack;
    for (int v = 0; v < n; ++v) {
        if (!alive[v])
            continue;
        for (int e : g.out[v])
            pending[v] += alive[g.edges[e].to];
        if (in[v])
            stack.push_back(v);
    }
    std::vector<std::vector<int>> pred(n);
    for (const auto& e : g.edges)
        if (alive[e.from] && alive[e.to])
            pred[e.to].push_back(e.from);
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        for (int u : pred[w]) {
            if (in[u])
                continue;
            bool mine = (g.owner[u] == player) == side;
            if (mine || --pending[u] == 0) {
                in[u] = 1;
                stack.push_back(u);
            }
        }
    }
    return in;
}

// Zielonka's recursion for the min-parity condition; returns the player's winning region.
VertexSet zielonka(const Game& g, int player, const VertexSet& alive)
{
    const int n = g.num_vertices();
    long low = -1;
    for (int v = 0; v < n; ++v)
        if (alive[v] && (low < 0 || g.colors[player][v] < low))
            low = g.colors[player][v];
    VertexSet win(n, 0);
    if (low < 0)
        return win;
    const bool side = low % 2 == 0;
    VertexSet top(n, 0);
    for (int v = 0; v < n; ++v)
        top[v] = alive[v] && g.colors[player][v] == low;
    auto minus = [&](const VertexSet& a, const VertexSet& b) {
        VertexSet r(n, 0);
        for (int v = 0; v < n; ++v)
            r[v] = a[v] && !b[v];
        return r;
    };
    VertexSet a = attractor(g, player, alive, top, side);
    VertexSet sub = zielonka(g, player, minus(alive, a));
    // Region won in the subgame by whoever dislikes `low`.
    VertexSet lost = side ? minus(minus(alive, a), sub) : sub;
    if (std::none_of(lost.begin(), lost.end(), [](char c) { return c; }))
        return side ? alive : win;
    VertexSet b = attractor(g, player, alive, lost, !side);
    VertexSet rest = zielonka(g, player, minus(alive, b));
    for (int v = 0; v < n; ++v)
        win[v] = rest[v] || (!side && b[v]);
    return win;
}

}  // namespace

std::vector<int> punish_parity(const Game& g, int player)
{
    require(g, PayoffClass::parity, player);
    VertexSet all(g.num_vertices(), 1);
    VertexSet w = zielonka(g, player, all);
    return std::vector<int>(w.begin(), w.end());
}

std::vector<int> zero_duration_order(const Game& g)
{
    const int n = g.num_vertices();
    std::vector<int> state(n, 0), order;
    std::function<void(int)> visit = [&](int v) {
        state[v] = 1;
        for (int e : g.out[v]) {
            if (g.duration(e) != 0)
                continue;
            int w = g.edges[e].to;
            if (state[w] == 1)
                throw GameError("zero-duration edges form a cycle");
            if (state[w] == 0)
                visit(w);
        }
        state[v] = 2;
        order.push_back(v);
    };
    for (int v = 0; v < n; ++v)
        if (!state[v])
            visit(v);
    return order;
}

ReachValues punish_qr(const Game& g, int player)
{
    require(g, PayoffClass::reach, player);
    const int n = g.num_vertices();
    constexpr long never = -1;
    // Time to reach the target, or never; the player minimises it.
    std::vector<long> t(n, never);
    for (int v = 0; v < n; ++v)
        if (g.targets[player][v])
            t[v] = 0;
    auto better = [](long a, long b) { return a != never && (b == never || a < b); };
    const auto order = zero_duration_order(g);
    ReachValues out;
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<long> next = t;
        for (int v : order) {
            if (g.targets[player][v])
                continue;
            bool first = true;
            long best = never;
            for (int e : g.out[v]) {
                int w = g.edges[e].to;
                long src = g.duration(e) == 0 ? next[w] : t[w];
                long c = src == never ? never : src + g.duration(e);
                if (first)
                    best = c;
                else if (g.owner[v] == player ? better(c, best) : better(best, c))
                    best = c;
                first = false;
            }
            if (best != next[v]) {
                next[v] = best;
                changed = true;
            }
        }
        if (changed) {
            ++out.rounds;
            t = std::move(next);
        }
    }
    out.value.resize(n);
    for (int v = 0; v < n; ++v)
        out.value[v] = t[v] == never ? Rational(0) : Rational(1, t[v] + 1);
    return out;
}

std::vector<Rational> punish_mp(const Game& g, int player)
{
    require(g, PayoffClass::mean, player);
    const int n = g.num_vertices();
    const mpz_class scale = common_denominator(g.rewards[player]);
    const auto r = scale_to_integers(g.rewards[player], scale);
    long long w = 1;
    for (long long x : r)
        w = std::max(w, std::abs(x));
    const long long horizon = 8LL * n * n * n * w + 8LL * n;
    const auto order = zero_duration_order(g);
    std::vector<long long> x(n, 0), next(n, 0);
    for (long long step = 0; step < horizon; ++step) {
        for (int v : order) {
            bool first = true;
            long long best = 0;
            for (int e : g.out[v]) {
                int to = g.edges[e].to;
                long long c = (g.duration(e) == 0 ? next[to] : x[to]) + r[e];
                if (first || (g.owner[v] == player ? c > best : c < best))
                    best = c;
                first = false;
            }
            next[v] = best;
        }
        std::swap(x, next);
    }
    std::vector<Rational> out(n);
    for (int v = 0; v < n; ++v) {
        const Rational approx = ratio(static_cast<long>(x[v]), static_cast<long>(horizon));
        Rational best;
        Rational gap = -1;
        for (int q = 1; q <= n; ++q) {
            Rational scaled = approx * q;
            mpz_class p = scaled.get_num() / scaled.get_den();
            for (mpz_class cand : {mpz_class(p - 1), p, mpz_class(p + 1)}) {
                Rational c = ratio(cand, q);
                Rational d = abs(c - approx);
                if (gap < 0 || d < gap) {
                    gap = d;
                    best = c;
                }
            }
        }
        out[v] = best / scale;
    }
    return out;
}

std::vector<ExtendedValue> punish_energy(const Game& g, int player, std::optional<Rational> cap)
{
    require(g, PayoffClass::energy, player);
    const int n = g.num_vertices();
    const mpz_class scale = common_denominator(g.rewards[player]);
    const auto r = scale_to_integers(g.rewards[player], scale);
    long long limit = 0;
    if (cap) {
        Rational c = *cap * scale;
        limit = to_small_integer(c.get_num() / c.get_den());
    } else {
        long long w = 0;
        for (long long x : r)
            w = std::max(w, std::abs(x));
        limit = static_cast<long long>(std::max(0, n - 1)) * w;
    }
    CreditGraph cg;
    cg.out.resize(n);
    cg.chooser.resize(n);
    for (int v = 0; v < n; ++v) {
        cg.chooser[v] = g.owner[v] == player;
        for (int e : g.out[v])
            cg.out[v].push_back({g.edges[e].to, r[e]});
    }
    const auto credit = least_credits(cg, limit);
    std::vector<ExtendedValue> out;
    for (long long c : credit)
        out.push_back(c == infinite_credit ? ExtendedValue::plus_infinity()
                                           : ExtendedValue(ratio(static_cast<long>(c), scale)));
    return out;
}

Rational discounted_bound(const Game& g)
{
    Rational m = 0;
    for (const auto& rs : g.rewards)
        for (const auto& x : rs)
            m = std::max(m, Rational(abs(x)));
    return m / (1 - g.discount);
}

std::vector<Enclosure> punish_ds(const Game& g, int player, const Rational& tolerance)
{
    require(g, PayoffClass::discounted, player);
    if (tolerance <= 0)
        throw GameError("tolerance must be positive");
    const int n = g.num_vertices();
    const Rational bound = discounted_bound(g);
    const auto order = zero_duration_order(g);
    std::vector<Rational> x(n, 0), next(n, 0);
    Rational radius = bound;
    while (radius > tolerance) {
        for (int v : order) {
            bool first = true;
            Rational best;
            for (int e : g.out[v]) {
                int to = g.edges[e].to;
                Rational c = g.rewards[player][e] +
                             (g.duration(e) == 0 ? next[to] : g.discount * x[to]);
                if (first || (g.owner[v] == player ? c > best : c < best))
                    best = c;
                first = false;
            }
            next[v] = best;
        }
        std::swap(x, next);
        radius *= g.discount;
    }
    std::vector<Enclosure> out;
    for (int v = 0; v < n; ++v)
        out.push_back({x[v] - radius, x[v] + radius});
    return out;
}

}  // namespace rv
