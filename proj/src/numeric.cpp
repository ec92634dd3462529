#include "rv/numeric.hpp"

#include <deque>

namespace rv {

mpz_class common_denominator(const std::vector<Rational>& xs)
{
    mpz_class l = 1;
    for (const auto& x : xs)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

long long to_small_integer(const mpz_class& z)
{
    static const mpz_class limit = mpz_class(1) << 40;
    if (abs(z) > limit)
        throw GameError("rational data too large for the integer fast path");
    return z.get_si();
}

std::vector<long long> scale_to_integers(const std::vector<Rational>& xs, const mpz_class& factor)
{
    std::vector<long long> out;
    out.reserve(xs.size());
    for (const auto& x : xs) {
        Rational y = x * factor;
        if (y.get_den() != 1)
            throw GameError("scaling factor does not clear denominators");
        out.push_back(to_small_integer(y.get_num()));
    }
    return out;
}

std::vector<long long> least_credits(const CreditGraph& g, long long cap)
{
    const int n = static_cast<int>(g.out.size());
    std::vector<long long> credit(n, 0);
    std::vector<std::vector<int>> pred(n);
    for (int v = 0; v < n; ++v)
        for (const auto& [w, r] : g.out[v])
            pred[w].push_back(v);
    auto need = [&](long long c, long long r) -> long long {
        if (c == infinite_credit)
            return infinite_credit;
        long long x = c - r;
        return x < 0 ? 0 : x;
    };
    // Larger is worse; infinite is worst.
    auto worse = [](long long a, long long b) {
        if (a == infinite_credit)
            return b != infinite_credit;
        return b != infinite_credit && a > b;
    };
    std::deque<int> work;
    std::vector<char> queued(n, 1);
    for (int v = 0; v < n; ++v)
        work.push_back(v);
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        queued[v] = 0;
        long long best = 0;
        bool first = true;
        for (const auto& [w, r] : g.out[v]) {
            long long c = need(credit[w], r);
            if (first)
                best = c;
            else if (g.chooser[v] ? worse(best, c) : worse(c, best))
                best = c;
            first = false;
        }
        if (first)
            best = infinite_credit;  // dead end: nothing can be survived
        if (best != infinite_credit && best > cap)
            best = infinite_credit;
        if (worse(best, credit[v])) {
            credit[v] = best;
            for (int u : pred[v])
                if (!queued[u]) {
                    queued[u] = 1;
                    work.push_back(u);
                }
        }
    }
    return credit;
}

}  // namespace rv
