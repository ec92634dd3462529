#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "oracle.hpp"
#include "rv/checking.hpp"
#include "rv/constructions.hpp"
#include "rv/corpus.hpp"
#include "rv/gadgets.hpp"
#include "rv/privilege.hpp"
#include "rv/values.hpp"
#include "rv/verification.hpp"

using namespace rv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Result()>& run, double limit)
{
    const auto t0 = Clock::now();
    Result r;
    try {
        r = run();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    const double s = seconds_since(t0);
    if (s > limit) {
        r.pass = false;
        r.detail += " (over the " + std::to_string(static_cast<int>(limit)) + " s limit)";
    }
    std::printf("criterion %2d %s  %s: %s [%.2f s]\n", id, r.pass ? "PASS" : "FAIL", title, r.detail.c_str(), s);
    std::fflush(stdout);
    failures += !r.pass;
}

const PayoffClass all_classes[] = {PayoffClass::parity, PayoffClass::reach, PayoffClass::mean,
                                   PayoffClass::discounted, PayoffClass::energy};

CorpusShape random_shape(std::mt19937_64& rng, int players)
{
    CorpusShape s;
    s.vertices = std::uniform_int_distribution<int>(2, 6)(rng);
    s.players = players;
    return s;
}

Result figure_checks()
{
    const Game g = example_game();
    const int v0 = *g.init;
    const MealyMachine m = example_profile_machine(g);
    const CheckVerdict nash = check_nash(g, v0, m);
    const CheckVerdict spe = check_spe(g, v0, m);
    if (!nash.all_equilibria())
        return {false, "Nash check failed"};
    if (spe.all_equilibria() || !spe.counterexample)
        return {false, "SPE check found no counterexample"};
    const auto& c = *spe.counterexample;
    const Rational dev = oracle::payoff(g, c.deviating, c.deviator);
    const Rational comp = oracle::payoff(g, c.compliant, c.deviator);
    const auto d = build_spdev(g, m, v0);
    const auto pw = privilege_mp(d.game, d.start);
    if (dev != 1 || comp != 0 || pw.holds())
        return {false, "deviation payoffs " + format_rational(dev) + " vs " + format_rational(comp)};
    const auto p = eval_payoff(d.game, *pw.witness);
    if (p[eve] != 1 || p[adam] != 0)
        return {false, "deviation game witness pays Eve " + format_rational(p[eve]) + ", Adam " +
                           format_rational(p[adam])};
    return {true, "Nash holds; SPE fails, deviator " + g.players[c.deviator] + " gets 1 instead of 0"};
}

Result product_verification()
{
    const Game g = example_game();
    const MealyMachine m = example_leader_machine(g);
    std::string detail;
    bool pass = true;
    for (const Rational& t : {Rational(0), Rational(1, 2), Rational(9, 10), Rational(1)}) {
        const auto v = verify_nash_rv(g, *g.init, m, t);
        const bool expected = t < 1;
        pass = pass && v.holds() == expected;
        detail += (detail.empty() ? "" : "; ") + ("t=" + format_rational(t) + " " + status_name(v.status));
    }
    return {pass, detail};
}

Result oracle_equivalence()
{
    std::mt19937_64 rng(20240601);
    long games = 0, privilege_checked = 0, check_checked = 0, skipped = 0;
    std::string mismatch;
    for (PayoffClass c : all_classes) {
        for (int k = 0; k < 100; ++k) {
            ++games;
            const Game g = random_game(c, random_shape(rng, 2), rng);
            const int v0 = *g.init;
            // Privilege on a two-player game.
            const PrivilegeVerdict pv = privilege(g, v0);
            const bool violated = oracle::privilege_violated(g, v0);
            if (pv.status == Status::inconclusive) {
                ++skipped;
            } else {
                ++privilege_checked;
                bool ok = pv.holds() ? !violated : violated || c == PayoffClass::energy;
                if (pv.witness)
                    ok = ok && oracle::payoff(g, *pv.witness, eve) > oracle::payoff(g, *pv.witness, adam);
                if (!ok && mismatch.empty())
                    mismatch = "privilege " + class_name(c) + " game " + std::to_string(k);
            }
            // Nash and SPE checks of random profiles with up to three states.
            const int players = std::uniform_int_distribution<int>(1, 3)(rng);
            const Game h = random_game(c, random_shape(rng, players), rng);
            const int states = std::uniform_int_distribution<int>(1, 3)(rng);
            const bool det = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
            const MealyMachine m = random_machine(h, states, det, rng);
            for (CheckMode mode : {CheckMode::nash, CheckMode::spe}) {
                const CheckVerdict cv = check(h, *h.init, m, mode);
                if (cv.status == Status::inconclusive) {
                    ++skipped;
                    continue;
                }
                ++check_checked;
                const bool bad = oracle::check_violated(h, *h.init, m, mode == CheckMode::spe);
                bool ok = cv.all_equilibria() != bad;
                if (cv.counterexample && h.payoff != PayoffClass::energy) {
                    const auto& ce = *cv.counterexample;
                    ok = ok && oracle::payoff(h, ce.deviating, ce.deviator) >
                                   oracle::payoff(h, ce.compliant, ce.deviator);
                }
                if (!ok && mismatch.empty())
                    mismatch = std::string(mode == CheckMode::nash ? "nash" : "spe") + " check " +
                               class_name(c) + " game " + std::to_string(k);
            }
        }
    }
    std::string detail = std::to_string(games) + " games, " + std::to_string(privilege_checked) +
                         " privilege and " + std::to_string(check_checked) + " check verdicts compared, " +
                         std::to_string(skipped) + " unsaturated energy searches skipped";
    if (!mismatch.empty())
        return {false, "first mismatch: " + mismatch + "; " + detail};
    return {true, detail};
}

Result reach_fixed_point()
{
    std::mt19937_64 rng(7);
    long runs = 0, violations = 0;
    for (int k = 0; k < 200; ++k) {
        CorpusShape s = random_shape(rng, 3);
        const Game g = random_game(PayoffClass::reach, s, rng);
        for (int p = 0; p < g.num_players(); ++p) {
            ++runs;
            const ReachValues r = punish_qr(g, p);
            bool ok = r.rounds <= g.num_vertices();
            for (const Rational& x : r.value) {
                const bool unit = x == 0 || (x.get_num() == 1 && x.get_den() <= g.num_vertices());
                ok = ok && unit;
            }
            violations += !ok;
        }
    }
    return {violations == 0, std::to_string(runs) + " fixed points, " + std::to_string(violations) + " violations"};
}

Result subset_sum()
{
    long cases = 0, wrong = 0;
    for (int mask = 1; mask < 32; ++mask) {
        std::vector<long> set;
        for (int k = 0; k < 5; ++k)
            if (mask >> k & 1)
                set.push_back(k + 1);
        for (long t = 0; t <= 15; ++t) {
            ++cases;
            const auto inst = gen_energy_subsetsum(set, t);
            const CheckVerdict v = check_nash(inst.game, *inst.game.init, inst.permissive);
            wrong += (v.status == Status::fails) != oracle::subset_sums_to(set, t);
        }
    }
    return {wrong == 0, std::to_string(cases) + " instances over the 31 non-empty subsets, " +
                            std::to_string(wrong) + " disagreements"};
}

Result sat_biconditionals()
{
    std::vector<std::vector<int>> clauses;
    for (int mask = 1; mask < 16; ++mask) {
        std::vector<int> c;
        const int lits[] = {1, -1, 2, -2};
        for (int k = 0; k < 4; ++k)
            if (mask >> k & 1)
                c.push_back(lits[k]);
        clauses.push_back(c);
    }
    std::vector<Cnf> formulas;
    for (size_t a = 0; a < clauses.size(); ++a) {
        formulas.push_back({2, {clauses[a]}});
        for (size_t b = a; b < clauses.size(); ++b)
            formulas.push_back({2, {clauses[a], clauses[b]}});
    }
    long wrong = 0;
    for (const Cnf& f : formulas) {
        const bool sat = oracle::satisfiable(f.variables, f.clauses);
        const Game parity = gen_parity_sat(f);
        const auto ut = verify_nash_ut(parity, *parity.init, parity.player("Witness"), Rational(1, 2));
        wrong += ut.holds() == sat;
        const Game qr = gen_qr_sat(f);
        const auto ne = verify_nash_ut(qr, *qr.init, qr.player("Solver"), 0);
        wrong += (ne.status == Status::fails) != sat;
    }
    return {wrong == 0, std::to_string(formulas.size()) + " formulas, both gadgets, " + std::to_string(wrong) +
                            " disagreements"};
}

Result counter_machines()
{
    const Game halting = gen_energy_tcm(tcm_halting());
    const Game looping = gen_energy_tcm(tcm_nonhalting());
    const auto a = energy_nash_co_re(halting, *halting.init, halting.player("Witness"), 10000);
    const auto b = energy_nash_co_re(looping, *looping.init, looping.player("Witness"), 10000);
    const bool pass = a.status == Status::fails && b.status == Status::inconclusive;
    return {pass, "halting machine " + status_name(a.status) + " after " + std::to_string(a.bound) +
                      " machines, looping machine " + status_name(b.status)};
}

Result discounted_envelope()
{
    std::mt19937_64 rng(11);
    long checks = 0, wrong = 0;
    for (int k = 0; k < 50; ++k) {
        const Game g = random_game(PayoffClass::discounted, random_shape(rng, 2), rng);
        const auto lassos = oracle::rho_lassos(g, *g.init);
        const Lasso& l = lassos[std::uniform_int_distribution<size_t>(0, lassos.size() - 1)(rng)];
        const Rational m = discounted_bound(g);
        for (int p = 0; p < g.num_players(); ++p) {
            const Rational exact = eval_payoff(g, l, p);
            Rational envelope = m;
            for (long n = 1; n <= 20; ++n) {
                envelope *= g.discount;
                ++checks;
                wrong += abs(truncated_discounted(g, l, p, n) - exact) > envelope;
            }
        }
    }
    return {wrong == 0, std::to_string(checks) + " truncations, " + std::to_string(wrong) + " outside the envelope"};
}

Result chaos_margin()
{
    const Game g = gen_mp_chaos();
    const MealyMachine m = chaos_profile(g);
    const auto half = epsilon_equilibrium_check(g, *g.init, m, CheckMode::spe, Rational(1, 2));
    const auto one = epsilon_equilibrium_check(g, *g.init, m, CheckMode::spe, 1);
    return {!half.all_equilibria() && one.all_equilibria(),
            "epsilon 1/2 " + status_name(half.status) + ", epsilon 1 " + status_name(one.status)};
}

Result infinite_memory()
{
    const Game g = gen_energy_infmem();
    std::string detail;
    bool pass = true;
    for (int k = 1; k <= 3; ++k) {
        const auto t0 = Clock::now();
        const auto v = spe_counterexample_oracle(g, *g.init, g.player("box"), 0, k);
        pass = pass && v.status == Status::inconclusive;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%sk=%d %s in %.1f s", k > 1 ? "; " : "", k, status_name(v.status).c_str(), seconds_since(t0));
        detail += buf;
    }
    return {pass, detail};
}

}  // namespace

int main(int argc, char** argv)
{
    std::set<int> only;
    for (int k = 1; k < argc; ++k)
        only.insert(std::atoi(argv[k]));
    auto wanted = [&](int id) { return only.empty() || only.count(id); };
    if (wanted(1))
        report(1, "figure checks", figure_checks, 1);
    if (wanted(2))
        report(2, "leader verification", product_verification, 4);
    if (wanted(3))
        report(3, "oracle equivalence", oracle_equivalence, 300);
    if (wanted(4))
        report(4, "reachability fixed point", reach_fixed_point, 60);
    if (wanted(5))
        report(5, "subset sum", subset_sum, 60);
    if (wanted(6))
        report(6, "sat gadgets", sat_biconditionals, 60);
    if (wanted(7))
        report(7, "counter machines", counter_machines, 600);
    if (wanted(8))
        report(8, "discounted envelope", discounted_envelope, 60);
    if (wanted(9))
        report(9, "chaos margin", chaos_margin, 60);
    if (wanted(10))
        report(10, "infinite memory", infinite_memory, 600);
    return failures == 0 ? 0 : 1;
}
