#include <doctest.h>

#include "rv/gadgets.hpp"
#include "rv/verification.hpp"

using namespace rv;

TEST_SUITE("verification") {

TEST_CASE("universal threshold on the example")
{
    const Game g = example_game();
    const int box = g.player("box"), a = g.vertex("a");
    const auto low = verify_nash_ut(g, a, box, Rational(1, 2));
    REQUIRE(low.status == Status::fails);
    REQUIRE(low.witness);
    CHECK(low.witness->cycle == std::vector<int>{a});
    CHECK(verify_nash_ut(g, a, box, -1).holds());
}

TEST_CASE("rational verification of the leader machine")
{
    const Game g = example_game();
    const MealyMachine m = example_leader_machine(g);
    CHECK(verify_nash_rv(g, 0, m, Rational(9, 10)).holds());
    const auto top = verify_nash_rv(g, 0, m, 1);
    CHECK(top.status == Status::fails);
    REQUIRE(top.witness);
    CHECK(is_valid_lasso(g, *top.witness));
}

TEST_CASE("rational verification with a silent leader")
{
    GameBuilder b(PayoffClass::mean, {"leader", "other"});
    b.vertex("u", "other");
    b.vertex("v", "other");
    for (auto [x, y] : {std::pair{"u", "v"}, {"v", "u"}, {"v", "v"}})
        b.reward(b.edge(x, y), "leader", 5);
    b.leader("leader");
    const Game g = b.build();
    MachineBuilder silent(g, {"leader"});
    silent.add("q", "u", "q");
    silent.add("q", "v", "q");
    CHECK(verify_nash_rv(g, 0, silent.build(), 4).holds());
}

TEST_CASE("satisfiability gadgets")
{
    const Cnf unsat = parse_cnf("1;-1");
    const Game pu = gen_parity_sat(unsat);
    CHECK(verify_nash_ut(pu, *pu.init, pu.player("Witness"), Rational(1, 2)).holds());
    const Cnf sat = parse_cnf("1");
    const Game ps = gen_parity_sat(sat);
    CHECK(verify_nash_ut(ps, *ps.init, ps.player("Witness"), Rational(1, 2)).status == Status::fails);

    const Game qs = gen_qr_sat(parse_cnf("1,2;-1"));
    CHECK(verify_nash_ut(qs, *qs.init, qs.player("Solver"), 0).status == Status::fails);
    const Game qu = gen_qr_sat(parse_cnf("1;-1"));
    CHECK(verify_nash_ut(qu, *qu.init, qu.player("Solver"), 0).holds());
}

TEST_CASE("subgame-perfect counterexample search")
{
    const Game g = example_game();
    const auto found = spe_counterexample_oracle(g, 0, g.player("box"), 1, 1);
    CHECK(found.status == Status::fails);
    CHECK(found.machine);
    const auto none = spe_counterexample_oracle(g, 0, g.player("box"), Rational(1, 2), 1);
    CHECK(none.status == Status::inconclusive);

    const Game chaos = gen_mp_chaos();
    for (int k = 1; k <= 2; ++k)
        CHECK(spe_counterexample_oracle(chaos, *chaos.init, chaos.player("Leader"), 1, k).status ==
              Status::inconclusive);
}

TEST_CASE("discounted semi-verification")
{
    GameBuilder b(PayoffClass::discounted, {"p"});
    b.vertex("v", "p");
    b.reward(b.edge("v", "v"), "p", 1);
    const Game g = b.build();
    CHECK(ds_semi_verify(g, 0, 0, 1, 10).holds());

    const Game tds = gen_ds_tds(0, 1, 1, Rational(1, 2));
    for (int depth : {10, 100})
        CHECK(ds_semi_verify(tds, *tds.init, tds.player("circle"), Rational(-1, 8), depth).status ==
              Status::inconclusive);
}

TEST_CASE("energy enumeration of Nash equilibria")
{
    const Game halting = gen_energy_tcm(tcm_halting());
    const auto v = energy_nash_co_re(halting, *halting.init, halting.player("Witness"), 10000);
    CHECK(v.status == Status::fails);
    CHECK(v.machine);
    const Game looping = gen_energy_tcm(tcm_nonhalting());
    CHECK(energy_nash_co_re(looping, *looping.init, looping.player("Witness"), 500).status ==
          Status::inconclusive);

    GameBuilder b(PayoffClass::energy, {"p", "q"});
    b.vertex("u", "p");
    b.vertex("v", "q");
    b.edge("u", "v");
    b.edge("v", "u");
    const Game zero = b.build();
    CHECK(energy_nash_co_re(zero, 0, 0, 200).status == Status::inconclusive);
}

TEST_CASE("epsilon equilibria")
{
    const Game chaos = gen_mp_chaos();
    const MealyMachine m = chaos_profile(chaos);
    const int a = chaos.vertex("a");
    CHECK(epsilon_equilibrium_check(chaos, a, m, CheckMode::spe, 1).all_equilibria());
    CHECK(epsilon_equilibrium_check(chaos, a, m, CheckMode::spe, Rational(1, 2)).status == Status::fails);

    const Cnf f = parse_cnf("1");
    const Game pnp = gen_mp_pnp(f);
    const MealyMachine profile = pnp_profile(pnp, f, {0, 1});
    CHECK(epsilon_equilibrium_check(pnp, *pnp.init, profile, CheckMode::nash, Rational(1, 2)).all_equilibria());
}

}
