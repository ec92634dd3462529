#include <doctest.h>

#include "../oracle.hpp"
#include "rv/gadgets.hpp"

using namespace rv;

TEST_SUITE("gadgets") {

TEST_CASE("formula parsing")
{
    const Cnf f = parse_cnf("1,-2;2");
    CHECK(f.variables == 2);
    CHECK(f.clauses == std::vector<std::vector<int>>{{1, -2}, {2}});
    CHECK_THROWS_AS(parse_cnf(""), GameError);
    CHECK_THROWS_AS(parse_cnf("1,0"), GameError);
    CHECK_THROWS_AS(gen_parity_sat(Cnf{}), GameError);
    CHECK_THROWS_AS(gen_mp_pnp(Cnf{}), GameError);
}

TEST_CASE("two-counter machine runs")
{
    const TwoCounterMachine h = tcm_halting();
    const TcmRun run = tcm_run(h, 100);
    CHECK(run.halts);
    CHECK(run.states == std::vector<int>{0, 1, 1, 2});
    const TcmRun loop = tcm_run(tcm_nonhalting(), 100);
    CHECK_FALSE(loop.halts);
    CHECK(loop.states.size() == 101);

    TwoCounterMachine direct = h;
    direct.initial = 1;
    const TcmRun quick = tcm_run(direct, 10);
    CHECK(quick.halts);
    CHECK(quick.states == std::vector<int>{1, 2});
    CHECK(tcm_from_json(tcm_to_json(h)).program.size() == h.program.size());
}

TEST_CASE("subset sum gadget")
{
    CHECK_THROWS_AS(gen_energy_subsetsum({}, 3), GameError);
    const auto inst = gen_energy_subsetsum({3, 5, 7}, 8);
    CHECK(inst.game.num_players() == 2);
    CHECK(is_deterministic(inst.forcing));
    CHECK(oracle::subset_sums_to({3, 5, 7}, 8));
    CHECK_FALSE(oracle::subset_sums_to({3, 5, 7}, 9));
}

TEST_CASE("discounted threshold gadget")
{
    const Game g = gen_ds_tds(0, 1, 1, Rational(1, 2));
    CHECK(g.payoff == PayoffClass::discounted);
    CHECK(g.discount == Rational(1, 2));
    CHECK(g.num_players() == 3);
}

TEST_CASE("mean-payoff formula gadget rewards")
{
    const Cnf f = parse_cnf("1;-1,2");
    const Game g = gen_mp_pnp(f);
    const int alice = g.player("Alice");
    const long m = 2L * f.variables + static_cast<long>(f.clauses.size());
    for (int x = 1; x <= f.variables; ++x) {
        const int ask = g.vertex("?x" + std::to_string(x));
        const Rational expected = 2 - ratio(m, 1L << (x + 1));
        CHECK(g.reward(alice, ask, g.vertex(literal_name(x))) == expected);
    }
}

TEST_CASE("fixed games")
{
    CHECK(gen_mp_chaos().num_vertices() == 4);
    CHECK(gen_energy_infmem().num_vertices() == 5);
    for (const Game& g : {gen_energy_tcm(tcm_halting()), gen_energy_tcm_spe(tcm_halting()), gen_mp_chaos(),
                          gen_energy_infmem(), gen_parity_sat(parse_cnf("1,2;-1")), gen_qr_sat(parse_cnf("1,2;-1"))})
        CHECK_NOTHROW(validate(g));
}

}
