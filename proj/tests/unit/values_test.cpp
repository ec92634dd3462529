#include <doctest.h>

#include <random>

#include "../oracle.hpp"
#include "rv/corpus.hpp"
#include "rv/gadgets.hpp"
#include "rv/values.hpp"

using namespace rv;

TEST_SUITE("values") {

TEST_CASE("parity punishment")
{
    GameBuilder b(PayoffClass::parity, {"j", "other"});
    b.vertex("u", "j");
    b.vertex("v", "j");
    b.vertex("w", "other");
    b.edge("u", "v");
    b.edge("v", "v");
    b.edge("w", "w");
    b.edge("w", "u");
    b.color(0, 0, 1);
    b.color(1, 0, 2);
    b.color(2, 0, 1);
    const auto val = punish_parity(b.build(), 0);
    CHECK(val == std::vector<int>{1, 1, 0});
}

TEST_CASE("reachability punishment")
{
    GameBuilder b(PayoffClass::reach, {"j", "other"});
    b.vertex("t", "j");
    b.vertex("near", "j");
    b.vertex("fork", "other");
    b.vertex("trap", "other");
    b.edge("t", "t");
    b.edge("near", "t");
    b.edge("near", "trap");
    b.edge("fork", "t");
    b.edge("fork", "trap");
    b.edge("trap", "trap");
    b.target(0, 0);
    const auto val = punish_qr(b.build(), 0);
    CHECK(val.value == std::vector<Rational>{1, Rational(1, 2), 0, 0});
    CHECK(val.rounds <= 4);
}

TEST_CASE("mean-payoff punishment")
{
    GameBuilder b(PayoffClass::mean, {"j", "other"});
    b.vertex("u", "j");
    b.vertex("v", "j");
    b.reward(b.edge("u", "u"), "j", 1);
    b.reward(b.edge("u", "v"), "j", 0);
    b.reward(b.edge("v", "v"), "j", 3);
    Game g = b.build();
    CHECK(punish_mp(g, 0) == std::vector<Rational>{3, 3});
    g.owner = {1, 1};
    CHECK(punish_mp(g, 0) == std::vector<Rational>{1, 3});

    const Game chaos = gen_mp_chaos();
    CHECK(punish_mp(chaos, chaos.player("circle"))[chaos.vertex("a")] == 1);
}

TEST_CASE("mean-payoff punishment against strategy enumeration")
{
    std::mt19937_64 rng(5);
    CorpusShape shape;
    shape.vertices = 5;
    shape.players = 3;
    for (int round = 0; round < 60; ++round) {
        const Game g = random_game(PayoffClass::mean, shape, rng);
        for (int j = 0; j < g.num_players(); ++j)
            CHECK(punish_mp(g, j) == oracle::punish_mp_bruteforce(g, j));
    }
}

TEST_CASE("energy punishment")
{
    GameBuilder b(PayoffClass::energy, {"j"});
    b.vertex("a", "j");
    b.vertex("b", "j");
    b.vertex("c", "j");
    b.reward(b.edge("a", "b"), "j", -2);
    b.reward(b.edge("b", "c"), "j", -1);
    b.reward(b.edge("c", "c"), "j", 0);
    Game g = b.build();
    const auto need = punish_energy(g, 0);
    CHECK(need[0] == ExtendedValue(3L));
    CHECK(need[2] == ExtendedValue(0L));
    for (auto& r : g.rewards[0])
        r = abs(r);
    for (const auto& x : punish_energy(g, 0))
        CHECK(x == ExtendedValue(0L));
    g.rewards[0][2] = -1;
    CHECK(punish_energy(g, 0)[0] == ExtendedValue::plus_infinity());
}

TEST_CASE("discounted punishment")
{
    GameBuilder b(PayoffClass::discounted, {"j"});
    b.vertex("u", "j");
    b.vertex("v", "j");
    b.reward(b.edge("u", "v"), "j", 3);
    b.reward(b.edge("v", "u"), "j", 3);
    b.discount(Rational(1, 3));
    Game g = b.build();
    const Rational tol(1, 1000);
    for (const auto& e : punish_ds(g, 0, tol)) {
        CHECK(e.contains(Rational(9, 2)));
        CHECK(e.high - e.low <= 2 * tol);
    }
    for (auto& r : g.rewards[0])
        r = 0;
    for (const auto& e : punish_ds(g, 0, tol))
        CHECK(e.mid() == 0);
}

}
