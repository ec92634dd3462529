#include <doctest.h>

#include <random>

#include "../oracle.hpp"
#include "rv/corpus.hpp"
#include "rv/privilege.hpp"

using namespace rv;

namespace {

// Adam and Eve on one vertex with a self-loop.
GameBuilder loop_game(PayoffClass c)
{
    GameBuilder b(c, {"Adam", "Eve"});
    b.vertex("v", "Eve");
    b.edge("v", "v");
    return b;
}

}  // namespace

TEST_SUITE("privilege") {

TEST_CASE("parity")
{
    GameBuilder same = loop_game(PayoffClass::parity);
    same.color(0, 0, 1);
    same.color(0, 1, 1);
    CHECK(privilege_parity(same.build(), 0).holds());

    GameBuilder split = loop_game(PayoffClass::parity);
    split.color(0, 0, 1);
    split.color(0, 1, 0);
    const auto v = privilege_parity(split.build(), 0);
    CHECK(v.status == Status::fails);
    REQUIRE(v.witness);
    CHECK(v.witness->cycle == std::vector<int>{0});
}

TEST_CASE("quantitative reachability")
{
    GameBuilder both(PayoffClass::reach, {"Adam", "Eve"});
    both.vertex("u", "Eve");
    both.vertex("v", "Eve");
    both.edge("u", "v");
    both.edge("v", "v");
    both.edge("v", "u");
    both.target(1, 0);
    both.target(1, 1);
    CHECK(privilege_qr(both.build(), 0).holds());

    GameBuilder eve_only = loop_game(PayoffClass::reach);
    eve_only.target(0, 1);
    const auto v = privilege_qr(eve_only.build(), 0);
    CHECK(v.status == Status::fails);
    REQUIRE(v.witness);
    CHECK(v.witness->stem.empty());
}

TEST_CASE("mean payoff and discounted")
{
    GameBuilder same = loop_game(PayoffClass::mean);
    same.reward(0, 0, 3);
    same.reward(0, 1, 3);
    CHECK(privilege_mp(same.build(), 0).holds());
    CHECK(privilege_mp(same.build(), 0, 1).holds());

    GameBuilder ds = loop_game(PayoffClass::discounted);
    ds.reward(0, 1, 1);
    const Game g = ds.build();
    const auto v = privilege_ds(g, 0);
    CHECK(v.status == Status::fails);
    REQUIRE(v.witness);
    CHECK(eval_payoff(g, *v.witness, 1) - eval_payoff(g, *v.witness, 0) == 2);
    CHECK(privilege_ds(g, 0, 2).holds());
}

TEST_CASE("energy")
{
    GameBuilder same = loop_game(PayoffClass::energy);
    same.reward(0, 0, -1);
    same.reward(0, 1, -1);
    CHECK(privilege(same.build(), 0).holds());

    GameBuilder adam_loses = loop_game(PayoffClass::energy);
    adam_loses.reward(0, 0, -1);
    const auto v = privilege(adam_loses.build(), 0);
    CHECK(v.status == Status::fails);
    CHECK(privilege(adam_loses.build(), 0, 1).holds());
}

TEST_CASE("agreement with lasso enumeration on 5-vertex games")
{
    std::mt19937_64 rng(11);
    CorpusShape shape;
    shape.vertices = 5;
    for (PayoffClass c : {PayoffClass::parity, PayoffClass::reach, PayoffClass::energy, PayoffClass::discounted,
                          PayoffClass::mean})
        for (int round = 0; round < 30; ++round) {
            const Game g = random_game(c, shape, rng);
            const auto v = privilege(g, 0);
            if (v.status == Status::inconclusive)
                continue;
            CAPTURE(class_name(c));
            CHECK((v.status == Status::fails) == oracle::privilege_violated(g, 0));
            if (v.witness)
                CHECK(eval_payoff(g, *v.witness, 1) > eval_payoff(g, *v.witness, 0));
        }
}

}
