#include <doctest.h>

#include "rv/gadgets.hpp"

using namespace rv;

TEST_SUITE("mealy") {

TEST_CASE("determinism of the example machines")
{
    const Game g = example_game();
    CHECK_FALSE(is_deterministic(example_leader_machine(g)));
    CHECK(is_deterministic(example_profile_machine(g)));
    CHECK(is_deterministic(permissive_machine(g)) == false);
    std::vector<int> loops{g.vertex("a"), g.vertex("b"), g.vertex("c")};
    CHECK(is_deterministic(memoryless_machine(g, loops)));
}

TEST_CASE("step relation")
{
    const Game g = example_game();
    const int b = g.vertex("b"), c = g.vertex("c");
    const MealyMachine leader = example_leader_machine(g);
    const int q0 = leader.state("q0");
    CHECK(step_relation(leader, q0, b) == std::set<Step>{{q0, b}, {q0, c}});
    CHECK(step_relation(leader, q0, g.vertex("a")) == std::set<Step>{{leader.state("q1"), std::nullopt}});
    const MealyMachine profile = example_profile_machine(g);
    const int q1 = profile.state("q1");
    CHECK(step_relation(profile, q1, b) == std::set<Step>{{q1, c}});
}

TEST_CASE("deterministic outcomes")
{
    const Game g = example_game();
    const int a = g.vertex("a");
    const auto out = deterministic_outcome(g, a, example_profile_machine(g));
    CHECK(out.lasso == Lasso{{}, {a}});
    CHECK(out.cycle_states.size() == 1);

    const int c = g.vertex("c");
    std::vector<int> choice{g.vertex("b"), c, c};
    const auto chain = deterministic_outcome(g, a, memoryless_machine(g, choice));
    CHECK(chain.lasso == Lasso{{a, g.vertex("b")}, {c}});

    const Lasso target{{a, a, g.vertex("b")}, {g.vertex("b"), c, c}};
    const Lasso wanted = canonical(target);
    const auto followed = deterministic_outcome(g, a, follow_lasso_machine(g, wanted));
    CHECK(followed.lasso == wanted);
    CHECK_THROWS_AS(deterministic_outcome(g, a, example_leader_machine(g)), GameError);
}

TEST_CASE("machine validation")
{
    const Game g = example_game();
    MachineBuilder wrong_edge(g);
    wrong_edge.add("q", "a", "q", "c");
    CHECK_THROWS_AS(wrong_edge.build(true), GameError);

    MachineBuilder partial(g);
    partial.add("q", "a", "q", "a");
    CHECK_THROWS_AS(partial.build(), GameError);
    CHECK_NOTHROW(partial.build(true));

    MachineBuilder uncontrolled(g, {"box"});
    uncontrolled.add("q", "a", "q", "a");
    CHECK_THROWS_AS(uncontrolled.build(true), GameError);
}

}
