#include <doctest.h>

#include <algorithm>

#include "rv/constructions.hpp"
#include "rv/dot.hpp"
#include "rv/gadgets.hpp"
#include "rv/io.hpp"

using namespace rv;

namespace {

long count(const std::string& text, const std::string& what)
{
    long n = 0;
    for (size_t p = text.find(what); p != std::string::npos; p = text.find(what, p + 1))
        ++n;
    return n;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("games round-trip through JSON")
{
    for (const Game& g : {example_game(), gen_mp_chaos(), gen_energy_infmem(), gen_ds_tds(0, 1, 1, Rational(1, 2)),
                          gen_parity_sat(parse_cnf("1,2;-1")), gen_qr_sat(parse_cnf("1;2")),
                          gen_energy_subsetsum({3, 5}, 8).game}) {
        const json j = game_to_json(g);
        const Game back = game_from_json(j);
        CHECK(game_to_json(back) == j);
        CHECK(back.num_edges() == g.num_edges());
    }
}

TEST_CASE("machines and lassos round-trip")
{
    const Game g = example_game();
    for (const MealyMachine& m : {example_leader_machine(g), example_profile_machine(g)}) {
        const MealyMachine back = machine_from_json(g, machine_to_json(g, m));
        CHECK(back.transitions.size() == m.transitions.size());
        CHECK(machine_to_json(g, back) == machine_to_json(g, m));
    }
    const Lasso l{{0}, {1}};
    CHECK(lasso_from_json(g, lasso_to_json(g, l)) == l);
}

TEST_CASE("malformed documents are rejected")
{
    json j = game_to_json(example_game());
    j["surprise"] = 1;
    CHECK_THROWS_AS(game_from_json(j), GameError);
    j = game_to_json(example_game());
    j["edges"].push_back({{"from", "a"}, {"to", "nowhere"}});
    CHECK_THROWS_AS(game_from_json(j), GameError);
    CHECK_THROWS(read_json_file("/nonexistent/game.json"));
}

TEST_CASE("dot export")
{
    const Game g = example_game();
    const std::string plain = export_dot(g);
    // One more arrow marks the start vertex.
    CHECK(count(plain, "->") == 5 + 1);
    CHECK(count(plain, "label=") >= 3);
    CHECK(count(plain, "bold") == 0);
    const Lasso w{{0}, {1}};
    const std::string drawn = export_dot(g, nullptr, &w);
    CHECK(count(drawn, "bold") == 2);
    const MealyMachine m = example_leader_machine(g);
    CHECK(count(export_dot(g, &m), "cluster") == 1);
    const auto p = build_product(g, m, 0);
    CHECK(count(export_dot(p.game), "->") == p.game.num_edges() + 1);
}

}
