#pragma once

#include <random>

#include "rv/arena.hpp"
#include "rv/mealy.hpp"

namespace rv {

struct CorpusShape {
    int vertices = 4;
    int players = 2;
    int max_degree = 3;
    long max_reward = 2;  // rewards drawn from [-max_reward, max_reward]
    long max_color = 3;
};

// Random game with every vertex owning at least one edge; initial vertex 0.
Game random_game(PayoffClass c, const CorpusShape& shape, std::mt19937_64& rng);

// Random machine controlling every player. Deterministic machines have one
// transition per (state, vertex); otherwise one or two.
MealyMachine random_machine(const Game& g, int states, bool deterministic, std::mt19937_64& rng);

}  // namespace rv
