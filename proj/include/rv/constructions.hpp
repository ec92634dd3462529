#pragma once

#include <vector>

#include "rv/arena.hpp"
#include "rv/mealy.hpp"

namespace rv {

constexpr int adam = 0;
constexpr int eve = 1;

// Two-player game in which Eve searches for a profitable deviation. Adam's payoff
// reads the compliant track, Eve's the deviating one.
struct DeviationGame {
    enum class Kind { start, tracking, deviated };
    struct Node {
        Kind kind;
        int state = -1, vertex = -1, deviator = -1, dev_state = -1, dev_vertex = -1;
    };
    Game game;
    int start = 0;
    std::vector<Node> nodes;
};

DeviationGame build_ndev(const Game& g, const MealyMachine& m, int v0);
DeviationGame build_spdev(const Game& g, const MealyMachine& m, int v0);

// Leader's machine folded into the game; Demon resolves its nondeterminism.
struct ProductGame {
    struct Node {
        int vertex;
        int from_state;
        int to_state;  // -1 on (vertex, state) nodes
    };
    Game game;
    int start = 0;
    int demon = -1;
    std::vector<Node> nodes;
};

ProductGame build_product(const Game& g, const MealyMachine& m, int v0);

// Projection of a product play on the original arena.
Lasso project_product(const ProductGame& p, const Lasso& l);

}  // namespace rv
