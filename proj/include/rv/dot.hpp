#pragma once

#include <optional>
#include <string>

#include "rv/arena.hpp"
#include "rv/mealy.hpp"

namespace rv {

// Graphviz rendering. Owners are told apart by node shape, payoff data sits in the
// labels, and the edges of a witness play are drawn bold. A machine, when given,
// is drawn as a separate cluster of states.
std::string export_dot(const Game& g, const MealyMachine* m = nullptr, const Lasso* witness = nullptr);

}  // namespace rv
