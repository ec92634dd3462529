#pragma once

#include <optional>
#include <vector>

#include "rv/arena.hpp"

namespace rv {

enum class Sense { le, ge, eq };

struct LinearConstraint {
    std::vector<Rational> coef;
    Sense sense;
    Rational rhs;
};

// Maximises objective . x over x >= 0 subject to the rows, in exact arithmetic.
// Returns an optimal basic solution, or nothing when infeasible or unbounded.
std::optional<std::vector<Rational>> maximize(int variables, const std::vector<LinearConstraint>& rows,
                                              const std::vector<Rational>& objective);

// Any basic feasible solution.
std::optional<std::vector<Rational>> feasible_point(int variables,
                                                    const std::vector<LinearConstraint>& rows);

}  // namespace rv
