#pragma once

#include <optional>
#include <vector>

#include "rv/arena.hpp"
#include "rv/mealy.hpp"
#include "rv/privilege.hpp"

namespace rv {

enum class CheckMode { nash, spe };

// Both plays start at the initial vertex and share `history`, whose last vertex is
// where the subgame starts. The deviator strictly prefers `deviating` (plus margin).
struct Counterexample {
    std::vector<int> history;
    int deviator = -1;
    Lasso deviating;
    Lasso compliant;
};

struct CheckVerdict {
    Status status = Status::holds;
    std::optional<Counterexample> counterexample;
    bool all_equilibria() const { return status == Status::holds; }
};

CheckVerdict check_nash(const Game& g, int v0, const MealyMachine& m, const Rational& epsilon = 0);
CheckVerdict check_spe(const Game& g, int v0, const MealyMachine& m, const Rational& epsilon = 0);
CheckVerdict check(const Game& g, int v0, const MealyMachine& m, CheckMode mode,
                   const Rational& epsilon = 0, long energy_cap = 0);

// Energy games, deterministic machine, Nash mode.
CheckVerdict check_energy_det_nash(const Game& g, int v0, const MealyMachine& m);

// Energy games, any machine. Partial machines are accepted: missing transitions
// are dead ends, and a Fails verdict then holds for every completion. On Fails,
// `support` receives the (state, vertex) entries of the machine the verdict rests on.
long default_check_cap(const Game& g, const MealyMachine& m);
CheckVerdict check_energy_general(const Game& g, int v0, const MealyMachine& m, CheckMode mode,
                                  long cap = 0, std::vector<std::pair<int, int>>* support = nullptr);

}  // namespace rv
