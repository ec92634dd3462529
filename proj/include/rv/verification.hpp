#pragma once

#include <optional>

#include "rv/arena.hpp"
#include "rv/checking.hpp"
#include "rv/mealy.hpp"

namespace rv {

// Answer to "does every equilibrium give the player a payoff strictly above t?".
// A Fails verdict carries an equilibrium outcome with payoff at most t, and the
// profile itself when it was found by enumeration.
struct UTVerdict {
    Status status = Status::holds;
    std::optional<Lasso> witness;
    std::optional<MealyMachine> machine;
    long bound = 0;  // search bound reached when inconclusive
    bool holds() const { return status == Status::holds; }
};

// Whether a play is the outcome of some Nash equilibrium, judged from the
// punishment values at the vertices it visits. Inconclusive only for discounted
// games when a value enclosure is too wide.
Status nash_outcome_status(const Game& g, const Lasso& play);

// Exact for parity, reachability and mean payoff. Discounted games search lassos
// with stem and cycle at most `bound` (default |V|); energy games enumerate
// machines up to `bound` (default 10000).
UTVerdict verify_nash_ut(const Game& g, int v0, int player, const Rational& t, long bound = 0);

// Rational verification of the leader's machine through the product game; the
// witness is projected back to the original arena.
UTVerdict verify_nash_rv(const Game& g, int v0, const MealyMachine& m, const Rational& t,
                         long bound = 0);

// Searches deterministic machines with at most `memory` states for a subgame-perfect
// profile giving the player at most t. Never answers Holds.
UTVerdict spe_counterexample_oracle(const Game& g, int v0, int player, const Rational& t, int memory);

// Tree search over partial profiles of a discounted game, cut at irrational or
// off-topic nodes. Holds when the tree closes before `depth` nodes, else Inconclusive.
UTVerdict ds_semi_verify(const Game& g, int v0, int player, const Rational& t, int depth,
                         CheckMode mode = CheckMode::nash);

// Enumerates deterministic machines in canonical order, at most `budget` of them,
// for a Nash equilibrium the player loses. Never answers Holds.
UTVerdict energy_nash_co_re(const Game& g, int v0, int player, long budget);

// Mean-payoff and discounted games: no deviation gains more than epsilon.
CheckVerdict epsilon_equilibrium_check(const Game& g, int v0, const MealyMachine& m, CheckMode mode,
                                       const Rational& epsilon);

}  // namespace rv
