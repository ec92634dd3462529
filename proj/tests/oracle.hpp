#pragma once

#include <optional>
#include <vector>

#include "rv/arena.hpp"
#include "rv/mealy.hpp"

// Brute-force reference answers, written without the library's solvers.
namespace oracle {

using rv::Game;
using rv::Lasso;
using rv::MealyMachine;
using rv::Rational;

// Payoff of a lasso, evaluated from the definitions.
Rational payoff(const Game& g, const Lasso& l, int player);

// Every lasso from v0 whose vertices are pairwise distinct.
std::vector<Lasso> rho_lassos(const Game& g, int v0);

// Does some play from v0 give player 1 more than player 0 plus epsilon?
// Parity enumerates strongly connected vertex sets; the other classes enumerate
// rho lassos. Energy games only enumerate lassos and so can miss witnesses.
bool privilege_violated(const Game& g, int v0, const Rational& epsilon = 0);

// Does some profile compatible with the machine admit a profitable deviation,
// from the start (nash) or after any history (spe)? Unit durations, margin 0.
bool check_violated(const Game& g, int v0, const MealyMachine& m, bool spe);

// Lower bound on payoff: punishment value by exhaustive memoryless strategy pairs.
// Returns for every vertex min over coalition strategies of max over the player's.
std::vector<Rational> punish_mp_bruteforce(const Game& g, int player);

bool subset_sums_to(const std::vector<long>& set, long target);

// Valuation brute force over 1-based clause lists.
bool satisfiable(int variables, const std::vector<std::vector<int>>& clauses);

}  // namespace oracle
