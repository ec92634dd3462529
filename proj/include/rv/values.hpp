#pragma once

#include <optional>
#include <vector>

#include "rv/arena.hpp"

namespace rv {

// Two-player zero-sum values in which `player` plays alone against the coalition
// of everybody else.

// 1 where the player wins the parity condition, 0 where the coalition wins.
std::vector<int> punish_parity(const Game& g, int player);

struct ReachValues {
    std::vector<Rational> value;  // 1/(1 + time to target), 0 if never
    int rounds = 0;               // rounds of the fixed point that changed a value
};
ReachValues punish_qr(const Game& g, int player);

std::vector<Rational> punish_mp(const Game& g, int player);

// Least initial credit; plus_infinity where none suffices. Credits above the cap
// (default (|V|-1) times the largest absolute reward) count as infinite.
std::vector<ExtendedValue> punish_energy(const Game& g, int player,
                                         std::optional<Rational> cap = std::nullopt);

struct Enclosure {
    Rational low, high;
    Rational mid() const { return (low + high) / 2; }
    bool contains(const Rational& x) const { return low <= x && x <= high; }
};
std::vector<Enclosure> punish_ds(const Game& g, int player, const Rational& tolerance);

// Largest absolute reward of any player divided by 1 - lambda.
Rational discounted_bound(const Game& g);

// Vertices ordered so that every zero-duration edge goes from a later to an earlier
// vertex; throws if the zero-duration edges contain a cycle.
std::vector<int> zero_duration_order(const Game& g);

}  // namespace rv
