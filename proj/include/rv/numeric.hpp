#pragma once

#include <vector>

#include "rv/arena.hpp"

namespace rv {

// Least common multiple of the denominators.
mpz_class common_denominator(const std::vector<Rational>& xs);

// xs * factor as machine integers; throws GameError if they do not fit comfortably.
std::vector<long long> scale_to_integers(const std::vector<Rational>& xs, const mpz_class& factor);

long long to_small_integer(const mpz_class& z);

// Weighted graph in which one side (the "survivor") tries to keep an energy level
// nonnegative; chooser[v] marks the vertices where the survivor moves.
struct CreditGraph {
    std::vector<std::vector<std::pair<int, long long>>> out;
    std::vector<char> chooser;
};

constexpr long long infinite_credit = -1;

// Least initial credit per vertex, or infinite_credit. Credits above cap count as infinite.
std::vector<long long> least_credits(const CreditGraph& g, long long cap);

}  // namespace rv
