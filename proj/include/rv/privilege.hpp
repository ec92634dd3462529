#pragma once

#include <optional>

#include "rv/arena.hpp"

namespace rv {

enum class Status { holds, fails, inconclusive };

std::string status_name(Status s);

// Answer to "does every play from v0 give Adam at least Eve's payoff (plus margin)?"
// Player 0 is Adam, player 1 is Eve.
struct PrivilegeVerdict {
    Status status = Status::holds;
    std::optional<Lasso> witness;
    bool holds() const { return status == Status::holds; }
};

PrivilegeVerdict privilege_parity(const Game& g, int v0, const Rational& epsilon = 0);
PrivilegeVerdict privilege_qr(const Game& g, int v0, const Rational& epsilon = 0);
PrivilegeVerdict privilege_mp(const Game& g, int v0, const Rational& epsilon = 0);
PrivilegeVerdict privilege_ds(const Game& g, int v0, const Rational& epsilon = 0);
PrivilegeVerdict privilege_energy_bounded(const Game& g, int v0, long cap,
                                          const Rational& epsilon = 0);

long default_energy_cap(const Game& g);
PrivilegeVerdict privilege(const Game& g, int v0, const Rational& epsilon = 0, long energy_cap = 0);

}  // namespace rv
