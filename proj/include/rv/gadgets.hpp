#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rv/arena.hpp"
#include "rv/io.hpp"
#include "rv/mealy.hpp"

namespace rv {

// Conjunctive normal form; literals are signed 1-based variable indices.
struct Cnf {
    int variables = 0;
    std::vector<std::vector<int>> clauses;
};

// "1,-2;2" is (x1 or not x2) and x2.
Cnf parse_cnf(const std::string& text);
void validate_cnf(const Cnf& f);
std::string literal_name(int literal);

struct TwoCounterMachine {
    enum class Kind { increment, test };
    struct Instruction {
        Kind kind;
        int counter;         // 0 or 1
        int next;            // successor, or the positive branch of a test
        int zero_next = -1;  // test only
    };
    std::vector<std::string> states;
    int initial = 0;
    int final_state = 0;
    std::vector<std::optional<Instruction>> program;  // empty at the final state
};

void validate_tcm(const TwoCounterMachine& k);
TwoCounterMachine tcm_from_json(const json& j);
json tcm_to_json(const TwoCounterMachine& k);

struct TcmRun {
    bool halts = false;
    std::vector<int> states;  // visited states, the first `budget` steps if not halted
};
TcmRun tcm_run(const TwoCounterMachine& k, long budget);

TwoCounterMachine tcm_halting();      // q0 -inc-> q1, q1 tests down to qf
TwoCounterMachine tcm_nonhalting();   // q0 -inc-> q1 -dec-> q0

Game gen_parity_sat(const Cnf& f);
Game gen_qr_sat(const Cnf& f);

struct SubsetSumInstance {
    Game game;
    MealyMachine permissive;  // every move allowed
    MealyMachine forcing;     // fixed choices, the box player goes down
};
SubsetSumInstance gen_energy_subsetsum(const std::vector<long>& set, long target);

Game gen_energy_tcm(const TwoCounterMachine& k);
Game gen_energy_tcm_spe(const TwoCounterMachine& k);
Game gen_ds_tds(const Rational& a, const Rational& b, const Rational& t, const Rational& lambda);
Game gen_mp_pnp(const Cnf& f);
Game gen_mp_chaos();
Game gen_energy_infmem();

// Small fixed examples.
Game example_game();                               // three-vertex mean-payoff game
MealyMachine example_leader_machine(const Game& g);   // nondeterministic, box player only
MealyMachine example_profile_machine(const Game& g);  // deterministic, all players
MealyMachine chaos_profile(const Game& chaos);        // memoryless a->c, b->d
// Memoryless profile of the P^NP game following a valuation (1-based, index 0 unused).
MealyMachine pnp_profile(const Game& g, const Cnf& f, const std::vector<int>& valuation);

}  // namespace rv
