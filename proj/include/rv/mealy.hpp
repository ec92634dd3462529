#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rv/arena.hpp"

namespace rv {

struct Transition {
    int from;
    int read;
    int to;
    int output = -1;  // -1 when the read vertex is not controlled
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct MealyMachine {
    std::vector<std::string> states;
    int initial = 0;
    std::vector<char> controlled;          // [player]
    std::vector<Transition> transitions;

    // Derived by index(): transitions applicable to (state, vertex).
    std::vector<std::vector<std::vector<int>>> table;

    int num_states() const { return static_cast<int>(states.size()); }
    void index(int num_vertices);
    const std::vector<int>& applicable(int state, int vertex) const { return table[state][vertex]; }
    bool controls(const Game& g, int vertex) const { return controlled[g.owner[vertex]] != 0; }
    int state(const std::string& name) const;
};

struct Step {
    int next;
    std::optional<int> output;
    friend auto operator<=>(const Step&, const Step&) = default;
};

// Checks edges, controlled-player consistency and, unless partial, totality.
void validate_machine(const Game& g, const MealyMachine& m, bool partial = false);
bool is_deterministic(const MealyMachine& m);
std::set<Step> step_relation(const MealyMachine& m, int state, int vertex);

struct ProfileOutcome {
    Lasso lasso;
    std::vector<int> states;      // state before reading each stem vertex
    std::vector<int> cycle_states;  // and each cycle vertex
};

ProfileOutcome deterministic_outcome(const Game& g, int v0, const MealyMachine& m);

// Deterministic machine whose outcome from the first stem vertex is the lasso.
MealyMachine follow_lasso_machine(const Game& g, const Lasso& l);

// One-state machine offering every move to every player.
MealyMachine permissive_machine(const Game& g);

// One-state machine letting the given players make any move.
MealyMachine free_machine(const Game& g, const std::vector<int>& players);

// One-state machine for all players playing choice[v] at every vertex v.
MealyMachine memoryless_machine(const Game& g, const std::vector<int>& choice);

// Construction by names; states are created on first use, the first one is initial.
class MachineBuilder {
public:
    MachineBuilder(const Game& g, const std::vector<std::string>& controlled);
    explicit MachineBuilder(const Game& g);  // controls every player
    int state(const std::string& name);
    void add(const std::string& from, const std::string& read, const std::string& to,
             const std::string& output = "");
    MealyMachine build(bool partial = false);

private:
    const Game& g_;
    MealyMachine m_;
};

}  // namespace rv
