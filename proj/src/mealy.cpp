#include "rv/mealy.hpp"

#include <map>

namespace rv {

void MealyMachine::index(int num_vertices)
{
    table.assign(states.size(), std::vector<std::vector<int>>(num_vertices));
    for (int t = 0; t < static_cast<int>(transitions.size()); ++t) {
        const auto& tr = transitions[t];
        if (tr.from < 0 || tr.from >= num_states() || tr.to < 0 || tr.to >= num_states())
            throw GameError("transition uses an unknown state");
        if (tr.read < 0 || tr.read >= num_vertices)
            throw GameError("transition reads an unknown vertex");
        table[tr.from][tr.read].push_back(t);
    }
}

int MealyMachine::state(const std::string& name) const
{
    for (int q = 0; q < num_states(); ++q)
        if (states[q] == name)
            return q;
    throw GameError("unknown machine state '" + name + "'");
}

void validate_machine(const Game& g, const MealyMachine& m, bool partial)
{
    if (m.states.empty())
        throw GameError("machine has no states");
    if (m.initial < 0 || m.initial >= m.num_states())
        throw GameError("initial state outside the state set");
    if (static_cast<int>(m.controlled.size()) != g.num_players())
        throw GameError("controlled set does not match the game's players");
    if (static_cast<int>(m.table.size()) != m.num_states())
        throw GameError("machine not indexed");
    for (const auto& t : m.transitions) {
        bool ctrl = m.controls(g, t.read);
        if (ctrl && t.output < 0)
            throw GameError("missing output on controlled vertex '" + g.vertices[t.read] + "'");
        if (!ctrl && t.output >= 0)
            throw GameError("output on uncontrolled vertex '" + g.vertices[t.read] + "'");
        if (ctrl && g.find_edge(t.read, t.output) < 0)
            throw GameError("output " + g.vertices[t.read] + " -> " + g.vertices[t.output] +
                            " is not an edge");
    }
    if (partial)
        return;
    for (int q = 0; q < m.num_states(); ++q)
        for (int v = 0; v < g.num_vertices(); ++v)
            if (m.applicable(q, v).empty())
                throw GameError("machine is not total at state '" + m.states[q] + "' reading '" +
                                g.vertices[v] + "'");
}

bool is_deterministic(const MealyMachine& m)
{
    for (const auto& row : m.table)
        for (const auto& cell : row)
            if (cell.size() != 1)
                return false;
    return true;
}

std::set<Step> step_relation(const MealyMachine& m, int state, int vertex)
{
    std::set<Step> out;
    for (int t : m.applicable(state, vertex)) {
        const auto& tr = m.transitions[t];
        out.insert({tr.to, tr.output >= 0 ? std::optional<int>(tr.output) : std::nullopt});
    }
    return out;
}

ProfileOutcome deterministic_outcome(const Game& g, int v0, const MealyMachine& m)
{
    if (!is_deterministic(m))
        throw GameError("deterministic_outcome needs a deterministic machine");
    for (char c : m.controlled)
        if (!c)
            throw GameError("deterministic_outcome needs a machine for all players");
    if (v0 < 0 || v0 >= g.num_vertices())
        throw GameError("initial vertex outside the game");
    std::map<std::pair<int, int>, int> seen;
    std::vector<int> verts, sts;
    int q = m.initial, v = v0;
    while (!seen.count({q, v})) {
        seen[{q, v}] = static_cast<int>(verts.size());
        verts.push_back(v);
        sts.push_back(q);
        const auto& tr = m.transitions[m.applicable(q, v).front()];
        q = tr.to;
        v = tr.output;
    }
    int k = seen[{q, v}];
    ProfileOutcome o;
    o.lasso.stem.assign(verts.begin(), verts.begin() + k);
    o.lasso.cycle.assign(verts.begin() + k, verts.end());
    o.states.assign(sts.begin(), sts.begin() + k);
    o.cycle_states.assign(sts.begin() + k, sts.end());
    return o;
}

MealyMachine follow_lasso_machine(const Game& g, const Lasso& l)
{
    MealyMachine m;
    const int n = static_cast<int>(l.length());
    const int s = static_cast<int>(l.stem.size());
    for (int k = 0; k < n; ++k)
        m.states.push_back("q" + std::to_string(k));
    m.controlled.assign(g.num_players(), 1);
    for (int k = 0; k < n; ++k) {
        int nxt = k + 1 < n ? k + 1 : s;
        for (int v = 0; v < g.num_vertices(); ++v) {
            if (v == l.at(k))
                m.transitions.push_back({k, v, nxt, l.at(k + 1)});
            else
                m.transitions.push_back({k, v, k, g.edges[g.out[v].front()].to});
        }
    }
    m.index(g.num_vertices());
    return m;
}

MealyMachine permissive_machine(const Game& g)
{
    MealyMachine m;
    m.states = {"q0"};
    m.controlled.assign(g.num_players(), 1);
    for (const auto& e : g.edges)
        m.transitions.push_back({0, e.from, 0, e.to});
    m.index(g.num_vertices());
    return m;
}

MealyMachine free_machine(const Game& g, const std::vector<int>& players)
{
    MealyMachine m;
    m.states = {"q0"};
    m.controlled.assign(g.num_players(), 0);
    for (int p : players)
        m.controlled[p] = 1;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (m.controlled[g.owner[v]])
            for (int e : g.out[v])
                m.transitions.push_back({0, v, 0, g.edges[e].to});
        else
            m.transitions.push_back({0, v, 0, -1});
    }
    m.index(g.num_vertices());
    return m;
}

MealyMachine memoryless_machine(const Game& g, const std::vector<int>& choice)
{
    MealyMachine m;
    m.states = {"q0"};
    m.controlled.assign(g.num_players(), 1);
    for (int v = 0; v < g.num_vertices(); ++v)
        m.transitions.push_back({0, v, 0, choice.at(v)});
    m.index(g.num_vertices());
    validate_machine(g, m);
    return m;
}

MachineBuilder::MachineBuilder(const Game& g, const std::vector<std::string>& controlled) : g_(g)
{
    m_.controlled.assign(g.num_players(), 0);
    for (const auto& p : controlled)
        m_.controlled[g.player(p)] = 1;
}

MachineBuilder::MachineBuilder(const Game& g) : g_(g) { m_.controlled.assign(g.num_players(), 1); }

int MachineBuilder::state(const std::string& name)
{
    for (int q = 0; q < m_.num_states(); ++q)
        if (m_.states[q] == name)
            return q;
    m_.states.push_back(name);
    return m_.num_states() - 1;
}

void MachineBuilder::add(const std::string& from, const std::string& read, const std::string& to,
                         const std::string& output)
{
    int p = state(from);
    int q = state(to);
    m_.transitions.push_back({p, g_.vertex(read), q, output.empty() ? -1 : g_.vertex(output)});
}

MealyMachine MachineBuilder::build(bool partial)
{
    MealyMachine m = m_;
    m.initial = 0;
    m.index(g_.num_vertices());
    validate_machine(g_, m, partial);
    return m;
}

}  // namespace rv
