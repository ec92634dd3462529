#include "rv/constructions.hpp"

#include <array>
#include <deque>
#include <map>
#include <set>

namespace rv {

namespace {

using Node = DeviationGame::Node;
using Kind = DeviationGame::Kind;

int adam_vertex(const Node& n) { return n.vertex; }
int eve_vertex(const Node& n) { return n.kind == Kind::deviated ? n.dev_vertex : n.vertex; }

class DeviationBuilder {
public:
    DeviationBuilder(const Game& g, const MealyMachine& m, int v0, bool subgame)
        : g_(g), m_(m), v0_(v0), subgame_(subgame)
    {
        if (!g.unit_durations())
            throw GameError("deviation games need unit edge durations");
        for (char c : m.controlled)
            if (!c)
                throw GameError("deviation games need a machine for all players");
        if (v0 < 0 || v0 >= g.num_vertices())
            throw GameError("initial vertex outside the game");
    }

    DeviationGame run()
    {
        intern({Kind::start, m_.initial, v0_});
        while (!queue_.empty()) {
            int id = queue_.front();
            queue_.pop_front();
            expand(id);
        }
        return assemble();
    }

private:
    int intern(const Node& n)
    {
        std::array<int, 6> key{static_cast<int>(n.kind), n.state, n.vertex, n.deviator, n.dev_state,
                               n.dev_vertex};
        auto [it, fresh] = ids_.emplace(key, static_cast<int>(nodes_.size()));
        if (fresh) {
            nodes_.push_back(n);
            queue_.push_back(it->second);
        }
        return it->second;
    }

    void link(int from, const Node& to)
    {
        int t = intern(to);
        if (edge_set_.insert({from, t}).second)
            edges_.push_back({from, t});
    }

    void expand(int id)
    {
        const Node n = nodes_[id];
        const int np = g_.num_players();
        if (n.kind == Kind::start || n.kind == Kind::tracking) {
            const int u = n.vertex;
            const int owner = g_.owner[u];
            for (int t : m_.applicable(n.state, u)) {
                const auto& tr = m_.transitions[t];
                for (int i = 0; i < np; ++i) {
                    if (n.kind == Kind::tracking && i != n.deviator)
                        continue;
                    link(id, {Kind::tracking, tr.to, tr.output, i});
                    if (owner == i)
                        for (int e : g_.out[u]) {
                            int w = g_.edges[e].to;
                            if (w != tr.output)
                                link(id, {Kind::deviated, tr.to, tr.output, i, tr.to, w});
                        }
                    if (subgame_)
                        for (int e : g_.out[u])
                            link(id, {Kind::tracking, tr.to, g_.edges[e].to, i});
                }
            }
            return;
        }
        const int i = n.deviator;
        for (int t : m_.applicable(n.state, n.vertex)) {
            const auto& tr = m_.transitions[t];
            for (int t2 : m_.applicable(n.dev_state, n.dev_vertex)) {
                const auto& tr2 = m_.transitions[t2];
                if (g_.owner[n.dev_vertex] == i) {
                    for (int e : g_.out[n.dev_vertex])
                        link(id, {Kind::deviated, tr.to, tr.output, i, tr2.to, g_.edges[e].to});
                } else {
                    link(id, {Kind::deviated, tr.to, tr.output, i, tr2.to, tr2.output});
                }
            }
        }
    }

    std::string name(const Node& n) const
    {
        std::string s = m_.states[n.state] + "|" + g_.vertices[n.vertex];
        if (n.kind == Kind::start)
            return s;
        s += "|" + g_.players[n.deviator];
        if (n.kind == Kind::deviated)
            s += "|" + m_.states[n.dev_state] + "|" + g_.vertices[n.dev_vertex];
        return s;
    }

    DeviationGame assemble() const
    {
        DeviationGame d;
        Game& out = d.game;
        out.players = {"Adam", "Eve"};
        out.payoff = g_.payoff;
        out.discount = g_.discount;
        for (const auto& n : nodes_) {
            out.vertices.push_back(name(n));
            out.owner.push_back(eve);
        }
        out.edges = edges_;
        out.init = 0;
        out.index();
        const int nv = out.num_vertices();
        switch (g_.payoff) {
        case PayoffClass::parity:
            out.colors.assign(2, std::vector<long>(nv, 0));
            for (int v = 0; v < nv; ++v) {
                const auto& n = nodes_[v];
                if (n.kind == Kind::start)
                    continue;
                out.colors[adam][v] = g_.colors[n.deviator][adam_vertex(n)];
                out.colors[eve][v] = g_.colors[n.deviator][eve_vertex(n)];
            }
            break;
        case PayoffClass::reach:
            out.targets.assign(2, std::vector<char>(nv, 0));
            for (int v = 0; v < nv; ++v) {
                const auto& n = nodes_[v];
                if (n.kind == Kind::start)
                    continue;
                // Already hit at the root: both tracks are paid alike.
                if (g_.targets[n.deviator][v0_]) {
                    out.targets[adam][v] = out.targets[eve][v] = 1;
                    continue;
                }
                out.targets[adam][v] = g_.targets[n.deviator][adam_vertex(n)];
                out.targets[eve][v] = g_.targets[n.deviator][eve_vertex(n)];
            }
            break;
        default:
            out.rewards.assign(2, std::vector<Rational>(out.num_edges(), 0));
            for (int e = 0; e < out.num_edges(); ++e) {
                const auto& a = nodes_[out.edges[e].from];
                const auto& b = nodes_[out.edges[e].to];
                out.rewards[adam][e] = g_.reward(b.deviator, adam_vertex(a), adam_vertex(b));
                out.rewards[eve][e] = g_.reward(b.deviator, eve_vertex(a), eve_vertex(b));
            }
            break;
        }
        validate(out);
        d.nodes = nodes_;
        d.start = 0;
        return d;
    }

    const Game& g_;
    const MealyMachine& m_;
    int v0_;
    bool subgame_;
    std::map<std::array<int, 6>, int> ids_;
    std::vector<Node> nodes_;
    std::deque<int> queue_;
    std::vector<Edge> edges_;
    std::set<std::pair<int, int>> edge_set_;
};

}  // namespace

DeviationGame build_ndev(const Game& g, const MealyMachine& m, int v0)
{
    return DeviationBuilder(g, m, v0, false).run();
}

DeviationGame build_spdev(const Game& g, const MealyMachine& m, int v0)
{
    return DeviationBuilder(g, m, v0, true).run();
}

ProductGame build_product(const Game& g, const MealyMachine& m, int v0)
{
    if (!g.leader)
        throw GameError("product game needs a leader");
    const int leader = *g.leader;
    for (int p = 0; p < g.num_players(); ++p)
        if ((m.controlled[p] != 0) != (p == leader))
            throw GameError("product game needs a machine controlling exactly the leader");
    if (!g.unit_durations())
        throw GameError("product game needs unit edge durations");

    ProductGame pg;
    std::map<std::array<int, 3>, int> ids;
    std::deque<int> queue;
    struct Raw {
        int from, to, orig_edge;
    };
    std::vector<Raw> raw;
    std::set<std::pair<int, int>> seen;
    auto intern = [&](int v, int p, int q) {
        auto [it, fresh] = ids.emplace(std::array<int, 3>{v, p, q}, static_cast<int>(pg.nodes.size()));
        if (fresh) {
            pg.nodes.push_back({v, p, q});
            queue.push_back(it->second);
        }
        return it->second;
    };
    auto link = [&](int a, int b, int orig) {
        if (seen.insert({a, b}).second)
            raw.push_back({a, b, orig});
    };
    intern(v0, m.initial, -1);
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        const auto n = pg.nodes[id];
        if (n.to_state < 0) {
            for (int t : m.applicable(n.from_state, n.vertex))
                link(id, intern(n.vertex, n.from_state, m.transitions[t].to), -1);
            continue;
        }
        if (g.owner[n.vertex] == leader) {
            for (int t : m.applicable(n.from_state, n.vertex)) {
                const auto& tr = m.transitions[t];
                if (tr.to == n.to_state)
                    link(id, intern(tr.output, tr.to, -1), g.find_edge(n.vertex, tr.output));
            }
        } else {
            for (int e : g.out[n.vertex])
                link(id, intern(g.edges[e].to, n.to_state, -1), e);
        }
    }

    Game& out = pg.game;
    out.players = g.players;
    out.players.push_back("Demon");
    pg.demon = static_cast<int>(out.players.size()) - 1;
    out.payoff = g.payoff;
    out.discount = g.discount;
    out.leader = leader;
    for (const auto& n : pg.nodes) {
        std::string name = g.vertices[n.vertex] + "|" + m.states[n.from_state];
        if (n.to_state >= 0)
            name += "|" + m.states[n.to_state];
        out.vertices.push_back(name);
        bool demon = n.to_state < 0 || g.owner[n.vertex] == leader;
        out.owner.push_back(demon ? pg.demon : g.owner[n.vertex]);
    }
    for (const auto& r : raw)
        out.edges.push_back({r.from, r.to});
    out.durations.clear();
    for (const auto& r : raw)
        out.durations.push_back(r.orig_edge >= 0 ? 1 : 0);
    out.init = 0;
    out.index();
    const int np = out.num_players(), nv = out.num_vertices();
    switch (g.payoff) {
    case PayoffClass::parity:
        out.colors.assign(np, std::vector<long>(nv, 1));
        for (int p = 0; p < g.num_players(); ++p)
            for (int v = 0; v < nv; ++v)
                out.colors[p][v] = g.colors[p][pg.nodes[v].vertex];
        break;
    case PayoffClass::reach:
        out.targets.assign(np, std::vector<char>(nv, 0));
        for (int p = 0; p < g.num_players(); ++p)
            for (int v = 0; v < nv; ++v)
                out.targets[p][v] = g.targets[p][pg.nodes[v].vertex];
        break;
    default:
        out.rewards.assign(np, std::vector<Rational>(out.num_edges(), 0));
        for (int e = 0; e < out.num_edges(); ++e) {
            if (raw[e].orig_edge >= 0)
                for (int p = 0; p < g.num_players(); ++p)
                    out.rewards[p][e] = g.rewards[p][raw[e].orig_edge];
            // Demon loses every energy play at once and earns nothing otherwise.
            if (g.payoff == PayoffClass::energy)
                out.rewards[pg.demon][e] = -1;
        }
        break;
    }
    validate(out);
    return pg;
}

Lasso project_product(const ProductGame& p, const Lasso& l)
{
    Lasso out;
    // One entry per original step: the (vertex, state) nodes.
    for (int v : l.stem)
        if (p.nodes[v].to_state < 0)
            out.stem.push_back(p.nodes[v].vertex);
    for (int v : l.cycle)
        if (p.nodes[v].to_state < 0)
            out.cycle.push_back(p.nodes[v].vertex);
    return canonical(out);
}

}  // namespace rv
