#include "rv/dot.hpp"

#include <set>
#include <sstream>

namespace rv {

namespace {

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string shape(int owner)
{
    switch (owner % 4) {
    case 0: return "shape=circle";
    case 1: return "shape=box";
    case 2: return "shape=diamond";
    default: return "shape=box, style=rounded";
    }
}

}  // namespace

std::string export_dot(const Game& g, const MealyMachine* m, const Lasso* witness)
{
    std::set<std::pair<int, int>> bold;
    if (witness && witness->length() > 0) {
        const long len = witness->length();
        for (long k = 0; k < len; ++k)
            bold.insert({witness->at(k), witness->at(k + 1)});
    }
    std::ostringstream out;
    out << "digraph game {\n";
    if (g.init)
        out << "  __start [shape=point];\n";
    for (int v = 0; v < g.num_vertices(); ++v) {
        std::string label = g.vertices[v];
        if (g.payoff == PayoffClass::parity) {
            label += "\\n";
            for (int p = 0; p < g.num_players(); ++p)
                label += (p ? "," : "") + std::to_string(g.colors[p][v]);
        }
        if (g.payoff == PayoffClass::reach) {
            std::string hits;
            for (int p = 0; p < g.num_players(); ++p)
                if (g.targets[p][v])
                    hits += (hits.empty() ? "" : ",") + g.players[p];
            if (!hits.empty())
                label += "\\n[" + hits + "]";
        }
        out << "  v" << v << " [label=" << quote(label) << ", " << shape(g.owner[v]) << "];\n";
    }
    if (g.init)
        out << "  __start -> v" << *g.init << ";\n";
    const bool weighted = g.payoff == PayoffClass::mean || g.payoff == PayoffClass::energy ||
                          g.payoff == PayoffClass::discounted;
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto& edge = g.edges[e];
        std::string label;
        if (weighted)
            for (int p = 0; p < g.num_players(); ++p)
                if (g.rewards[p][e] != 0)
                    label += (label.empty() ? "" : " ") + g.players[p] + ":" + format_rational(g.rewards[p][e]);
        if (g.duration(e) != 1)
            label += (label.empty() ? "" : " ") + std::string("d=") + std::to_string(g.duration(e));
        out << "  v" << edge.from << " -> v" << edge.to;
        std::string attrs;
        if (!label.empty())
            attrs += "label=" + quote(label);
        if (bold.count({edge.from, edge.to}))
            attrs += std::string(attrs.empty() ? "" : ", ") + "style=bold, penwidth=3";
        if (!attrs.empty())
            out << " [" << attrs << "]";
        out << ";\n";
    }
    if (m) {
        out << "  subgraph cluster_machine {\n    label=\"machine\";\n";
        for (int q = 0; q < m->num_states(); ++q)
            out << "    s" << q << " [label=" << quote(m->states[q]) << ", shape=ellipse"
                << (q == m->initial ? ", peripheries=2" : "") << "];\n";
        for (const auto& t : m->transitions) {
            std::string label = g.vertices[t.read];
            if (t.output >= 0)
                label += "/" + g.vertices[t.output];
            out << "    s" << t.from << " -> s" << t.to << " [label=" << quote(label) << "];\n";
        }
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace rv
