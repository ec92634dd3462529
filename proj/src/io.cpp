#include "rv/io.hpp"

#include <fstream>
#include <set>

namespace rv {

namespace {

Rational rational_field(const json& j)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    throw GameError("rational expected as \"p/q\" string or integer, got " + j.dump());
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* what)
{
    if (!j.is_object())
        throw GameError(std::string(what) + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw GameError(std::string("unknown field '") + it.key() + "' in " + what);
}

const json& field(const json& j, const char* key)
{
    if (!j.contains(key))
        throw GameError(std::string("missing field '") + key + "'");
    return j.at(key);
}

// Reads [{"from","to","value"}] into a per-edge vector.
template <class T, class F>
void per_edge(const Game& g, const json& list, std::vector<T>& dst, F convert)
{
    if (!list.is_array())
        throw GameError("per-edge data must be an array");
    for (const auto& item : list) {
        reject_unknown(item, {"from", "to", "value"}, "edge annotation");
        int u = g.vertex(field(item, "from").get<std::string>());
        int v = g.vertex(field(item, "to").get<std::string>());
        int e = g.find_edge(u, v);
        if (e < 0)
            throw GameError("annotation on missing edge " + g.vertices[u] + " -> " + g.vertices[v]);
        dst[e] = convert(field(item, "value"));
    }
}

}  // namespace

Game game_from_json(const json& j)
{
    reject_unknown(j, {"players", "vertices", "owner", "edges", "class", "colors", "targets",
                       "rewards", "lambda", "init", "leader", "durations"},
                   "game");
    Game g;
    g.players = field(j, "players").get<std::vector<std::string>>();
    for (const auto& v : field(j, "vertices"))
        g.vertices.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    std::set<std::string> uniq(g.vertices.begin(), g.vertices.end());
    if (uniq.size() != g.vertices.size())
        throw GameError("duplicate vertex names");
    std::set<std::string> uniqp(g.players.begin(), g.players.end());
    if (uniqp.size() != g.players.size())
        throw GameError("duplicate player names");
    g.payoff = parse_class(field(j, "class").get<std::string>());
    const auto& owner = field(j, "owner");
    if (!owner.is_object())
        throw GameError("owner must map vertices to players");
    g.owner.assign(g.vertices.size(), -1);
    for (auto it = owner.begin(); it != owner.end(); ++it)
        g.owner[g.vertex(it.key())] = g.player(it.value().get<std::string>());
    for (int v = 0; v < g.num_vertices(); ++v)
        if (g.owner[v] < 0)
            throw GameError("owner map is not total: '" + g.vertices[v] + "' has no owner");
    for (const auto& e : field(j, "edges")) {
        reject_unknown(e, {"from", "to"}, "edge");
        g.edges.push_back({g.vertex(field(e, "from").get<std::string>()),
                           g.vertex(field(e, "to").get<std::string>())});
    }
    g.index();
    const int np = g.num_players();
    switch (g.payoff) {
    case PayoffClass::parity: {
        g.colors.assign(np, std::vector<long>(g.vertices.size(), -1));
        const auto& cs = field(j, "colors");
        for (auto it = cs.begin(); it != cs.end(); ++it) {
            int p = g.player(it.key());
            for (auto c = it.value().begin(); c != it.value().end(); ++c)
                g.colors[p][g.vertex(c.key())] = c.value().get<long>();
        }
        for (int p = 0; p < np; ++p)
            for (int v = 0; v < g.num_vertices(); ++v)
                if (g.colors[p][v] < 0)
                    throw GameError("color map is not total for player '" + g.players[p] + "'");
        break;
    }
    case PayoffClass::reach: {
        g.targets.assign(np, std::vector<char>(g.vertices.size(), 0));
        if (j.contains("targets")) {
            const auto& ts = j.at("targets");
            for (auto it = ts.begin(); it != ts.end(); ++it) {
                int p = g.player(it.key());
                for (const auto& v : it.value())
                    g.targets[p][g.vertex(v.get<std::string>())] = 1;
            }
        }
        break;
    }
    default: {
        g.rewards.assign(np, std::vector<Rational>(g.edges.size(), 0));
        if (j.contains("rewards")) {
            const auto& rs = j.at("rewards");
            for (auto it = rs.begin(); it != rs.end(); ++it)
                per_edge(g, it.value(), g.rewards[g.player(it.key())], rational_field);
        }
        if (g.payoff == PayoffClass::discounted)
            g.discount = rational_field(field(j, "lambda"));
        break;
    }
    }
    if (j.contains("durations")) {
        g.durations.assign(g.edges.size(), 1);
        per_edge(g, j.at("durations"), g.durations, [](const json& x) { return x.get<int>(); });
    }
    if (j.contains("init"))
        g.init = g.vertex(j.at("init").get<std::string>());
    if (j.contains("leader"))
        g.leader = g.player(j.at("leader").get<std::string>());
    validate(g);
    return g;
}

json game_to_json(const Game& g)
{
    json j;
    j["players"] = g.players;
    j["vertices"] = g.vertices;
    json owner = json::object();
    for (int v = 0; v < g.num_vertices(); ++v)
        owner[g.vertices[v]] = g.players[g.owner[v]];
    j["owner"] = owner;
    json edges = json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"from", g.vertices[e.from]}, {"to", g.vertices[e.to]}});
    j["edges"] = edges;
    j["class"] = class_name(g.payoff);
    switch (g.payoff) {
    case PayoffClass::parity: {
        json cs = json::object();
        for (int p = 0; p < g.num_players(); ++p) {
            json c = json::object();
            for (int v = 0; v < g.num_vertices(); ++v)
                c[g.vertices[v]] = g.colors[p][v];
            cs[g.players[p]] = c;
        }
        j["colors"] = cs;
        break;
    }
    case PayoffClass::reach: {
        json ts = json::object();
        for (int p = 0; p < g.num_players(); ++p) {
            json t = json::array();
            for (int v = 0; v < g.num_vertices(); ++v)
                if (g.targets[p][v])
                    t.push_back(g.vertices[v]);
            ts[g.players[p]] = t;
        }
        j["targets"] = ts;
        break;
    }
    default: {
        json rs = json::object();
        for (int p = 0; p < g.num_players(); ++p) {
            json r = json::array();
            for (int e = 0; e < g.num_edges(); ++e)
                if (g.rewards[p][e] != 0)
                    r.push_back({{"from", g.vertices[g.edges[e].from]},
                                 {"to", g.vertices[g.edges[e].to]},
                                 {"value", format_rational(g.rewards[p][e])}});
            rs[g.players[p]] = r;
        }
        j["rewards"] = rs;
        if (g.payoff == PayoffClass::discounted)
            j["lambda"] = format_rational(g.discount);
        break;
    }
    }
    if (!g.unit_durations()) {
        json ds = json::array();
        for (int e = 0; e < g.num_edges(); ++e)
            if (g.durations[e] != 1)
                ds.push_back({{"from", g.vertices[g.edges[e].from]},
                              {"to", g.vertices[g.edges[e].to]},
                              {"value", g.durations[e]}});
        j["durations"] = ds;
    }
    if (g.init)
        j["init"] = g.vertices[*g.init];
    if (g.leader)
        j["leader"] = g.players[*g.leader];
    return j;
}

MealyMachine machine_from_json(const Game& g, const json& j)
{
    reject_unknown(j, {"states", "initial", "controlled", "transitions"}, "machine");
    MealyMachine m;
    m.states = field(j, "states").get<std::vector<std::string>>();
    m.initial = m.state(field(j, "initial").get<std::string>());
    m.controlled.assign(g.num_players(), 0);
    for (const auto& p : field(j, "controlled"))
        m.controlled[g.player(p.get<std::string>())] = 1;
    for (const auto& t : field(j, "transitions")) {
        if (!t.is_array() || (t.size() != 3 && t.size() != 4))
            throw GameError("transition must be [p,u,q] or [p,u,q,v]: " + t.dump());
        Transition tr{m.state(t[0].get<std::string>()), g.vertex(t[1].get<std::string>()),
                      m.state(t[2].get<std::string>()), -1};
        if (t.size() == 4)
            tr.output = g.vertex(t[3].get<std::string>());
        m.transitions.push_back(tr);
    }
    m.index(g.num_vertices());
    validate_machine(g, m);
    return m;
}

json machine_to_json(const Game& g, const MealyMachine& m)
{
    json j;
    j["states"] = m.states;
    j["initial"] = m.states[m.initial];
    json c = json::array();
    for (int p = 0; p < g.num_players(); ++p)
        if (m.controlled[p])
            c.push_back(g.players[p]);
    j["controlled"] = c;
    json ts = json::array();
    for (const auto& t : m.transitions) {
        json row = {m.states[t.from], g.vertices[t.read], m.states[t.to]};
        if (t.output >= 0)
            row.push_back(g.vertices[t.output]);
        ts.push_back(row);
    }
    j["transitions"] = ts;
    return j;
}

json lasso_to_json(const Game& g, const Lasso& l)
{
    json stem = json::array(), cycle = json::array();
    for (int v : l.stem)
        stem.push_back(g.vertices[v]);
    for (int v : l.cycle)
        cycle.push_back(g.vertices[v]);
    return {{"stem", stem}, {"cycle", cycle}};
}

Lasso lasso_from_json(const Game& g, const json& j)
{
    reject_unknown(j, {"stem", "cycle"}, "lasso");
    Lasso l;
    for (const auto& v : field(j, "stem"))
        l.stem.push_back(g.vertex(v.get<std::string>()));
    for (const auto& v : field(j, "cycle"))
        l.cycle.push_back(g.vertex(v.get<std::string>()));
    if (!is_valid_lasso(g, l))
        throw GameError("lasso is not a path of the game");
    return l;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw GameError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw GameError("malformed JSON in '" + path + "': " + e.what());
    }
}

}  // namespace rv
