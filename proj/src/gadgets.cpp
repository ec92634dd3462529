#include "rv/gadgets.hpp"

#include <set>
#include <sstream>

namespace rv {

Cnf parse_cnf(const std::string& text)
{
    Cnf f;
    std::stringstream clauses(text);
    std::string clause;
    while (std::getline(clauses, clause, ';')) {
        std::vector<int> lits;
        std::stringstream ls(clause);
        std::string lit;
        while (std::getline(ls, lit, ',')) {
            if (lit.find_first_not_of(" ") == std::string::npos)
                continue;
            try {
                size_t used = 0;
                int x = std::stoi(lit, &used);
                if (lit.find_first_not_of(" ", used) != std::string::npos)
                    throw GameError("");
                lits.push_back(x);
            } catch (const std::exception&) {
                throw GameError("malformed literal '" + lit + "'");
            }
        }
        for (int x : lits)
            f.variables = std::max(f.variables, std::abs(x));
        f.clauses.push_back(lits);
    }
    validate_cnf(f);
    return f;
}

void validate_cnf(const Cnf& f)
{
    if (f.clauses.empty())
        throw GameError("formula has no clauses");
    if (f.variables <= 0)
        throw GameError("formula has no variables");
    for (const auto& c : f.clauses) {
        if (c.empty())
            throw GameError("empty clause");
        for (int x : c)
            if (x == 0 || std::abs(x) > f.variables)
                throw GameError("literal out of range");
    }
}

std::string literal_name(int literal)
{
    return (literal < 0 ? "-x" : "x") + std::to_string(std::abs(literal));
}

namespace {

std::vector<std::string> literal_players(int n)
{
    std::vector<std::string> out;
    for (int x = 1; x <= n; ++x) {
        out.push_back(literal_name(x));
        out.push_back(literal_name(-x));
    }
    return out;
}

std::vector<int> distinct(const std::vector<int>& c)
{
    std::vector<int> out;
    for (int x : c)
        if (std::find(out.begin(), out.end(), x) == out.end())
            out.push_back(x);
    return out;
}

}  // namespace

void validate_tcm(const TwoCounterMachine& k)
{
    const int n = static_cast<int>(k.states.size());
    if (n == 0 || static_cast<int>(k.program.size()) != n)
        throw GameError("two-counter machine has inconsistent state data");
    auto in = [&](int q) { return q >= 0 && q < n; };
    if (!in(k.initial) || !in(k.final_state))
        throw GameError("two-counter machine state out of range");
    for (int q = 0; q < n; ++q) {
        const auto& ins = k.program[q];
        if (q == k.final_state) {
            if (ins)
                throw GameError("the final state has an outgoing transition");
            continue;
        }
        if (!ins)
            throw GameError("state '" + k.states[q] + "' has no outgoing transition");
        if (ins->counter != 0 && ins->counter != 1)
            throw GameError("counter must be 1 or 2");
        if (!in(ins->next) || (ins->kind == TwoCounterMachine::Kind::test && !in(ins->zero_next)))
            throw GameError("transition target out of range");
    }
}

TwoCounterMachine tcm_from_json(const json& j)
{
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "states" && it.key() != "initial" && it.key() != "final" &&
            it.key() != "increment" && it.key() != "test")
            throw GameError("unknown field '" + it.key() + "' in two-counter machine");
    TwoCounterMachine k;
    k.states = j.at("states").get<std::vector<std::string>>();
    auto index = [&](const std::string& s) {
        auto it = std::find(k.states.begin(), k.states.end(), s);
        if (it == k.states.end())
            throw GameError("unknown state '" + s + "'");
        return static_cast<int>(it - k.states.begin());
    };
    k.initial = index(j.at("initial").get<std::string>());
    k.final_state = index(j.at("final").get<std::string>());
    k.program.assign(k.states.size(), std::nullopt);
    auto set = [&](int q, TwoCounterMachine::Instruction ins) {
        if (k.program[q])
            throw GameError("state '" + k.states[q] + "' has two transitions");
        k.program[q] = ins;
    };
    if (j.contains("increment"))
        for (const auto& t : j.at("increment"))
            set(index(t.at("from")), {TwoCounterMachine::Kind::increment, t.at("counter").get<int>() - 1,
                                      index(t.at("to"))});
    if (j.contains("test"))
        for (const auto& t : j.at("test"))
            set(index(t.at("from")), {TwoCounterMachine::Kind::test, t.at("counter").get<int>() - 1,
                                      index(t.at("positive")), index(t.at("zero"))});
    validate_tcm(k);
    return k;
}

json tcm_to_json(const TwoCounterMachine& k)
{
    json j;
    j["states"] = k.states;
    j["initial"] = k.states[k.initial];
    j["final"] = k.states[k.final_state];
    j["increment"] = json::array();
    j["test"] = json::array();
    for (size_t q = 0; q < k.states.size(); ++q) {
        const auto& ins = k.program[q];
        if (!ins)
            continue;
        if (ins->kind == TwoCounterMachine::Kind::increment)
            j["increment"].push_back(
                {{"counter", ins->counter + 1}, {"from", k.states[q]}, {"to", k.states[ins->next]}});
        else
            j["test"].push_back({{"counter", ins->counter + 1},
                                 {"from", k.states[q]},
                                 {"positive", k.states[ins->next]},
                                 {"zero", k.states[ins->zero_next]}});
    }
    return j;
}

TcmRun tcm_run(const TwoCounterMachine& k, long budget)
{
    validate_tcm(k);
    TcmRun run;
    long counter[2] = {0, 0};
    int q = k.initial;
    run.states.push_back(q);
    for (long step = 0; step < budget; ++step) {
        if (q == k.final_state) {
            run.halts = true;
            return run;
        }
        const auto& ins = *k.program[q];
        if (ins.kind == TwoCounterMachine::Kind::increment) {
            ++counter[ins.counter];
            q = ins.next;
        } else if (counter[ins.counter] > 0) {
            --counter[ins.counter];
            q = ins.next;
        } else {
            q = ins.zero_next;
        }
        run.states.push_back(q);
    }
    run.halts = q == k.final_state;
    return run;
}

TwoCounterMachine tcm_halting()
{
    using K = TwoCounterMachine::Kind;
    TwoCounterMachine k;
    k.states = {"q0", "q1", "qf"};
    k.initial = 0;
    k.final_state = 2;
    k.program = {TwoCounterMachine::Instruction{K::increment, 0, 1},
                 TwoCounterMachine::Instruction{K::test, 0, 1, 2}, std::nullopt};
    return k;
}

TwoCounterMachine tcm_nonhalting()
{
    using K = TwoCounterMachine::Kind;
    TwoCounterMachine k;
    k.states = {"q0", "q1", "qf"};
    k.initial = 0;
    k.final_state = 2;
    k.program = {TwoCounterMachine::Instruction{K::increment, 0, 1},
                 TwoCounterMachine::Instruction{K::test, 0, 0, 2}, std::nullopt};
    return k;
}

Game gen_parity_sat(const Cnf& f)
{
    validate_cnf(f);
    auto players = literal_players(f.variables);
    players.push_back("Solver");
    players.push_back("Witness");
    GameBuilder b(PayoffClass::parity, players);
    const int solver = 2 * f.variables, witness = solver + 1;
    const int p = static_cast<int>(f.clauses.size());
    auto clause = [](int j) { return "C" + std::to_string(j + 1); };
    auto pair = [&](int j, int lit) { return clause(j) + ":" + literal_name(lit); };
    for (int j = 0; j < p; ++j) {
        b.vertex(clause(j), "Solver");
        for (int lit : distinct(f.clauses[j]))
            b.vertex(pair(j, lit), literal_name(lit));
    }
    const int down = b.vertex("down", "Solver");
    for (int j = 0; j < p; ++j)
        for (int lit : distinct(f.clauses[j])) {
            b.edge(clause(j), pair(j, lit));
            b.edge(pair(j, lit), clause((j + 1) % p));
            b.edge(pair(j, lit), "down");
        }
    b.edge("down", "down");
    Game& g = b.raw();
    for (int v = 0; v < g.num_vertices(); ++v) {
        const bool sink = v == down;
        b.color(v, solver, sink ? 1 : 2);
        b.color(v, witness, sink ? 2 : 1);
        for (int lit = 1; lit <= f.variables; ++lit)
            for (int sign : {1, -1}) {
                const int l = sign * lit;
                const int player = 2 * (lit - 1) + (sign < 0 ? 1 : 0);
                // Vertices (C, complement of l) are bad for l.
                const std::string& name = g.vertices[v];
                const std::string suffix = ":" + literal_name(-l);
                const bool bad = name.size() > suffix.size() &&
                                 name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
                b.color(v, player, bad ? 1 : 2);
            }
    }
    b.init(clause(0));
    return b.build();
}

Game gen_qr_sat(const Cnf& f)
{
    validate_cnf(f);
    std::vector<std::string> players{"Solver"};
    const int p = static_cast<int>(f.clauses.size());
    for (int j = 0; j < p; ++j)
        players.push_back("C" + std::to_string(j + 1));
    GameBuilder b(PayoffClass::reach, players);
    auto ask = [](int x) { return "?x" + std::to_string(x); };
    for (int x = 1; x <= f.variables; ++x) {
        b.vertex(ask(x), "Solver");
        b.vertex(literal_name(x), "Solver");
        b.vertex(literal_name(-x), "Solver");
    }
    for (int j = 0; j < p; ++j)
        b.vertex(players[j + 1], players[j + 1]);
    const int up = b.vertex("up", "Solver");
    b.vertex("down", "Solver");
    for (int x = 1; x <= f.variables; ++x) {
        const std::string next = x < f.variables ? ask(x + 1) : "C1";
        for (int lit : {x, -x}) {
            b.edge(ask(x), literal_name(lit));
            b.edge(literal_name(lit), next);
        }
    }
    for (int j = 0; j < p; ++j) {
        b.edge(players[j + 1], j + 1 < p ? players[j + 2] : "down");
        b.edge(players[j + 1], "up");
    }
    b.edge("up", "up");
    b.edge("down", "down");
    for (int j = 0; j <= p; ++j)
        b.target(up, j);
    const Game& g = b.raw();
    for (int j = 0; j < p; ++j)
        for (int lit : f.clauses[j])
            b.target(g.vertex(literal_name(lit)), j + 1);
    b.init(ask(1));
    return b.build();
}

SubsetSumInstance gen_energy_subsetsum(const std::vector<long>& set, long target)
{
    if (set.empty())
        throw GameError("empty set");
    if (target < 0)
        throw GameError("negative target");
    for (long s : set)
        if (s < 0)
            throw GameError("negative element");
    GameBuilder b(PayoffClass::energy, {"circle", "box"});
    const int n = static_cast<int>(set.size());
    auto ask = [](int i) { return "?s" + std::to_string(i + 1); };
    auto pick = [](int i) { return "s" + std::to_string(i + 1); };
    auto skip = [](int i) { return "-s" + std::to_string(i + 1); };
    for (int i = 0; i < n; ++i) {
        b.vertex(ask(i), "circle");
        b.vertex(pick(i), "circle");
        b.vertex(skip(i), "circle");
    }
    b.vertex("box", "box");
    b.vertex("up", "circle");
    b.vertex("down", "circle");
    for (int i = 0; i < n; ++i) {
        const std::string next = i + 1 < n ? ask(i + 1) : "box";
        b.reward(b.edge(ask(i), pick(i)), "box", set[i]);
        b.edge(ask(i), skip(i));
        b.edge(pick(i), next);
        b.edge(skip(i), next);
    }
    b.reward(b.edge("box", "up"), "box", -target);
    b.reward(b.edge("box", "down"), "box", -target - 1);
    b.edge("up", "up");
    b.edge("down", "down");
    b.init(ask(0));
    SubsetSumInstance out{b.build(), {}, {}};
    out.permissive = permissive_machine(out.game);
    std::vector<int> choice(out.game.num_vertices());
    for (int v = 0; v < out.game.num_vertices(); ++v)
        choice[v] = out.game.edges[out.game.out[v].back()].to;
    choice[out.game.vertex("box")] = out.game.vertex("down");
    out.forcing = memoryless_machine(out.game, choice);
    return out;
}

Game gen_energy_tcm(const TwoCounterMachine& k)
{
    validate_tcm(k);
    using Kind = TwoCounterMachine::Kind;
    const std::vector<std::string> top{"C1top", "C2top"}, bot{"C1bot", "C2bot"};
    GameBuilder b(PayoffClass::energy, {"C1top", "C1bot", "C2top", "C2bot", "Witness"});
    b.vertex("init1", "C1top");
    b.vertex("init2", "C2top");
    b.vertex(k.states[k.final_state], "Witness");
    b.vertex("up", "Witness");
    const int n = static_cast<int>(k.states.size());
    auto zero = [&](int q) { return k.states[q] + "'"; };
    for (int q = 0; q < n; ++q) {
        const auto& ins = k.program[q];
        if (!ins)
            continue;
        if (ins->kind == Kind::increment) {
            b.vertex(k.states[q], "Witness");
        } else {
            b.vertex(zero(q), bot[ins->counter]);
            b.vertex(k.states[q], top[ins->counter]);
        }
    }
    b.edge("init1", "init2");
    b.edge("init1", "init1");
    b.edge("init2", k.states[k.initial]);
    b.edge("init2", "init2");
    const std::string fin = k.states[k.final_state];
    int loop = b.edge(fin, fin);
    for (const char* p : {"C1bot", "C2bot", "Witness"})
        b.reward(loop, p, -1);
    b.edge("up", "up");
    for (int q = 0; q < n; ++q) {
        const auto& ins = k.program[q];
        if (!ins)
            continue;
        const int c = ins->counter;
        if (ins->kind == Kind::increment) {
            int e = b.edge(k.states[q], k.states[ins->next]);
            b.reward(e, top[c], 1);
            b.reward(e, bot[c], 1);
            continue;
        }
        int dec = b.edge(k.states[q], k.states[ins->next]);
        b.reward(dec, top[c], -1);
        b.reward(dec, bot[c], -1);
        b.edge(k.states[q], zero(q));
        b.edge(zero(q), k.states[ins->zero_next]);
        b.reward(b.edge(zero(q), "up"), bot[c], -1);
    }
    b.init("init1");
    return b.build();
}

Game gen_energy_tcm_spe(const TwoCounterMachine& k)
{
    validate_tcm(k);
    using Kind = TwoCounterMachine::Kind;
    const std::vector<std::string> counter{"C1", "C2"};
    GameBuilder b(PayoffClass::energy, counter);
    const int n = static_cast<int>(k.states.size());
    auto name = [&](int q, const char* suffix) { return k.states[q] + suffix; };
    for (int q = 0; q < n; ++q) {
        b.vertex(k.states[q], "C1");
        const auto& ins = k.program[q];
        if (!ins || ins->kind != Kind::test)
            continue;
        if (ins->counter == 0) {
            b.vertex(name(q, "'"), "C2");
        } else {
            b.vertex(name(q, "''"), "C2");
            b.vertex(name(q, "'''"), "C2");
        }
    }
    for (auto [v, owner] : std::vector<std::pair<const char*, const char*>>{
             {"a", "C1"}, {"b", "C1"}, {"c", "C2"}, {"up", "C1"}, {"down", "C1"}, {"down1", "C1"}})
        b.vertex(v, owner);

    b.edge(k.states[k.initial], k.states[k.initial]);
    for (int q = 0; q < n; ++q) {
        const auto& ins = k.program[q];
        const std::string s = k.states[q];
        if (!ins) {
            b.reward(b.edge(s, s), "C2", -1);
            continue;
        }
        const std::string& c = counter[ins->counter];
        const std::string next = k.states[ins->next];
        if (ins->kind == Kind::increment) {
            b.reward(b.edge(s, next), c, 1);
            continue;
        }
        const std::string zero = k.states[ins->zero_next];
        if (ins->counter == 0) {
            b.reward(b.edge(s, next), "C1", -1);
            b.edge(s, name(q, "'"));
            b.edge(name(q, "'"), zero);
            b.edge(name(q, "'"), "a");
        } else {
            b.edge(s, name(q, "''"));
            b.edge(s, name(q, "'''"));
            b.reward(b.edge(name(q, "''"), "up"), "C2", -1);
            b.edge(name(q, "''"), zero);
            b.reward(b.edge(name(q, "'''"), next), "C2", -1);
            b.edge(name(q, "'''"), "b");
        }
    }
    b.reward(b.edge("a", "up"), "C1", -1);
    b.edge("a", "down");
    b.edge("b", "down");
    b.edge("b", "c");
    b.edge("c", "up");
    b.reward(b.edge("c", "down1"), "C2", -1);
    b.edge("up", "up");
    int down = b.edge("down", "down");
    b.reward(down, "C1", -1);
    b.reward(down, "C2", -1);
    b.reward(b.edge("down1", "down1"), "C1", -1);
    b.init(k.states[k.initial]);
    return b.build();
}

Game gen_ds_tds(const Rational& a, const Rational& bv, const Rational& t, const Rational& lambda)
{
    GameBuilder b(PayoffClass::discounted, {"circle", "box", "diamond"});
    b.discount(lambda);
    b.vertex("v0", "box");
    b.vertex("v1", "box");
    b.vertex("v2", "diamond");
    b.vertex("v3", "diamond");
    b.vertex("a", "circle");
    b.vertex("b", "circle");
    b.edge("v0", "v1");
    b.edge("v0", "v2");
    b.edge("v2", "v3");
    b.edge("v2", "a");
    b.reward(b.edge("v1", "v1"), "box", t * lambda * (1 - lambda));
    b.reward(b.edge("v3", "v3"), "diamond", -t * (1 - lambda));
    for (auto [from, to, x] : std::vector<std::tuple<const char*, const char*, Rational>>{
             {"a", "b", bv}, {"b", "b", bv}, {"b", "a", a}, {"a", "a", a}}) {
        int e = b.edge(from, to);
        b.reward(e, "circle", -1);
        b.reward(e, "box", x);
        b.reward(e, "diamond", -x);
    }
    b.init("v0");
    return b.build();
}

Game gen_mp_pnp(const Cnf& f)
{
    validate_cnf(f);
    const int n = f.variables;
    const int p = static_cast<int>(f.clauses.size());
    const long m = 2L * n + p;
    auto players = literal_players(n);
    for (int j = 0; j < p; ++j)
        players.push_back("C" + std::to_string(j + 1));
    for (const char* s : {"Solver", "Witness", "Alice", "Bob"})
        players.push_back(s);
    GameBuilder b(PayoffClass::mean, players);
    auto ask = [](int x) { return "?x" + std::to_string(x); };
    auto clause = [](int j) { return "C" + std::to_string(j + 1); };
    b.vertex("a", "Alice");
    b.vertex("b", "Bob");
    b.vertex("c", "Alice");
    for (int x = 1; x <= n; ++x) {
        b.vertex(ask(x), "Solver");
        b.vertex(literal_name(x), literal_name(x));
        b.vertex(literal_name(-x), literal_name(-x));
    }
    for (int j = 0; j < p; ++j)
        b.vertex(clause(j), clause(j));
    b.vertex("down", "Solver");

    auto triple = [&](int e, const char* who, long v) { b.reward(e, who, v); };
    for (const char* e : {"ab", "ba"}) {
        int id = b.edge(std::string(1, e[0]), std::string(1, e[1]));
        triple(id, "Bob", 3);
        triple(id, "Witness", 1);
    }
    b.edge("b", "c");
    int cc = b.edge("c", "c");
    triple(cc, "Alice", 2);
    triple(cc, "Bob", 2);
    triple(cc, "Witness", 1);
    b.edge("a", ask(1));
    for (int x = 1; x <= n; ++x) {
        const std::string next = x < n ? ask(x + 1) : clause(0);
        for (int lit : {x, -x}) {
            const Rational alice = lit > 0 ? Rational(2) - ratio(m, mpz_class(1) << (x + 1)) : Rational(2);
            for (auto [from, to] : {std::pair{ask(x), literal_name(lit)}, std::pair{literal_name(lit), next}}) {
                int e = b.edge(from, to);
                b.reward(e, literal_name(lit), 2 * m);
                for (int j = 0; j < p; ++j)
                    if (std::find(f.clauses[j].begin(), f.clauses[j].end(), lit) != f.clauses[j].end())
                        b.reward(e, clause(j), m);
                b.reward(e, "Alice", alice);
                if (x == n && lit < 0 && to == next)
                    b.reward(e, "Witness", 1);
            }
            b.edge(literal_name(lit), "down");
        }
    }
    for (int j = 0; j < p; ++j) {
        b.reward(b.edge(clause(j), j + 1 < p ? clause(j + 1) : ask(1)), "Alice", 2);
        b.edge(clause(j), "down");
    }
    int sink = b.edge("down", "down");
    b.reward(sink, "Alice", 1);
    b.reward(sink, "Witness", 1);
    for (const auto& l : literal_players(n))
        b.reward(sink, l, 4);
    for (int j = 0; j < p; ++j)
        b.reward(sink, clause(j), 2);
    b.init("a");
    return b.build();
}

Game gen_mp_chaos()
{
    GameBuilder b(PayoffClass::mean, {"Leader", "circle", "box"});
    b.vertex("a", "circle");
    b.vertex("c", "circle");
    b.vertex("b", "box");
    b.vertex("d", "box");
    b.edge("a", "c");
    b.reward(b.edge("a", "b"), "box", 3);
    b.reward(b.edge("b", "a"), "box", 3);
    b.edge("b", "d");
    int dd = b.edge("d", "d");
    b.reward(dd, "circle", 2);
    b.reward(dd, "box", 2);
    int cc = b.edge("c", "c");
    b.reward(cc, "circle", 1);
    b.reward(cc, "box", 1);
    b.init("a");
    b.leader("Leader");
    return b.build();
}

Game gen_energy_infmem()
{
    GameBuilder b(PayoffClass::energy, {"circle", "box", "diamond"});
    b.vertex("a", "circle");
    b.vertex("b", "box");
    b.vertex("c", "diamond");
    b.vertex("d", "circle");
    b.vertex("e", "circle");
    b.edge("a", "b");
    b.edge("a", "c");
    for (const char* v : {"b", "c"}) {
        int back = b.edge(v, "a");
        for (const char* p : {"circle", "box", "diamond"})
            b.reward(back, p, 1);
        b.reward(b.edge(v, "d"), "circle", 1);
    }
    int dd = b.edge("d", "d");
    for (const char* p : {"circle", "box", "diamond"})
        b.reward(dd, p, -1);
    b.edge("d", "e");
    b.edge("e", "e");
    b.init("a");
    return b.build();
}

Game example_game()
{
    GameBuilder b(PayoffClass::mean, {"circle", "box"});
    b.vertex("a", "circle");
    b.vertex("b", "box");
    b.vertex("c", "circle");
    b.edge("a", "a");
    b.edge("a", "b");
    int bb = b.edge("b", "b");
    b.reward(bb, "circle", 1);
    b.reward(bb, "box", 1);
    b.edge("b", "c");
    b.edge("c", "c");
    b.init("a");
    b.leader("box");
    return b.build();
}

MealyMachine example_leader_machine(const Game& g)
{
    MachineBuilder m(g, {"box"});
    m.add("q0", "a", "q1");
    m.add("q1", "a", "q0");
    m.add("q0", "b", "q0", "b");
    m.add("q0", "b", "q0", "c");
    m.add("q0", "c", "q0");
    m.add("q1", "b", "q1", "b");
    m.add("q1", "c", "q1");
    return m.build();
}

MealyMachine example_profile_machine(const Game& g)
{
    MachineBuilder m(g);
    m.add("q0", "a", "q0", "a");
    m.add("q0", "c", "q0", "c");
    m.add("q0", "b", "q1", "b");
    m.add("q1", "a", "q1", "a");
    m.add("q1", "b", "q1", "c");
    m.add("q1", "c", "q1", "c");
    return m.build();
}

MealyMachine chaos_profile(const Game& chaos)
{
    std::vector<int> choice(chaos.num_vertices());
    for (auto [v, w] : {std::pair{"a", "c"}, {"b", "d"}, {"c", "c"}, {"d", "d"}})
        choice[chaos.vertex(v)] = chaos.vertex(w);
    return memoryless_machine(chaos, choice);
}

MealyMachine pnp_profile(const Game& g, const Cnf& f, const std::vector<int>& valuation)
{
    std::vector<int> choice(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v)
        choice[v] = g.edges[g.out[v].front()].to;
    choice[g.vertex("a")] = g.vertex("?x1");
    choice[g.vertex("b")] = g.vertex("c");
    for (int x = 1; x <= f.variables; ++x)
        choice[g.vertex("?x" + std::to_string(x))] = g.vertex(literal_name(valuation.at(x) ? x : -x));
    return memoryless_machine(g, choice);
}

}  // namespace rv
