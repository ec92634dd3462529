#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "rv/checking.hpp"
#include "rv/constructions.hpp"
#include "rv/corpus.hpp"
#include "rv/dot.hpp"
#include "rv/gadgets.hpp"
#include "rv/io.hpp"
#include "rv/privilege.hpp"
#include "rv/values.hpp"
#include "rv/verification.hpp"

using namespace rv;

namespace {

constexpr int exit_error = 2;

int exit_code(Status s)
{
    switch (s) {
    case Status::holds:
        return 0;
    case Status::fails:
        return 1;
    case Status::inconclusive:
        return 3;
    }
    return exit_error;
}

json read_document(const std::string& path)
{
    if (path != "-")
        return read_json_file(path);
    std::stringstream buf;
    buf << std::cin.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw GameError(std::string("stdin: ") + e.what());
    }
}

// A game file, or a bundle {"game": ..., "machines": {name: machine}} as written by gen.
struct Loaded {
    Game game;
    json machines = json::object();
};

Loaded load_game(const std::string& path)
{
    const json doc = read_document(path);
    Loaded out;
    if (doc.is_object() && doc.contains("game")) {
        out.game = game_from_json(doc.at("game"));
        if (doc.contains("machines"))
            out.machines = doc.at("machines");
    } else {
        out.game = game_from_json(doc);
    }
    return out;
}

// "@name" picks a machine bundled with the game.
MealyMachine load_machine(const Loaded& l, const std::string& spec)
{
    if (!spec.empty() && spec[0] == '@') {
        const std::string name = spec.substr(1);
        if (!l.machines.contains(name))
            throw GameError("no bundled machine named '" + name + "'");
        return machine_from_json(l.game, l.machines.at(name));
    }
    return machine_from_json(l.game, read_document(spec));
}

int start_vertex(const Game& g, const std::string& name)
{
    if (!name.empty())
        return g.vertex(name);
    if (!g.init)
        throw GameError("the game has no initial vertex; pass --init");
    return *g.init;
}

Rational rational_option(const std::string& text, const Rational& fallback)
{
    return text.empty() ? fallback : parse_rational(text);
}

long env_cap(long flag)
{
    if (flag > 0)
        return flag;
    if (const char* env = std::getenv("RV_CAP"))
        return std::atol(env);
    return 0;
}

json names(const Game& g, const std::vector<int>& vs)
{
    json out = json::array();
    for (int v : vs)
        out.push_back(g.vertices[v]);
    return out;
}

json payoffs(const Game& g, const Lasso& l)
{
    json out = json::object();
    const auto p = eval_payoff(g, l);
    for (int i = 0; i < g.num_players(); ++i)
        out[g.players[i]] = format_rational(p[i]);
    return out;
}

json verdict(Status s)
{
    return json{{"schema", 1}, {"status", status_name(s)}};
}

json counterexample_json(const Game& g, const Counterexample& c)
{
    json out;
    out["history"] = names(g, c.history);
    out["deviator"] = g.players[c.deviator];
    out["deviating"] = lasso_to_json(g, c.deviating);
    out["compliant"] = lasso_to_json(g, c.compliant);
    if (g.payoff != PayoffClass::energy) {
        out["deviating_payoff"] = payoffs(g, c.deviating);
        out["compliant_payoff"] = payoffs(g, c.compliant);
    }
    return out;
}

json ut_json(const Game& g, const UTVerdict& v)
{
    json out = verdict(v.status);
    if (v.witness) {
        out["witness"] = lasso_to_json(g, *v.witness);
        if (g.payoff != PayoffClass::energy)
            out["payoff"] = payoffs(g, *v.witness);
    }
    if (v.machine)
        out["machine"] = machine_to_json(g, *v.machine);
    if (v.status == Status::inconclusive)
        out["bound"] = v.bound;
    return out;
}

json values_json(const Game& g, int player, const std::string& vertex, const Rational& tol)
{
    json values = json::object();
    auto put = [&](int v, json x) { values[g.vertices[v]] = std::move(x); };
    json out{{"schema", 1}, {"player", g.players[player]}, {"class", class_name(g.payoff)}};
    switch (g.payoff) {
    case PayoffClass::parity: {
        const auto r = punish_parity(g, player);
        for (int v = 0; v < g.num_vertices(); ++v)
            put(v, r[v]);
        break;
    }
    case PayoffClass::reach: {
        const auto r = punish_qr(g, player);
        for (int v = 0; v < g.num_vertices(); ++v)
            put(v, format_rational(r.value[v]));
        out["rounds"] = r.rounds;
        break;
    }
    case PayoffClass::mean: {
        const auto r = punish_mp(g, player);
        for (int v = 0; v < g.num_vertices(); ++v)
            put(v, format_rational(r[v]));
        break;
    }
    case PayoffClass::energy: {
        const auto r = punish_energy(g, player);
        for (int v = 0; v < g.num_vertices(); ++v)
            put(v, r[v].str());
        break;
    }
    case PayoffClass::discounted: {
        const auto r = punish_ds(g, player, tol);
        for (int v = 0; v < g.num_vertices(); ++v)
            put(v, json{{"low", format_rational(r[v].low)}, {"high", format_rational(r[v].high)}});
        break;
    }
    }
    if (!vertex.empty())
        out["values"] = json{{vertex, values.at(g.vertices[g.vertex(vertex)])}};
    else
        out["values"] = values;
    return out;
}

std::vector<long> parse_set(const std::string& text)
{
    std::vector<long> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        out.push_back(std::stol(item));
    return out;
}

TwoCounterMachine load_tcm(const std::string& spec)
{
    if (spec == "halting")
        return tcm_halting();
    if (spec == "nonhalting")
        return tcm_nonhalting();
    return tcm_from_json(read_document(spec));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Equilibrium checking and rational verification for multiplayer graph games"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "Worker cap; the solvers run on one thread")->check(CLI::PositiveNumber);

    std::string game_path, machine_spec, init, epsilon_text, threshold_text, player_name, mode;
    long cap = 0;

    auto* check_cmd = app.add_subcommand("check", "Decide whether a profile is a Nash or subgame-perfect equilibrium");
    check_cmd->add_option("--mode", mode, "nash or spe")->required()->check(CLI::IsMember({"nash", "spe"}));
    check_cmd->add_option("--game", game_path, "Game JSON, or - for stdin")->required();
    check_cmd->add_option("--machine", machine_spec, "Machine JSON, or @name for a bundled machine")->required();
    check_cmd->add_option("--cap", cap, "Energy level cap");
    check_cmd->add_option("--epsilon", epsilon_text, "Deviation margin p/q");
    check_cmd->add_option("--init", init, "Start vertex");

    long bound = 0, budget = 10000;
    int memory = 1, depth = 1000;
    auto* verify_cmd = app.add_subcommand("verify", "Universal threshold and rational verification");
    verify_cmd->add_option("--mode", mode, "nash, spe-oracle, ds-semi or energy-core")
        ->required()
        ->check(CLI::IsMember({"nash", "spe-oracle", "ds-semi", "energy-core"}));
    verify_cmd->add_option("--game", game_path, "Game JSON, or - for stdin")->required();
    verify_cmd->add_option("--machine", machine_spec, "Leader machine (nash mode)");
    verify_cmd->add_option("--player", player_name, "Player whose payoff is bounded");
    verify_cmd->add_option("--threshold", threshold_text, "Threshold p/q");
    verify_cmd->add_option("--bound", bound, "Search bound for discounted and energy games");
    verify_cmd->add_option("--memory", memory, "Largest machine size (spe-oracle)");
    verify_cmd->add_option("--depth", depth, "Node budget (ds-semi)");
    verify_cmd->add_option("--budget", budget, "Machine budget (energy-core)");
    verify_cmd->add_option("--epsilon", epsilon_text, "With --machine in nash mode: epsilon-equilibrium check of the profile");
    verify_cmd->add_option("--init", init, "Start vertex");

    auto* privilege_cmd = app.add_subcommand("privilege", "Does every play give Adam at least Eve's payoff?");
    privilege_cmd->add_option("--game", game_path, "Two-player game JSON, or - for stdin")->required();
    privilege_cmd->add_option("--epsilon", epsilon_text, "Margin p/q");
    privilege_cmd->add_option("--cap", cap, "Energy level cap");
    privilege_cmd->add_option("--init", init, "Start vertex");

    std::string construction;
    auto* build_cmd = app.add_subcommand("build", "Construct a deviation game or a product game");
    build_cmd->add_option("construction", construction, "ndev, spdev or product")
        ->required()
        ->check(CLI::IsMember({"ndev", "spdev", "product"}));
    build_cmd->add_option("--game", game_path, "Game JSON, or - for stdin")->required();
    build_cmd->add_option("--machine", machine_spec, "Machine JSON, or @name")->required();
    build_cmd->add_option("--init", init, "Start vertex");

    std::string vertex_name, tol_text;
    auto* value_cmd = app.add_subcommand("value", "Punishment values of a player");
    value_cmd->add_option("--game", game_path, "Game JSON, or - for stdin")->required();
    value_cmd->add_option("--player", player_name, "Punished player")->required();
    value_cmd->add_option("--vertex", vertex_name, "Report a single vertex");
    value_cmd->add_option("--tol", tol_text, "Enclosure width for discounted games (default 1/1000000)");

    std::string sat, set_text, tcm_spec, klass = "mean";
    std::vector<std::string> tds;
    long target = 0;
    std::uint64_t seed = 1;
    int vertices = 4, players = 2, states = 0;
    bool nondet = false;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a reduction instance or a random game");
    auto* gen_group = gen_cmd->add_option_group("instance");
    gen_group->add_flag("--parity-sat", "Parity game from --sat");
    gen_group->add_flag("--qr-sat", "Reachability game from --sat");
    gen_group->add_flag("--mp-pnp", "Mean-payoff game from --sat");
    gen_group->add_flag("--energy-subsetsum", "Energy game from --set and --target");
    gen_group->add_flag("--energy-tcm", "Energy game from --tcm");
    gen_group->add_flag("--energy-tcm-spe", "Two-player energy game from --tcm");
    gen_group->add_flag("--ds-tds", "Discounted game from --tds a b t lambda");
    gen_group->add_flag("--mp-chaos", "Fixed mean-payoff game without leader-fixed equilibria");
    gen_group->add_flag("--energy-infmem", "Fixed energy game needing infinite memory");
    gen_group->add_flag("--example", "Three-vertex example game with its machines");
    gen_group->add_flag("--random", "Random game from --class, --vertices, --players and --seed");
    gen_group->require_option(1);
    gen_cmd->add_option("--sat", sat, "CNF such as \"1,-2;2\"");
    gen_cmd->add_option("--set", set_text, "Comma-separated naturals");
    gen_cmd->add_option("--target", target, "Subset-sum target");
    gen_cmd->add_option("--tcm", tcm_spec, "Two-counter machine JSON, or halting / nonhalting");
    gen_cmd->add_option("--tds", tds, "a b t lambda")->expected(4);
    gen_cmd->add_option("--class", klass, "Payoff class for --random");
    gen_cmd->add_option("--vertices", vertices, "Vertex count for --random");
    gen_cmd->add_option("--players", players, "Player count for --random");
    gen_cmd->add_option("--states", states, "Also emit a random machine with this many states");
    gen_cmd->add_flag("--nondeterministic", nondet, "Random machine with one or two moves per entry");
    gen_cmd->add_option("--seed", seed, "Random seed");

    long steps = 100;
    auto* tcm_cmd = app.add_subcommand("tcm", "Run a two-counter machine");
    tcm_cmd->add_option("--tcm", tcm_spec, "Machine JSON, or halting / nonhalting")->required();
    tcm_cmd->add_option("--budget", steps, "Step budget");

    std::string witness_path;
    auto* dot_cmd = app.add_subcommand("export-dot", "Render a game as Graphviz");
    dot_cmd->add_option("--game", game_path, "Game JSON, or - for stdin")->required();
    dot_cmd->add_option("--machine", machine_spec, "Machine JSON, or @name");
    dot_cmd->add_option("--witness", witness_path, "Lasso JSON to draw bold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_error;
    }

    try {
        if (check_cmd->parsed()) {
            const Loaded l = load_game(game_path);
            const MealyMachine m = load_machine(l, machine_spec);
            const CheckVerdict v = check(l.game, start_vertex(l.game, init), m,
                                         mode == "nash" ? CheckMode::nash : CheckMode::spe,
                                         rational_option(epsilon_text, 0), env_cap(cap));
            json out = verdict(v.status);
            if (v.counterexample)
                out["counterexample"] = counterexample_json(l.game, *v.counterexample);
            std::cout << out.dump(2) << "\n";
            return exit_code(v.status);
        }
        if (verify_cmd->parsed()) {
            const Loaded l = load_game(game_path);
            const Game& g = l.game;
            const int v0 = start_vertex(g, init);
            if (mode == "nash" && !machine_spec.empty() && !epsilon_text.empty()) {
                const CheckVerdict v = epsilon_equilibrium_check(g, v0, load_machine(l, machine_spec),
                                                                 CheckMode::nash, parse_rational(epsilon_text));
                json out = verdict(v.status);
                if (v.counterexample)
                    out["counterexample"] = counterexample_json(g, *v.counterexample);
                std::cout << out.dump(2) << "\n";
                return exit_code(v.status);
            }
            // The energy enumeration always asks for an equilibrium the player loses.
            if (threshold_text.empty() && mode != "energy-core")
                throw GameError("--threshold is required");
            const Rational t = rational_option(threshold_text, 0);
            UTVerdict v;
            if (mode == "nash" && !machine_spec.empty()) {
                v = verify_nash_rv(g, v0, load_machine(l, machine_spec), t, bound);
            } else {
                if (player_name.empty())
                    throw GameError("--player is required");
                const int p = g.player(player_name);
                if (mode == "nash")
                    v = verify_nash_ut(g, v0, p, t, bound);
                else if (mode == "spe-oracle")
                    v = spe_counterexample_oracle(g, v0, p, t, memory);
                else if (mode == "ds-semi")
                    v = ds_semi_verify(g, v0, p, t, depth);
                else
                    v = energy_nash_co_re(g, v0, p, budget);
            }
            std::cout << ut_json(g, v).dump(2) << "\n";
            return exit_code(v.status);
        }
        if (privilege_cmd->parsed()) {
            const Loaded l = load_game(game_path);
            const PrivilegeVerdict v =
                privilege(l.game, start_vertex(l.game, init), rational_option(epsilon_text, 0), env_cap(cap));
            json out = verdict(v.status);
            if (v.witness)
                out["witness"] = lasso_to_json(l.game, *v.witness);
            std::cout << out.dump(2) << "\n";
            return exit_code(v.status);
        }
        if (build_cmd->parsed()) {
            const Loaded l = load_game(game_path);
            const MealyMachine m = load_machine(l, machine_spec);
            const int v0 = start_vertex(l.game, init);
            Game out;
            if (construction == "ndev")
                out = build_ndev(l.game, m, v0).game;
            else if (construction == "spdev")
                out = build_spdev(l.game, m, v0).game;
            else
                out = build_product(l.game, m, v0).game;
            std::cout << game_to_json(out).dump(2) << "\n";
            return 0;
        }
        if (value_cmd->parsed()) {
            const Loaded l = load_game(game_path);
            const Rational tol = rational_option(tol_text, Rational(1, 1000000));
            std::cout << values_json(l.game, l.game.player(player_name), vertex_name, tol).dump(2) << "\n";
            return 0;
        }
        if (gen_cmd->parsed()) {
            json out;
            auto game_only = [&](const Game& g) { out = game_to_json(g); };
            if (gen_cmd->count("--parity-sat"))
                game_only(gen_parity_sat(parse_cnf(sat)));
            else if (gen_cmd->count("--qr-sat"))
                game_only(gen_qr_sat(parse_cnf(sat)));
            else if (gen_cmd->count("--mp-pnp"))
                game_only(gen_mp_pnp(parse_cnf(sat)));
            else if (gen_cmd->count("--energy-subsetsum")) {
                const auto inst = gen_energy_subsetsum(parse_set(set_text), target);
                out = json{{"game", game_to_json(inst.game)},
                           {"machines",
                            {{"permissive", machine_to_json(inst.game, inst.permissive)},
                             {"forcing", machine_to_json(inst.game, inst.forcing)}}}};
            } else if (gen_cmd->count("--energy-tcm"))
                game_only(gen_energy_tcm(load_tcm(tcm_spec)));
            else if (gen_cmd->count("--energy-tcm-spe"))
                game_only(gen_energy_tcm_spe(load_tcm(tcm_spec)));
            else if (gen_cmd->count("--ds-tds")) {
                if (tds.size() != 4)
                    throw GameError("--tds needs a b t lambda");
                game_only(gen_ds_tds(parse_rational(tds[0]), parse_rational(tds[1]), parse_rational(tds[2]),
                                     parse_rational(tds[3])));
            } else if (gen_cmd->count("--mp-chaos")) {
                const Game g = gen_mp_chaos();
                out = json{{"game", game_to_json(g)}, {"machines", {{"profile", machine_to_json(g, chaos_profile(g))}}}};
            } else if (gen_cmd->count("--energy-infmem"))
                game_only(gen_energy_infmem());
            else if (gen_cmd->count("--example")) {
                const Game g = example_game();
                out = json{{"game", game_to_json(g)},
                           {"machines",
                            {{"leader", machine_to_json(g, example_leader_machine(g))},
                             {"profile", machine_to_json(g, example_profile_machine(g))}}}};
            } else {
                std::mt19937_64 rng(seed);
                CorpusShape shape;
                shape.vertices = vertices;
                shape.players = players;
                const Game g = random_game(parse_class(klass), shape, rng);
                if (states > 0)
                    out = json{{"game", game_to_json(g)},
                               {"machines", {{"random", machine_to_json(g, random_machine(g, states, !nondet, rng))}}}};
                else
                    game_only(g);
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (tcm_cmd->parsed()) {
            const TwoCounterMachine k = load_tcm(tcm_spec);
            const TcmRun r = tcm_run(k, steps);
            json run = json::array();
            for (int q : r.states)
                run.push_back(k.states[q]);
            json out = verdict(r.halts ? Status::holds : Status::inconclusive);
            out["halts"] = r.halts;
            out["run"] = run;
            std::cout << out.dump(2) << "\n";
            return r.halts ? 0 : 3;
        }
        if (dot_cmd->parsed()) {
            const Loaded l = load_game(game_path);
            std::optional<MealyMachine> m;
            std::optional<Lasso> w;
            if (!machine_spec.empty())
                m = load_machine(l, machine_spec);
            if (!witness_path.empty())
                w = lasso_from_json(l.game, read_document(witness_path));
            std::cout << export_dot(l.game, m ? &*m : nullptr, w ? &*w : nullptr);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}
