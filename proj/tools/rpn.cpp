#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "rpn/control.hpp"
#include "rpn/expand.hpp"
#include "rpn/lts.hpp"
#include "rpn/netfile.hpp"
#include "rpn/props.hpp"
#include "rpn/server.hpp"
#include "rpn/trace.hpp"

using namespace rpn;
using nlohmann::json;

namespace {

struct Options {
    std::string net_path;
    std::string mode;
    std::string semantics;
    int max_states = 100000;
    int max_depth = -1;
    unsigned seed = 0;
    bool seeded = false;
    std::string format = "text";
    bool forward_only = false;
    bool uncontrolled = false;
};

struct Loaded {
    Net net;
    Interp interp;
    Semantics sem;
};

Loaded load(const Options& o) {
    Loaded l{load_net(o.net_path), Interp::individual, Semantics::causal};
    l.interp = l.net.interp;
    l.sem = l.net.semantics;
    if (o.mode == "ground") {
        if (l.net.mode == Mode::variable) l.net = expand_to_ground(l.net);
        l.interp = Interp::individual;
    } else if (o.mode == "individual" || o.mode == "collective") {
        l.interp = parse_interp(o.mode);
    }
    if (l.interp == Interp::collective) l.sem = Semantics::coll;
    else if (l.sem == Semantics::coll) l.sem = Semantics::causal;
    if (!o.semantics.empty()) l.sem = parse_semantics(o.semantics);
    Engine probe(l.net, l.interp);
    if (!probe.allows(l.sem))
        throw std::invalid_argument(std::string("semantics ") + to_string(l.sem) + " needs the " +
                                    (l.sem == Semantics::coll ? "collective" : "individual") + " interpretation");
    return l;
}

Bounds bounds_of(const Options& o, Semantics sem) {
    Bounds b;
    b.max_states = o.max_states;
    b.max_depth = o.max_depth;
    b.sem = sem;
    b.forward_only = o.forward_only;
    b.controlled = !o.uncontrolled;
    return b;
}

void add_common(CLI::App* c, Options& o, bool with_net = true) {
    if (with_net) c->add_option("net", o.net_path, "net file (JSON)")->required()->check(CLI::ExistingFile);
    c->add_option("--mode", o.mode, "ground, individual or collective")
        ->check(CLI::IsMember({"ground", "individual", "collective"}));
    c->add_option("--semantics", o.semantics, "bt, causal, oco or coll")
        ->check(CLI::IsMember({"bt", "causal", "oco", "coll"}));
    c->add_option("--max-states", o.max_states, "state bound")->check(CLI::PositiveNumber);
    c->add_option("--max-depth", o.max_depth, "depth bound")->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "tie-break shuffling of assignments")->each([&](const std::string&) { o.seeded = true; });
    c->add_option("--format", o.format, "json, dot or text")->check(CLI::IsMember({"json", "dot", "text"}));
    c->add_flag("--forward-only", o.forward_only, "explore forward firings only");
    c->add_flag("--uncontrolled", o.uncontrolled, "ignore transition conditions");
}

std::string describe(const Net& net, const ControlledMove& cm) {
    std::string s = move_label(net, cm.move);
    if (cm.move.dir == Dir::reverse) s += " key=" + std::to_string(cm.move.key);
    if (cm.cond.has_condition) s += "   [" + cm.cond.trace + "]";
    return s;
}

int cmd_validate(const Options& o) {
    json doc = read_json_file(o.net_path);
    std::vector<std::string> problems;
    Net net = build_net(doc, problems);
    if (problems.empty()) {
        problems = validate_net(net);
        auto c = check_conditions(net);
        problems.insert(problems.end(), c.begin(), c.end());
    }
    if (problems.empty()) {
        std::cout << o.net_path << ": ok (" << net.places.size() << " places, " << net.transitions.size()
                  << " transitions, " << net.tokens.size() << " tokens)\n";
        return 0;
    }
    for (const auto& p : problems) std::cout << o.net_path << ": " << p << "\n";
    return 2;
}

int cmd_step(const Options& o, int auto_steps) {
    auto l = load(o);
    Engine eng(l.net, l.interp);
    State s = eng.initial();
    std::vector<State> undo;
    std::mt19937 rng(o.seed);
    auto list = [&]() {
        std::vector<ControlledMove> all;
        for (Dir d : {Dir::forward, Dir::reverse})
            for (auto& cm : enabled_controlled(eng, s, d, l.sem, false)) all.push_back(std::move(cm));
        if (o.seeded) std::shuffle(all.begin(), all.end(), rng);
        return all;
    };
    if (auto_steps > 0) {
        std::cout << "0: " << marking_text(l.net, s) << "\n";
        for (int i = 1; i <= auto_steps; ++i) {
            auto ms = list();
            if (ms.empty()) {
                std::cout << "deadlock\n";
                break;
            }
            const auto& cm = ms[o.seeded ? std::uniform_int_distribution<size_t>(0, ms.size() - 1)(rng) : 0];
            s = eng.apply(s, cm.move);
            std::cout << i << ": " << describe(l.net, cm) << " -> " << marking_text(l.net, s) << " | "
                      << history_text(l.net, s) << "\n";
        }
        return 0;
    }
    std::string line;
    while (true) {
        std::cout << "\n" << marking_text(l.net, s) << " | " << history_text(l.net, s) << "\n";
        auto ms = list();
        if (ms.empty()) std::cout << "deadlock\n";
        for (size_t i = 0; i < ms.size(); ++i) std::cout << "  " << i << ") " << describe(l.net, ms[i]) << "\n";
        std::cout << "move number, u(ndo), s(tate) or q(uit)> " << std::flush;
        if (!std::getline(std::cin, line) || line == "q") break;
        if (line == "u") {
            if (!undo.empty()) {
                s = undo.back();
                undo.pop_back();
            }
            continue;
        }
        if (line == "s") {
            std::cout << state_json(l.net, s).dump(2) << "\n";
            continue;
        }
        try {
            size_t k = std::stoul(line);
            if (k >= ms.size()) throw std::out_of_range("no such move");
            undo.push_back(s);
            s = eng.apply(s, ms[k].move);
        } catch (const std::exception& e) {
            std::cout << "? " << e.what() << "\n";
        }
    }
    return 0;
}

int cmd_run(const Options& o, const std::string& script_path) {
    auto l = load(o);
    json script = read_json_file(script_path);
    if (!o.mode.empty() && o.mode != "ground") script["interpretation"] = to_string(l.interp);
    if (!o.semantics.empty()) script["semantics"] = to_string(l.sem);
    auto rep = run_trace(l.net, script);
    if (o.format == "json") {
        json j{{"ok", rep.ok}, {"steps", rep.steps_run}, {"lines", rep.lines}, {"final", state_json(l.net, rep.final_state)}};
        if (!rep.ok) j["error"] = rep.error;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& line : rep.lines) std::cout << line << "\n";
        if (!rep.ok) std::cout << "FAILED " << rep.error << "\n";
        else std::cout << "ok, " << rep.steps_run << " steps\n";
    }
    return rep.ok ? 0 : 1;
}

int cmd_explore(const Options& o, bool dump) {
    auto l = load(o);
    Engine eng(l.net, l.interp);
    auto lts = build_lts(eng, eng.initial(), bounds_of(o, l.sem));
    if (dump || o.format == "dot") {
        std::cout << (o.format == "dot" ? export_dot(l.net, lts) : export_text(l.net, lts));
        return 0;
    }
    if (o.format == "json") {
        json states = json::array(), edges = json::array();
        for (const auto& st : lts.states) states.push_back(state_json(l.net, st));
        for (const auto& e : lts.edges) edges.push_back({{"src", e.src}, {"label", move_label(l.net, e.move)}, {"dst", e.dst}});
        std::cout << json{{"states", states}, {"edges", edges}, {"truncated", lts.truncated}, {"skipped", lts.skipped}}.dump(2)
                  << "\n";
        return 0;
    }
    int maxd = 0;
    for (int d : lts.depth) maxd = std::max(maxd, d);
    std::cout << "states " << lts.states.size() << "\nedges " << lts.edges.size() << "\nmax depth " << maxd
              << "\nsemantics " << to_string(l.sem) << "\n";
    if (lts.skipped) std::cout << "skipped moves " << lts.skipped << "\n";
    if (lts.truncated) std::cout << "TRUNCATED" << (lts.state_cap ? " (state cap)" : " (depth bound)") << "\n";
    return 0;
}

int cmd_check(const Options& o, const std::string& prop, const std::string& query_path, const std::string& target_path,
              const std::vector<std::string>& places, int level, const std::string& transition, bool ignore_history) {
    auto l = load(o);
    Engine eng(l.net, l.interp);
    json q = query_path.empty() ? json::object() : read_json_file(query_path);
    if (!prop.empty()) q["kind"] = prop;
    if (!q.contains("kind")) throw std::invalid_argument("no property given");
    if (!target_path.empty()) q["target"] = read_json_file(target_path);
    if (!places.empty()) q["places"] = places;
    if (level >= 0) q["level"] = level;
    if (!transition.empty()) q["transition"] = transition;
    if (ignore_history) q["ignoreHistory"] = true;
    auto query = parse_query(l.net, q);
    auto lts = build_lts(eng, eng.initial(), bounds_of(o, l.sem));
    auto v = check_property(eng, lts, query);
    if (o.format == "json") {
        json w = json::array();
        for (const auto& m : v.witness) w.push_back(move_label(l.net, m));
        json lv = json::object();
        for (auto [t, k] : v.levels) lv[l.net.transitions[t].name] = k;
        std::cout << json{{"property", q["kind"]}, {"holds", v.holds}, {"bounded", v.bounded}, {"detail", v.detail},
                          {"witness", w}, {"levels", lv}, {"states", lts.states.size()}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << q["kind"].get<std::string>() << ": " << (v.holds ? "holds" : "does not hold")
                  << (v.bounded ? " (bounded exploration)" : "") << "\n" << v.detail << "\n";
        for (auto [t, k] : v.levels) std::cout << "  " << l.net.transitions[t].name << " L" << k << "\n";
        if (v.state >= 0) {
            std::cout << "path:";
            for (const auto& m : v.witness) std::cout << " " << move_label(l.net, m);
            std::cout << "\nstate: " << marking_text(l.net, lts.states[v.state]) << " | "
                      << history_text(l.net, lts.states[v.state]) << "\n";
        }
    }
    return v.holds ? 0 : 1;
}

int cmd_expand(const Options& o, const std::string& out) {
    Net net = load_net(o.net_path);
    Net g = expand_to_ground(net);
    std::string text = save_net(g).dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        f << text;
        if (!f) throw std::runtime_error("cannot write " + out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reversing Petri net engine and bounded analyzer"};
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate", "check a net file");
    add_common(validate, o);

    int auto_steps = 0;
    auto* step = app.add_subcommand("step", "interactive stepping");
    add_common(step, o);
    step->add_option("--auto", auto_steps, "take N moves without prompting (random with --seed)");

    std::string script;
    auto* run = app.add_subcommand("run", "run a trace script");
    add_common(run, o);
    run->add_option("script", script, "trace script (JSON)")->required()->check(CLI::ExistingFile);

    auto* explore = app.add_subcommand("explore", "build the bounded LTS and summarise it");
    add_common(explore, o);

    std::string prop, query_path, target_path, transition;
    std::vector<std::string> places;
    int level = -1;
    bool ignore_history = false;
    auto* check = app.add_subcommand("check", "check a behavioural property");
    add_common(check, o);
    check->add_option("property", prop, "reachability, coverability, homeState, liveness, deadlock, persistence, siphon, trap");
    check->add_option("--query", query_path, "query file (JSON)")->check(CLI::ExistingFile);
    check->add_option("--target", target_path, "target state file (JSON)")->check(CLI::ExistingFile);
    check->add_option("--places", places, "place set for siphon/trap")->delimiter(',');
    check->add_option("--level", level, "liveness level 0-4");
    check->add_option("--transition", transition, "restrict liveness to one transition");
    check->add_flag("--ignore-history", ignore_history, "compare markings only");

    auto* export_lts = app.add_subcommand("export-lts", "print the LTS (text or dot)");
    add_common(export_lts, o);

    std::string out;
    auto* expand = app.add_subcommand("expand", "expand a variable net to a ground net");
    add_common(expand, o);
    expand->add_option("-o,--output", out, "output file");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve_cmd = app.add_subcommand("serve", "start the step server");
    serve_cmd->add_option("--host", host);
    serve_cmd->add_option("--port", port);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*step) return cmd_step(o, auto_steps);
        if (*run) return cmd_run(o, script);
        if (*explore) return cmd_explore(o, false);
        if (*check) return cmd_check(o, prop, query_path, target_path, places, level, transition, ignore_history);
        if (*export_lts) return cmd_explore(o, true);
        if (*expand) return cmd_expand(o, out);
        if (*serve_cmd) {
            std::cout << "serving on http://" << host << ":" << port << "\n" << std::flush;
            return serve(host, port);
        }
    } catch (const LoadError& e) {
        for (const auto& p : e.problems) std::cerr << p << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
