#include "rpn/trace.hpp"

#include <algorithm>
#include <set>

#include "rpn/control.hpp"
#include "rpn/netfile.hpp"

namespace rpn {

using nlohmann::json;

namespace {

std::set<std::string> name_set(const json& j) {
    std::set<std::string> r;
    for (const auto& x : j) r.insert(x.get<std::string>());
    return r;
}

std::set<std::pair<std::string, std::string>> bond_set(const json& j) {
    std::set<std::pair<std::string, std::string>> r;
    for (const auto& x : j) {
        std::string a, b;
        if (x.is_string()) {
            auto s = x.get<std::string>();
            auto d = s.find('-');
            a = s.substr(0, d);
            b = d == std::string::npos ? "" : s.substr(d + 1);
        } else {
            a = x[0].get<std::string>();
            b = x[1].get<std::string>();
        }
        r.insert(a < b ? std::pair{a, b} : std::pair{b, a});
    }
    return r;
}

std::string show(const std::set<std::string>& s) {
    std::string r = "{";
    for (const auto& x : s) r += (r.size() > 1 ? "," : "") + x;
    return r + "}";
}

}  // namespace

std::string compare_marking(const Net& net, const State& s, const json& expect, bool whole) {
    json actual = marking_json(net, s);
    std::set<std::string> places;
    for (auto& [p, _] : expect.items()) places.insert(p);
    if (whole)
        for (auto& [p, _] : actual.items()) places.insert(p);
    std::string diff;
    for (const auto& p : places) {
        if (net.place_id(p) < 0) return "unknown place " + p;
        json e = expect.contains(p) ? expect.at(p) : json::object();
        json a = actual.contains(p) ? actual.at(p) : json::object();
        if (e.is_array()) e = json{{"tokens", e}};
        auto et = name_set(e.value("tokens", json::array()));
        auto at = name_set(a.value("tokens", json::array()));
        auto eb = bond_set(e.value("bonds", json::array()));
        auto ab = bond_set(a.value("bonds", json::array()));
        if (et != at) diff += p + ": tokens " + show(at) + " expected " + show(et) + "; ";
        if (eb != ab) diff += p + ": bonds differ; ";
    }
    return diff;
}

TraceReport run_trace(const Net& net, const json& script) {
    TraceReport rep;
    Interp interp = script.contains("interpretation") ? parse_interp(script.at("interpretation").get<std::string>())
                                                      : net.interp;
    Semantics def_sem = script.contains("semantics") ? parse_semantics(script.at("semantics").get<std::string>())
                                                     : net.semantics;
    if (interp == Interp::collective) def_sem = Semantics::coll;
    Engine eng(net, interp);
    State s = eng.initial();
    rep.lines.push_back("initial: " + marking_text(net, s));
    if (script.contains("expectInitial")) {
        auto diff = compare_marking(net, s, script.at("expectInitial"), true);
        if (!diff.empty()) {
            rep.ok = false;
            rep.error = "initial marking: " + diff;
            rep.final_state = s;
            return rep;
        }
    }

    int i = 0;
    for (const auto& step : script.value("steps", json::array())) {
        ++i;
        std::string where = "step " + std::to_string(i);
        bool expect_fail = step.value("expectFail", false);
        try {
            Dir dir;
            std::string tname;
            if (step.contains("fire")) {
                dir = Dir::forward;
                tname = step.at("fire").get<std::string>();
            } else if (step.contains("reverse")) {
                dir = Dir::reverse;
                tname = step.at("reverse").get<std::string>();
            } else {
                throw Error("step needs 'fire' or 'reverse'");
            }
            int t = net.transition_id(tname);
            if (t < 0) throw Error("unknown transition " + tname);
            const auto& tr = net.transitions[t];
            Semantics sem = step.contains("semantics") ? parse_semantics(step.at("semantics").get<std::string>()) : def_sem;

            std::vector<Move> cands;
            if (dir == Dir::forward) {
                for (auto& b : eng.enabled_forward(s, t)) cands.push_back(Move{dir, t, 0, sem, b});
            } else {
                auto hist = s.history(t);
                if (hist.empty()) throw Error(tname + " has no live occurrence");
                int key = step.value("key", *std::max_element(hist.begin(), hist.end()));
                for (auto& b : eng.reverse_bindings(s, Occ{t, key}, sem)) cands.push_back(Move{dir, t, key, sem, b});
            }
            std::string blocked;
            std::vector<Move> ok;
            for (auto& m : cands) {
                if (step.contains("assignment")) {
                    bool match = true;
                    for (auto& [vn, tok] : step.at("assignment").items()) {
                        int v = tr.var_id(vn);
                        int id = net.token_id(tok.get<std::string>());
                        if (v < 0 || id < 0) throw Error("assignment names unknown " + vn + "/" + tok.get<std::string>());
                        if (m.binding[v] != id) match = false;
                    }
                    if (!match) continue;
                }
                auto c = check_condition(eng, s, t, dir, m.binding);
                if (c.ok) ok.push_back(m);
                else blocked = c.trace;
            }
            if (ok.empty())
                throw Error(std::string(dir == Dir::forward ? "fire " : "reverse ") + tname + " not enabled" +
                            (blocked.empty() ? "" : " (" + blocked + ")"));
            const Move& m = ok.front();
            State next = eng.apply(s, m);
            if (expect_fail) {
                rep.ok = false;
                rep.error = where + ": expected failure but the move succeeded";
                break;
            }
            s = std::move(next);
            int key = m.dir == Dir::forward ? s.max_key() : m.key;
            rep.lines.push_back(where + ": " + (dir == Dir::forward ? "fire " : std::string("reverse[") + to_string(sem) + "] ") +
                                tname + " k=" + std::to_string(key) + " -> " + marking_text(net, s) + " | " +
                                history_text(net, s));
        } catch (const Error& e) {
            if (expect_fail) {
                rep.lines.push_back(where + ": failed as expected (" + e.what() + ")");
                ++rep.steps_run;
                continue;
            }
            rep.ok = false;
            rep.error = where + ": " + e.what();
            break;
        } catch (const std::exception& e) {
            rep.ok = false;
            rep.error = where + ": " + e.what();
            break;
        }
        ++rep.steps_run;
        std::string diff;
        if (step.contains("expectMarking")) diff += compare_marking(net, s, step.at("expectMarking"), true);
        if (step.contains("expectPlaces")) diff += compare_marking(net, s, step.at("expectPlaces"), false);
        if (step.contains("expectHistory")) {
            json h = history_json(net, s);
            for (auto& [tn, keys] : step.at("expectHistory").items()) {
                json got = h.contains(tn) ? h.at(tn) : json::array();
                if (got != keys) diff += "history of " + tn + " is " + got.dump() + " expected " + keys.dump() + "; ";
            }
        }
        if (!diff.empty()) {
            rep.ok = false;
            rep.error = where + ": " + diff;
            break;
        }
    }
    rep.final_state = s;
    return rep;
}

}  // namespace rpn
