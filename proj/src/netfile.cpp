#include "rpn/netfile.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rpn/condition.hpp"
#include "rpn/control.hpp"

namespace rpn {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string r;
    for (const auto& s : v) r += (r.empty() ? "" : "\n") + s;
    return r;
}

}  // namespace

LoadError::LoadError(std::vector<std::string> p) : std::runtime_error(join(p)), problems(std::move(p)) {}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError({path + ": cannot open file"});
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw LoadError({path + ": " + e.what()});
    }
}

namespace {

struct RawArc {
    std::string place;
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> bonds;
    std::vector<std::string> neg_tokens;
    std::vector<std::pair<std::string, std::string>> neg_bonds;
};

std::vector<std::string> str_list(const json& j) {
    std::vector<std::string> r;
    if (j.is_array())
        for (const auto& x : j) r.push_back(x.get<std::string>());
    return r;
}

std::vector<std::pair<std::string, std::string>> pair_list(const json& j) {
    std::vector<std::pair<std::string, std::string>> r;
    if (!j.is_array()) return r;
    for (const auto& x : j) {
        if (x.is_array() && x.size() == 2)
            r.emplace_back(x[0].get<std::string>(), x[1].get<std::string>());
        else if (x.is_string()) {
            // "a-b" shorthand
            auto s = x.get<std::string>();
            auto dash = s.find('-');
            if (dash == std::string::npos) throw std::invalid_argument("bond '" + s + "' is not a pair");
            r.emplace_back(s.substr(0, dash), s.substr(dash + 1));
        } else {
            throw std::invalid_argument("bond entry must be a pair");
        }
    }
    return r;
}

RawArc raw_arc(const json& a) {
    RawArc r;
    r.place = a.at("place").get<std::string>();
    auto names = str_list(a.value("vars", json::array()));
    auto toks = str_list(a.value("tokens", json::array()));
    r.names = names;
    r.names.insert(r.names.end(), toks.begin(), toks.end());
    r.bonds = pair_list(a.value("bonds", json::array()));
    r.neg_tokens = str_list(a.value("negTokens", json::array()));
    r.neg_bonds = pair_list(a.value("negBonds", json::array()));
    return r;
}

}  // namespace

Net build_net(const json& doc, std::vector<std::string>& problems) {
    Net net;
    auto bad = [&](const std::string& s) { problems.push_back(s); };
    net.name = doc.value("name", "");
    net.mode = parse_mode(doc.value("mode", "variable"));
    net.interp = parse_interp(doc.value("interpretation", "individual"));
    net.semantics = parse_semantics(doc.value("semantics", net.interp == Interp::collective ? "coll" : "causal"));
    net.bond_destruction = doc.value("bondDestruction", true);
    net.absent_value = doc.value("absentValue", 0.0);

    std::set<std::string> type_names;
    for (const auto& t : doc.value("tokenTypes", json::array())) {
        TokenType tt;
        if (t.is_string()) {
            tt.name = t.get<std::string>();
        } else {
            tt.name = t.at("name").get<std::string>();
            tt.data_type = t.value("dataType", "");
        }
        if (!type_names.insert(tt.name).second) bad("/tokenTypes: duplicate type " + tt.name);
        net.types.push_back(tt);
    }

    // token instances
    std::map<std::string, int> next_index;
    auto add_token = [&](Token tok, const std::string& where) {
        if (tok.type.empty()) tok.type = tok.name;
        if (!type_names.count(tok.type)) {
            if (net.mode == Mode::ground) {
                type_names.insert(tok.type);
                net.types.push_back({tok.type, ""});
            } else {
                bad(where + ": undeclared token type " + tok.type);
            }
        }
        if (tok.index <= 0) tok.index = ++next_index[tok.type];
        else next_index[tok.type] = std::max(next_index[tok.type], tok.index);
        if (tok.name.empty()) tok.name = tok.type + std::to_string(tok.index);
        net.tokens.push_back(tok);
    };
    const char* inst_key = doc.contains("instances") ? "instances" : "tokens";
    int ix = 0;
    for (const auto& j : doc.value(inst_key, json::array())) {
        std::string where = std::string("/") + inst_key + "/" + std::to_string(ix++);
        Token tok;
        tok.index = 0;
        if (j.is_string()) {
            tok.name = j.get<std::string>();
        } else {
            tok.name = j.value("name", "");
            tok.type = j.value("type", "");
            tok.index = j.value("index", 0);
            if (j.contains("value")) {
                tok.value = j.at("value").get<double>();
                tok.has_value = true;
            }
        }
        if (tok.name.empty() && tok.type.empty()) {
            bad(where + ": instance needs a name or a type");
            continue;
        }
        add_token(tok, where);
    }
    std::sort(net.types.begin(), net.types.end(), [](const TokenType& a, const TokenType& b) { return a.name < b.name; });
    std::sort(net.tokens.begin(), net.tokens.end(), [](const Token& a, const Token& b) {
        return a.type != b.type ? a.type < b.type : a.index < b.index;
    });
    for (size_t i = 1; i < net.tokens.size(); ++i)
        if (net.tokens[i].type == net.tokens[i - 1].type && net.tokens[i].index == net.tokens[i - 1].index)
            bad("/" + std::string(inst_key) + ": duplicate instance " + net.tokens[i].type + "," +
                std::to_string(net.tokens[i].index));

    net.places = str_list(doc.value("places", json::array()));
    std::sort(net.places.begin(), net.places.end());
    for (size_t i = 1; i < net.places.size(); ++i)
        if (net.places[i] == net.places[i - 1]) bad("/places: duplicate place " + net.places[i]);

    std::vector<json> tdocs;
    for (const auto& t : doc.value("transitions", json::array())) tdocs.push_back(t);
    std::sort(tdocs.begin(), tdocs.end(),
              [](const json& a, const json& b) { return a.value("name", "") < b.value("name", ""); });
    net.finalize();  // lookups for places/tokens/types

    for (size_t ti = 0; ti < tdocs.size(); ++ti) {
        const json& tj = tdocs[ti];
        Transition tr;
        tr.name = tj.value("name", "");
        std::string where = "/transitions/" + tr.name;
        if (tr.name.empty()) bad("/transitions: transition without a name");
        std::vector<RawArc> ins, outs;
        try {
            for (const auto& a : tj.value("in", json::array())) ins.push_back(raw_arc(a));
            for (const auto& a : tj.value("out", json::array())) outs.push_back(raw_arc(a));
        } catch (const std::exception& e) {
            bad(where + ": " + e.what());
            continue;
        }

        // variables: name -> (type, fixed token)
        std::map<std::string, std::pair<int, int>> vars;
        std::map<std::string, std::string> alias;  // token name -> variable name (ground)
        const json variables_j = tj.value("variables", json::object());
        for (auto& [vn, ty] : variables_j.items()) {
            int id = net.type_id(ty.get<std::string>());
            if (id < 0) bad(where + "/variables/" + vn + ": unknown type " + ty.get<std::string>());
            vars[vn] = {id, -1};
        }
        const json bind_j = tj.value("bind", json::object());
        for (auto& [vn, tok] : bind_j.items()) {
            int id = net.token_id(tok.get<std::string>());
            if (id < 0) {
                bad(where + "/bind/" + vn + ": unknown token " + tok.get<std::string>());
                continue;
            }
            vars[vn] = {net.token_type(id), id};
            alias[tok.get<std::string>()] = vn;
        }
        auto resolve = [&](const std::string& n, const std::string& at) -> std::string {
            if (net.mode == Mode::ground) {
                auto it = alias.find(n);
                if (it != alias.end()) return it->second;
                if (vars.count(n) && vars[n].second >= 0) return n;
                int id = net.token_id(n);
                if (id < 0) {
                    bad(at + ": unknown token " + n);
                    return "";
                }
                vars[n] = {net.token_type(id), id};
                return n;
            }
            if (!vars.count(n)) {
                bad(at + ": undeclared variable " + n);
                return "";
            }
            return n;
        };
        auto scan = [&](std::vector<RawArc>& arcs, const char* dir) {
            for (auto& a : arcs) {
                std::string at = where + "/" + dir + "/" + a.place;
                if (net.place_id(a.place) < 0) bad(at + ": unknown place");
                for (auto& n : a.names) n = resolve(n, at);
                for (auto& [x, y] : a.bonds) {
                    x = resolve(x, at);
                    y = resolve(y, at);
                }
            }
        };
        scan(ins, "in");
        scan(outs, "out");

        for (auto& [vn, info] : vars) tr.vars.push_back(Var{vn, info.first, info.second});  // map order = name order
        auto vid = [&](const std::string& n) { return tr.var_id(n); };
        auto build = [&](const std::vector<RawArc>& raws, std::vector<Arc>& arcs, const char* dir) {
            std::map<int, size_t> by_place;
            for (const auto& ra : raws) {
                int p = net.place_id(ra.place);
                if (p < 0) continue;
                if (by_place.count(p)) {
                    bad(where + "/" + dir + "/" + ra.place + ": two arcs for one place");
                    continue;
                }
                by_place[p] = arcs.size();
                Arc a;
                a.place = p;
                for (const auto& n : ra.names)
                    if (vid(n) >= 0 && std::find(a.vars.begin(), a.vars.end(), vid(n)) == a.vars.end())
                        a.vars.push_back(vid(n));
                std::sort(a.vars.begin(), a.vars.end());
                for (const auto& [x, y] : ra.bonds)
                    if (vid(x) >= 0 && vid(y) >= 0) {
                        // bond variables implicitly appear on the arc in ground files
                        if (net.mode == Mode::ground) {
                            for (int v : {vid(x), vid(y)})
                                if (std::find(a.vars.begin(), a.vars.end(), v) == a.vars.end()) a.vars.push_back(v);
                            std::sort(a.vars.begin(), a.vars.end());
                        }
                        a.bonds.emplace_back(vid(x), vid(y));
                    }
                for (const auto& n : ra.neg_tokens) {
                    int id = net.token_id(n);
                    if (id < 0) bad(where + "/" + dir + "/" + ra.place + ": unknown negative token " + n);
                    else a.neg_tokens.push_back(id);
                }
                for (const auto& [x, y] : ra.neg_bonds) {
                    int ia = net.token_id(x), ib = net.token_id(y);
                    if (ia < 0 || ib < 0) bad(where + "/" + dir + "/" + ra.place + ": unknown negative bond");
                    else a.neg_bonds.push_back(make_bond(ia, ib));
                }
                arcs.push_back(std::move(a));
            }
            std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.place < y.place; });
        };
        build(ins, tr.in, "in");
        build(outs, tr.out, "out");

        auto parse = [&](const char* key, std::string& text, CondPtr& c) {
            if (!tj.contains(key) || tj.at(key).is_null()) return;
            text = tj.at(key).get<std::string>();
            try {
                c = parse_condition(text);
            } catch (const ParseError& e) {
                bad(where + "/" + key + ": " + e.what());
            }
        };
        parse("forwardCondition", tr.fwd_text, tr.fwd);
        parse("reverseCondition", tr.rev_text, tr.rev);
        tr.rev_is_neg = tj.value("reverseIsNegation", false);
        net.transitions.push_back(std::move(tr));
    }

    // initial marking
    net.init_place.assign(net.tokens.size(), -1);
    const json initialMarking_j = doc.value("initialMarking", json::object());
    for (auto& [pn, pj] : initialMarking_j.items()) {
        std::string where = "/initialMarking/" + pn;
        int p = net.place_id(pn);
        if (p < 0) {
            bad(where + ": unknown place");
            continue;
        }
        std::vector<std::string> toks;
        std::vector<std::pair<std::string, std::string>> bonds;
        try {
            if (pj.is_array()) {
                toks = str_list(pj);
            } else {
                toks = str_list(pj.value("tokens", json::array()));
                bonds = pair_list(pj.value("bonds", json::array()));
            }
        } catch (const std::exception& e) {
            bad(where + ": " + e.what());
            continue;
        }
        for (const auto& tn : toks) {
            int id = net.token_id(tn);
            if (id < 0) bad(where + ": unknown token " + tn);
            else if (net.init_place[id] >= 0) bad(where + ": token " + tn + " already placed");
            else net.init_place[id] = p;
        }
        for (const auto& [x, y] : bonds) {
            int ia = net.token_id(x), ib = net.token_id(y);
            if (ia < 0 || ib < 0) bad(where + ": unknown bond endpoint");
            else net.init_bonds.push_back(make_bond(ia, ib));
        }
    }
    net.finalize();
    return net;
}

Net load_net_json(const json& doc) {
    std::vector<std::string> problems;
    Net net;
    try {
        net = build_net(doc, problems);
    } catch (const std::exception& e) {
        throw LoadError({std::string("invalid net file: ") + e.what()});
    }
    if (!problems.empty()) throw LoadError(problems);
    auto v = validate_net(net);
    auto c = check_conditions(net);
    v.insert(v.end(), c.begin(), c.end());
    if (!v.empty()) throw LoadError(v);
    return net;
}

Net load_net(const std::string& path) {
    auto doc = read_json_file(path);
    try {
        return load_net_json(doc);
    } catch (LoadError& e) {
        std::vector<std::string> p;
        for (const auto& s : e.problems) p.push_back(path + ": " + s);
        throw LoadError(p);
    }
}

json save_net(const Net& net) {
    json d;
    d["name"] = net.name;
    d["mode"] = to_string(net.mode);
    d["interpretation"] = to_string(net.interp);
    d["semantics"] = to_string(net.semantics);
    d["bondDestruction"] = net.bond_destruction;
    if (net.absent_value != 0) d["absentValue"] = net.absent_value;
    json types = json::array();
    for (const auto& t : net.types) {
        json tj{{"name", t.name}};
        if (!t.data_type.empty()) tj["dataType"] = t.data_type;
        types.push_back(tj);
    }
    d["tokenTypes"] = types;
    json toks = json::array();
    for (const auto& t : net.tokens) {
        json tj{{"name", t.name}, {"type", t.type}, {"index", t.index}};
        if (t.has_value) tj["value"] = t.value;
        toks.push_back(tj);
    }
    d[net.mode == Mode::ground ? "tokens" : "instances"] = toks;
    d["places"] = net.places;
    json trs = json::array();
    for (const auto& tr : net.transitions) {
        json tj;
        tj["name"] = tr.name;
        json vars = json::object(), bind = json::object();
        for (const auto& v : tr.vars) {
            if (v.fixed >= 0) {
                if (v.name != net.tokens[v.fixed].name) bind[v.name] = net.tokens[v.fixed].name;
            } else {
                vars[v.name] = net.types[v.type].name;
            }
        }
        if (!vars.empty()) tj["variables"] = vars;
        if (!bind.empty()) tj["bind"] = bind;
        auto arcs = [&](const std::vector<Arc>& as) {
            json r = json::array();
            for (const auto& a : as) {
                json aj;
                aj["place"] = net.places[a.place];
                json names = json::array();
                for (int v : a.vars) names.push_back(tr.vars[v].name);
                aj[net.mode == Mode::ground ? "tokens" : "vars"] = names;
                if (!a.bonds.empty()) {
                    json bs = json::array();
                    for (auto [u, v] : a.bonds) bs.push_back({tr.vars[u].name, tr.vars[v].name});
                    aj["bonds"] = bs;
                }
                if (!a.neg_tokens.empty()) {
                    json ns = json::array();
                    for (int t : a.neg_tokens) ns.push_back(net.tokens[t].name);
                    aj["negTokens"] = ns;
                }
                if (!a.neg_bonds.empty()) {
                    json ns = json::array();
                    for (auto b : a.neg_bonds) ns.push_back({net.tokens[b.a].name, net.tokens[b.b].name});
                    aj["negBonds"] = ns;
                }
                r.push_back(aj);
            }
            return r;
        };
        tj["in"] = arcs(tr.in);
        tj["out"] = arcs(tr.out);
        if (tr.fwd) tj["forwardCondition"] = tr.fwd_text;
        if (tr.rev) tj["reverseCondition"] = tr.rev_text;
        if (tr.rev_is_neg) tj["reverseIsNegation"] = true;
        trs.push_back(tj);
    }
    d["transitions"] = trs;
    d["initialMarking"] = marking_json(net, initial_state(net));
    return d;
}

json marking_json(const Net& net, const State& s) {
    json m = json::object();
    for (size_t p = 0; p < net.places.size(); ++p) {
        auto toks = s.tokens_in(static_cast<int>(p));
        if (toks.empty()) continue;
        json tj = json::array(), bj = json::array();
        for (int t : toks) tj.push_back(net.tokens[t].name);
        for (auto b : s.bonds)
            if (s.place[b.a] == static_cast<int>(p)) bj.push_back({net.tokens[b.a].name, net.tokens[b.b].name});
        json pj{{"tokens", tj}};
        if (!bj.empty()) pj["bonds"] = bj;
        m[net.places[p]] = pj;
    }
    return m;
}

json history_json(const Net& net, const State& s) {
    json h = json::object();
    for (const auto& o : s.live) h[net.transitions[o.t].name].push_back(o.key);
    return h;
}

json state_json(const Net& net, const State& s) {
    json j;
    j["marking"] = marking_json(net, s);
    j["history"] = history_json(net, s);
    bool any_mem = false;
    json mem = json::object();
    for (size_t t = 0; t < s.mem.size(); ++t) {
        if (s.mem[t].empty()) continue;
        any_mem = true;
        json recs = json::array();
        for (auto r : s.mem[t]) {
            std::string var = "*";
            if (r.var >= 0)
                if (const Occ* o = s.find(r.key)) var = net.transitions[o->t].vars[r.var].name;
            recs.push_back({r.key, var});
        }
        mem[net.tokens[t].name] = recs;
    }
    if (any_mem) j["memory"] = mem;
    if (!s.prec.empty()) {
        json pr = json::array();
        for (auto [a, b] : s.prec) pr.push_back({a, b});
        j["prec"] = pr;
    }
    return j;
}

}  // namespace rpn
