#include "support.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rpn/control.hpp"
#include "rpn/netfile.hpp"

namespace rpntest {

using namespace rpn;

std::string nets_dir() { return RPN_NETS_DIR; }

Net bundled(const std::string& name) { return load_net(nets_dir() + "/" + name + ".rpn.json"); }

json bundled_json(const std::string& file) { return read_json_file(nets_dir() + "/" + file); }

int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

namespace {

std::string bond(const std::string& a, const std::string& b) { return a + "-" + b; }

// Arcs for one transition: names grouped by in-place, one or two out-places.
struct Shape {
    std::map<int, std::vector<std::string>> in;
    std::map<int, std::vector<std::string>> in_bonds;
    std::map<int, std::vector<std::string>> out;
    std::map<int, std::vector<std::string>> out_bonds;
};

Shape random_shape(Rng& rng, const std::vector<std::string>& names, int nplaces, bool may_break) {
    Shape s;
    for (const auto& n : names) s.in[pick(rng, nplaces)].push_back(n);
    std::vector<std::pair<std::string, std::string>> kept;
    for (auto& [p, ns] : s.in)
        if (ns.size() >= 2 && coin(rng, 0.25)) {
            auto a = ns[0], b = ns[1];
            s.in_bonds[p].push_back(bond(a, b));
            if (!may_break || coin(rng, 0.6)) kept.emplace_back(a, b);
        }
    std::vector<std::pair<std::string, std::string>> made;
    for (size_t i = 0; i < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j)
            if (coin(rng, 0.35)) made.emplace_back(names[i], names[j]);
    bool linked = !kept.empty() || !made.empty();
    int o1 = pick(rng, nplaces);
    if (!linked && names.size() >= 2 && coin(rng, 0.3)) {
        int o2 = pick(rng, nplaces);
        for (size_t i = 0; i < names.size(); ++i) s.out[i % 2 ? o2 : o1].push_back(names[i]);
    } else {
        s.out[o1] = names;
    }
    for (auto& [a, b] : kept) s.out_bonds[o1].push_back(bond(a, b));
    for (auto& [a, b] : made) {
        auto bd = bond(a, b);
        auto& v = s.out_bonds[o1];
        if (std::find(v.begin(), v.end(), bd) == v.end() && std::find(v.begin(), v.end(), bond(b, a)) == v.end())
            v.push_back(bd);
    }
    return s;
}

json arcs(const std::map<int, std::vector<std::string>>& names, const std::map<int, std::vector<std::string>>& bonds,
          const char* key) {
    json r = json::array();
    for (const auto& [p, ns] : names) {
        json a{{"place", "p" + std::to_string(p)}, {key, ns}};
        auto it = bonds.find(p);
        if (it != bonds.end() && !it->second.empty()) a["bonds"] = it->second;
        r.push_back(a);
    }
    return r;
}

json places_json(int n) {
    json p = json::array();
    for (int i = 0; i < n; ++i) p.push_back("p" + std::to_string(i));
    return p;
}

}  // namespace

json random_ground_doc(Rng& rng, const GroundShape& g) {
    json d;
    d["name"] = "random-ground";
    d["mode"] = "ground";
    d["semantics"] = "causal";
    std::vector<std::string> toks;
    for (int i = 0; i < g.tokens; ++i) toks.push_back(std::string(1, static_cast<char>('a' + i)));
    d["tokens"] = toks;
    d["places"] = places_json(g.places);
    json trs = json::array();
    for (int t = 0; t < g.transitions; ++t) {
        std::vector<std::string> pool = toks;
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(1 + pick(rng, std::min(3, g.tokens)));
        auto s = random_shape(rng, pool, g.places, false);
        trs.push_back({{"name", "t" + std::to_string(t + 1)},
                       {"in", arcs(s.in, s.in_bonds, "tokens")},
                       {"out", arcs(s.out, s.out_bonds, "tokens")}});
    }
    d["transitions"] = trs;
    json m = json::object();
    for (const auto& tk : toks) m["p" + std::to_string(pick(rng, g.places))].push_back(tk);
    d["initialMarking"] = m;
    return d;
}

json random_variable_doc(Rng& rng, const VarShape& v) {
    json d;
    d["name"] = "random-variable";
    d["mode"] = "variable";
    d["interpretation"] = v.collective ? "collective" : "individual";
    d["semantics"] = v.collective ? "coll" : "causal";
    std::vector<std::string> types;
    json tt = json::array(), inst = json::array();
    for (int i = 0; i < v.types; ++i) {
        types.push_back(std::string(1, static_cast<char>('a' + i)));
        if (v.conditions) tt.push_back({{"name", types.back()}, {"dataType", "number"}});
        else tt.push_back(types.back());
    }
    d["tokenTypes"] = tt;
    std::vector<std::string> names;
    for (const auto& ty : types) {
        int n = 1 + pick(rng, v.max_per_type);
        for (int i = 1; i <= n; ++i) {
            json j{{"name", ty + std::to_string(i)}, {"type", ty}};
            if (v.conditions) j["value"] = pick(rng, 5);
            inst.push_back(j);
            names.push_back(ty + std::to_string(i));
        }
    }
    d["instances"] = inst;
    d["places"] = places_json(v.places);
    static const char* var_names[] = {"u", "v", "w", "x"};
    json trs = json::array();
    for (int t = 0; t < v.transitions; ++t) {
        int nv = 1 + pick(rng, v.max_vars);
        std::vector<std::string> vs;
        json vars = json::object();
        for (int i = 0; i < nv; ++i) {
            vs.push_back(var_names[i]);
            vars[var_names[i]] = types[pick(rng, v.types)];
        }
        auto s = random_shape(rng, vs, v.places, true);
        json tj{{"name", "t" + std::to_string(t + 1)},
                {"variables", vars},
                {"in", arcs(s.in, s.in_bonds, "vars")},
                {"out", arcs(s.out, s.out_bonds, "vars")}};
        if (v.conditions) {
            static const char* ops[] = {">", "<", ">=", "<=", "==", "!="};
            if (coin(rng, 0.5))
                tj["forwardCondition"] = std::string("u ") + ops[pick(rng, 6)] + " " + std::to_string(pick(rng, 5));
            if (coin(rng, 0.3)) tj["reverseIsNegation"] = true;
            else if (coin(rng, 0.5))
                tj["reverseCondition"] = std::string("u ") + ops[pick(rng, 6)] + " " + std::to_string(pick(rng, 5));
        }
        trs.push_back(tj);
    }
    d["transitions"] = trs;
    json m = json::object();
    for (const auto& n : names) m["p" + std::to_string(pick(rng, v.places))].push_back(n);
    d["initialMarking"] = m;
    return d;
}

Net random_ground_net(Rng& rng, const GroundShape& shape) {
    for (;;) {
        try {
            return load_net_json(random_ground_doc(rng, shape));
        } catch (const LoadError&) {
        }
    }
}

Net random_variable_net(Rng& rng, const VarShape& shape) {
    for (;;) {
        try {
            return load_net_json(random_variable_doc(rng, shape));
        } catch (const LoadError&) {
        }
    }
}

State random_walk(const Engine& eng, const State& from, Semantics sem, Rng& rng, int steps, double fwd_bias) {
    State s = from;
    for (int i = 0; i < steps; ++i) {
        bool fwd = coin(rng, fwd_bias);
        auto ms = controlled_moves(eng, s, sem, fwd, !fwd);
        if (ms.empty()) ms = controlled_moves(eng, s, sem, !fwd, fwd);
        if (ms.empty()) break;
        try {
            s = eng.apply(s, ms[pick(rng, static_cast<int>(ms.size()))]);
        } catch (const Error&) {
        }
    }
    return s;
}

}  // namespace rpntest
