#include "rpn/net.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rpn {

const char* to_string(Mode m) { return m == Mode::ground ? "ground" : "variable"; }

const char* to_string(Interp i) { return i == Interp::individual ? "individual" : "collective"; }

const char* to_string(Semantics s) {
    switch (s) {
    case Semantics::bt: return "bt";
    case Semantics::causal: return "causal";
    case Semantics::oco: return "oco";
    case Semantics::coll: return "coll";
    }
    return "?";
}

Mode parse_mode(const std::string& s) {
    if (s == "ground") return Mode::ground;
    if (s == "variable") return Mode::variable;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

Interp parse_interp(const std::string& s) {
    if (s == "individual") return Interp::individual;
    if (s == "collective") return Interp::collective;
    throw std::invalid_argument("unknown interpretation '" + s + "'");
}

Semantics parse_semantics(const std::string& s) {
    if (s == "bt" || s == "backtrack") return Semantics::bt;
    if (s == "causal" || s == "c") return Semantics::causal;
    if (s == "oco" || s == "o") return Semantics::oco;
    if (s == "coll" || s == "collective") return Semantics::coll;
    throw std::invalid_argument("unknown semantics '" + s + "'");
}

int Transition::var_id(const std::string& n) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == n) return static_cast<int>(i);
    return -1;
}

namespace {

int lookup(const std::map<std::string, int>& m, const std::string& n) {
    auto it = m.find(n);
    return it == m.end() ? -1 : it->second;
}

VarPair canon(VarPair p) { return p.first < p.second ? p : VarPair{p.second, p.first}; }

}  // namespace

int Net::place_id(const std::string& n) const { return lookup(place_ix, n); }
int Net::token_id(const std::string& n) const { return lookup(token_ix, n); }
int Net::transition_id(const std::string& n) const { return lookup(trans_ix, n); }
int Net::type_id(const std::string& n) const { return lookup(type_ix, n); }

void Net::finalize() {
    place_ix.clear();
    token_ix.clear();
    trans_ix.clear();
    type_ix.clear();
    for (size_t i = 0; i < places.size(); ++i) place_ix[places[i]] = static_cast<int>(i);
    for (size_t i = 0; i < tokens.size(); ++i) token_ix[tokens[i].name] = static_cast<int>(i);
    for (size_t i = 0; i < transitions.size(); ++i) trans_ix[transitions[i].name] = static_cast<int>(i);
    for (size_t i = 0; i < types.size(); ++i) type_ix[types[i].name] = static_cast<int>(i);
    std::sort(init_bonds.begin(), init_bonds.end());

    for (auto& t : transitions) {
        size_t nv = t.vars.size();
        t.in_place.assign(nv, -1);
        t.out_place.assign(nv, -1);
        std::set<VarPair> pre, post;
        for (auto& a : t.in) {
            for (int v : a.vars) t.in_place[v] = a.place;
            for (auto p : a.bonds) pre.insert(canon(p));
        }
        for (auto& a : t.out) {
            for (int v : a.vars) t.out_place[v] = a.place;
            for (auto p : a.bonds) post.insert(canon(p));
        }
        t.guard_vars.clear();
        t.effect_vars.clear();
        t.cond_vars.clear();
        for (size_t v = 0; v < nv; ++v) {
            if (t.in_place[v] >= 0) t.guard_vars.push_back(static_cast<int>(v));
            if (t.out_place[v] >= 0) t.effect_vars.push_back(static_cast<int>(v));
            if (t.in_place[v] < 0 && t.out_place[v] < 0) t.cond_vars.push_back(static_cast<int>(v));
        }
        t.pre_bonds.assign(pre.begin(), pre.end());
        t.post_bonds.assign(post.begin(), post.end());
        t.broken.clear();
        t.created.clear();
        std::set_difference(pre.begin(), pre.end(), post.begin(), post.end(), std::back_inserter(t.broken));
        std::set_difference(post.begin(), post.end(), pre.begin(), pre.end(), std::back_inserter(t.created));
    }
}

std::vector<std::string> validate_net(const Net& net) {
    std::vector<std::string> out;
    auto bad = [&](const std::string& s) { out.push_back(s); };

    for (const auto& t : net.transitions) {
        const std::string where = "transition " + t.name + ": ";
        std::vector<int> in_count(t.vars.size(), 0), out_count(t.vars.size(), 0);
        for (const auto& v : t.vars) {
            if (v.type < 0 || v.type >= static_cast<int>(net.types.size()))
                bad("type: " + where + "variable " + v.name + " has no declared type");
            if (v.fixed >= 0 && net.token_type(v.fixed) != v.type)
                bad("type: " + where + "variable " + v.name + " fixed to a token of another type");
        }
        auto check_arc = [&](const Arc& a, bool incoming, std::vector<int>& count) {
            std::set<int> here(a.vars.begin(), a.vars.end());
            for (int v : a.vars) ++count[v];
            for (auto [u, v] : a.bonds) {
                if (!here.count(u) || !here.count(v))
                    bad("bond variable: " + where + "bond on arc at " + net.places[a.place] +
                        " uses a variable missing from that arc");
                if (u == v) bad("bond variable: " + where + "bond from a variable to itself");
            }
            if (!a.neg_tokens.empty() || !a.neg_bonds.empty()) {
                if (!incoming) bad("negative: " + where + "negative label on an outgoing arc");
                if (net.mode != Mode::ground)
                    bad("negative: " + where + "negative labels are only supported for ground nets");
            }
        };
        for (const auto& a : t.in) check_arc(a, true, in_count);
        for (const auto& a : t.out) check_arc(a, false, out_count);
        for (size_t v = 0; v < t.vars.size(); ++v) {
            const std::string& vn = t.vars[v].name;
            if (in_count[v] > 1) bad("duplicate variable: " + where + vn + " appears on two incoming arcs");
            if (out_count[v] > 1) bad("cloning: " + where + vn + " appears on arcs to two different places");
            if (in_count[v] && !out_count[v]) bad("token erasure: " + where + vn + " is consumed but never emitted");
            if (!in_count[v] && out_count[v]) bad("token creation: " + where + vn + " is emitted but never consumed");
        }
        if (net.mode == Mode::ground) {
            std::map<int, int> seen;
            for (const auto& v : t.vars)
                if (v.fixed >= 0 && ++seen[v.fixed] > 1)
                    bad("duplicate token: " + where + net.tokens[v.fixed].name + " bound by two variables");
            if (!net.bond_destruction && !t.broken.empty())
                bad("bond preservation: " + where + "breaks a bond while bond destruction is disabled");
        }
    }

    if (net.init_place.size() != net.tokens.size()) {
        bad("initial marking: token placement incomplete");
    } else {
        for (size_t i = 0; i < net.tokens.size(); ++i)
            if (net.init_place[i] < 0 || net.init_place[i] >= static_cast<int>(net.places.size()))
                bad("initial marking: token " + net.tokens[i].name + " is not in exactly one place");
        std::set<Bond> seen;
        for (auto b : net.init_bonds) {
            if (b.a == b.b) {
                bad("initial marking: bond endpoints must differ");
                continue;
            }
            if (!seen.insert(b).second) bad("initial marking: duplicate bond");
            if (net.init_place[b.a] != net.init_place[b.b])
                bad("initial marking: bond " + net.tokens[b.a].name + "-" + net.tokens[b.b].name +
                    " spans two places");
        }
    }
    for (const auto& tok : net.tokens) {
        int ty = net.type_id(tok.type);
        if (ty < 0) {
            bad("type: token " + tok.name + " has undeclared type " + tok.type);
            continue;
        }
        if (!net.types[ty].data_type.empty() && !tok.has_value)
            bad("data value: token " + tok.name + " of data type " + net.types[ty].data_type + " has no value");
    }
    return out;
}

}  // namespace rpn
