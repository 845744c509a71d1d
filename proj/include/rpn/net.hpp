#pragma once

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace rpn {

struct Cond;
using CondPtr = std::shared_ptr<const Cond>;

enum class Mode { ground, variable };
enum class Interp { individual, collective };
enum class Semantics { bt, causal, oco, coll };

const char* to_string(Mode m);
const char* to_string(Interp i);
const char* to_string(Semantics s);
Mode parse_mode(const std::string& s);
Interp parse_interp(const std::string& s);
Semantics parse_semantics(const std::string& s);

// Canonical undirected bond: a < b.
struct Bond {
    int a = 0;
    int b = 0;
    auto operator<=>(const Bond&) const = default;
};

inline Bond make_bond(int x, int y) { return x < y ? Bond{x, y} : Bond{y, x}; }

struct TokenType {
    std::string name;
    std::string data_type;
};

struct Token {
    std::string type;
    int index = 1;
    std::string name;
    double value = 0;
    bool has_value = false;
};

// A transition-local variable. In ground mode every variable is fixed to one token.
struct Var {
    std::string name;
    int type = -1;
    int fixed = -1;
};

using VarPair = std::pair<int, int>;

struct Arc {
    int place = -1;
    std::vector<int> vars;
    std::vector<VarPair> bonds;
    std::vector<int> neg_tokens;
    std::vector<Bond> neg_bonds;
};

struct Transition {
    std::string name;
    std::vector<Var> vars;  // sorted by name
    std::vector<Arc> in;
    std::vector<Arc> out;
    std::string fwd_text;
    std::string rev_text;
    CondPtr fwd;
    CondPtr rev;
    bool rev_is_neg = false;

    // derived by Net::finalize
    std::vector<int> in_place;   // per var, -1 if not on an incoming arc
    std::vector<int> out_place;  // per var, -1 if not on an outgoing arc
    std::vector<int> guard_vars;
    std::vector<int> effect_vars;
    std::vector<int> cond_vars;  // condition variables absent from arcs
    std::vector<VarPair> pre_bonds;   // canonical (lo, hi) var pairs
    std::vector<VarPair> post_bonds;
    std::vector<VarPair> broken;      // pre - post
    std::vector<VarPair> created;     // post - pre

    int var_id(const std::string& n) const;
};

struct Net {
    std::string name;
    Mode mode = Mode::variable;
    Interp interp = Interp::individual;
    Semantics semantics = Semantics::causal;
    bool bond_destruction = true;
    double absent_value = 0;
    std::vector<TokenType> types;
    std::vector<Token> tokens;        // sorted by (type, index)
    std::vector<std::string> places;  // sorted
    std::vector<Transition> transitions;  // sorted by name
    std::vector<int> init_place;      // per token
    std::vector<Bond> init_bonds;     // sorted

    int place_id(const std::string& n) const;
    int token_id(const std::string& n) const;
    int transition_id(const std::string& n) const;
    int type_id(const std::string& n) const;
    int token_type(int tok) const { return type_id(tokens[tok].type); }

    // Recompute derived transition data. Call after any structural edit.
    void finalize();

    std::map<std::string, int> place_ix, token_ix, trans_ix, type_ix;
};

// Well-formedness. Each entry starts with a short tag such as "cloning".
std::vector<std::string> validate_net(const Net& net);

}  // namespace rpn
