#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpn/net.hpp"
#include "rpn/state.hpp"

namespace rpn {

struct Cond {
    enum Kind { Not, Or, Gt, Lit, Var, PlaceRef, If, Add, Sub, Mul, Div };
    Kind kind = Lit;
    double value = 0;
    std::string name;   // variable or token instance
    std::string place;  // PlaceRef only
    std::vector<CondPtr> kids;

    bool is_bool() const { return kind == Not || kind == Or || kind == Gt; }
};

bool same_ast(const Cond& a, const Cond& b);

struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(const std::string& msg, size_t p)
        : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p) {}
};

// Sugar (<, <=, >=, ==, !=, and) is rewritten into not/or/>.
CondPtr parse_condition(const std::string& text);

// Fully parenthesised core syntax; parse(print(x)) rebuilds x.
std::string print(const Cond& c);

std::vector<std::string> free_vars(const Cond& c);
std::vector<std::pair<std::string, std::string>> place_refs(const Cond& c);

CondPtr mk_lit(double v);
CondPtr mk_var(const std::string& n);
CondPtr mk_ref(const std::string& tok, const std::string& place);
CondPtr mk_not(CondPtr a);
CondPtr mk_or(CondPtr a, CondPtr b);
CondPtr mk_gt(CondPtr a, CondPtr b);
CondPtr mk_bin(Cond::Kind k, CondPtr a, CondPtr b);
CondPtr mk_if(CondPtr c, CondPtr a, CondPtr b);

// V maps a condition variable to a token instance id (or -1).
struct EvalEnv {
    const Net* net = nullptr;
    const State* state = nullptr;
    std::function<int(const std::string&)> var;
};

double eval_expr(const Cond& e, const EvalEnv& env);
bool eval_condition(const Cond& c, const EvalEnv& env);

// Source text with variables and place references replaced by their values.
std::string substitute(const std::string& text, const EvalEnv& env);

std::string format_number(double v);

}  // namespace rpn
