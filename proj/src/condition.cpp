#include "rpn/condition.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "rpn/engine.hpp"

namespace rpn {

CondPtr mk_lit(double v) {
    auto c = std::make_shared<Cond>();
    c->kind = Cond::Lit;
    c->value = v;
    return c;
}

CondPtr mk_var(const std::string& n) {
    auto c = std::make_shared<Cond>();
    c->kind = Cond::Var;
    c->name = n;
    return c;
}

CondPtr mk_ref(const std::string& tok, const std::string& place) {
    auto c = std::make_shared<Cond>();
    c->kind = Cond::PlaceRef;
    c->name = tok;
    c->place = place;
    return c;
}

namespace {

CondPtr node(Cond::Kind k, std::vector<CondPtr> kids) {
    auto c = std::make_shared<Cond>();
    c->kind = k;
    c->kids = std::move(kids);
    return c;
}

}  // namespace

CondPtr mk_not(CondPtr a) { return node(Cond::Not, {std::move(a)}); }
CondPtr mk_or(CondPtr a, CondPtr b) { return node(Cond::Or, {std::move(a), std::move(b)}); }
CondPtr mk_gt(CondPtr a, CondPtr b) { return node(Cond::Gt, {std::move(a), std::move(b)}); }
CondPtr mk_bin(Cond::Kind k, CondPtr a, CondPtr b) { return node(k, {std::move(a), std::move(b)}); }
CondPtr mk_if(CondPtr c, CondPtr a, CondPtr b) { return node(Cond::If, {std::move(c), std::move(a), std::move(b)}); }

bool same_ast(const Cond& a, const Cond& b) {
    if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
    switch (a.kind) {
    case Cond::Lit:
        if (a.value != b.value) return false;
        break;
    case Cond::Var:
        if (a.name != b.name) return false;
        break;
    case Cond::PlaceRef:
        if (a.name != b.name || a.place != b.place) return false;
        break;
    default: break;
    }
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!same_ast(*a.kids[i], *b.kids[i])) return false;
    return true;
}

std::string format_number(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// ---- lexer --------------------------------------------------------------

namespace {

enum class Tk { Num, Ident, Ref, LParen, RParen, Not, Or, And, Gt, Lt, Ge, Le, Eq, Ne, Plus, Minus, Mul, Div, If, Then, Else, End };

struct Token {
    Tk kind;
    size_t pos;
    size_t len;
    double num = 0;
    std::string a, b;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    auto starts = [&](const char* lit) { return s.compare(i, std::char_traits<char>::length(lit), lit) == 0; };
    static const std::vector<std::pair<const char*, Tk>> symbols = {
        {"\xC2\xAC", Tk::Not},      {"\xE2\x88\xA8", Tk::Or},  {"\xE2\x88\xA7", Tk::And},
        {"\xE2\x89\xA5", Tk::Ge},   {"\xE2\x89\xA4", Tk::Le},  {"\xE2\x89\xA0", Tk::Ne},
        {"\xC3\x97", Tk::Mul},      {"\xC3\xB7", Tk::Div},     {"\xE2\x88\x92", Tk::Minus},
        {"||", Tk::Or},             {"&&", Tk::And},           {">=", Tk::Ge},
        {"<=", Tk::Le},             {"==", Tk::Eq},            {"!=", Tk::Ne},
        {"!", Tk::Not},             {">", Tk::Gt},             {"<", Tk::Lt},
        {"=", Tk::Eq},              {"(", Tk::LParen},         {")", Tk::RParen},
        {"+", Tk::Plus},            {"-", Tk::Minus},          {"*", Tk::Mul},
        {"/", Tk::Div},
    };
    while (i < s.size()) {
        unsigned char c = s[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        size_t start = i;
        if (std::isdigit(c) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            char* end = nullptr;
            double v = std::strtod(s.c_str() + i, &end);
            i = static_cast<size_t>(end - s.c_str());
            out.push_back({Tk::Num, start, i - start, v, {}, {}});
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            std::string id = s.substr(start, i - start);
            if (i + 1 < s.size() && s[i] == '.' &&
                (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '_')) {
                size_t p = ++i;
                while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
                out.push_back({Tk::Ref, start, i - start, 0, id, s.substr(p, i - p)});
                continue;
            }
            Tk k = Tk::Ident;
            if (id == "not") k = Tk::Not;
            else if (id == "or") k = Tk::Or;
            else if (id == "and") k = Tk::And;
            else if (id == "if") k = Tk::If;
            else if (id == "then") k = Tk::Then;
            else if (id == "else") k = Tk::Else;
            out.push_back({k, start, i - start, 0, id, {}});
            continue;
        }
        bool matched = false;
        for (const auto& [lit, k] : symbols)
            if (starts(lit)) {
                size_t n = std::char_traits<char>::length(lit);
                out.push_back({k, start, n, 0, {}, {}});
                i += n;
                matched = true;
                break;
            }
        if (!matched) throw ParseError("unexpected character", i);
    }
    out.push_back({Tk::End, s.size(), 0, 0, {}, {}});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    CondPtr top() {
        size_t save = i_;
        try {
            auto c = cond();
            expect(Tk::End, "end of input");
            return c;
        } catch (const ParseError& first) {
            i_ = save;
            try {
                auto e = expr();
                expect(Tk::End, "end of input");
                return e;
            } catch (const ParseError&) {
                throw first;
            }
        }
    }

private:
    std::vector<Token> t_;
    size_t i_ = 0;

    const Token& peek() const { return t_[i_]; }
    bool accept(Tk k) {
        if (peek().kind != k) return false;
        ++i_;
        return true;
    }
    void expect(Tk k, const char* what) {
        if (!accept(k)) throw ParseError(std::string("expected ") + what, peek().pos);
    }

    CondPtr cond() {
        auto l = conj();
        while (accept(Tk::Or)) l = mk_or(l, conj());
        return l;
    }

    CondPtr conj() {
        auto l = unary();
        while (accept(Tk::And)) {
            auto r = unary();
            l = mk_not(mk_or(mk_not(l), mk_not(r)));
        }
        return l;
    }

    CondPtr unary() {
        if (accept(Tk::Not)) return mk_not(unary());
        return atom();
    }

    CondPtr atom() {
        size_t save = i_;
        try {
            return comparison();
        } catch (const ParseError& first) {
            i_ = save;
            if (!accept(Tk::LParen)) throw;
            try {
                auto c = cond();
                expect(Tk::RParen, "')'");
                return c;
            } catch (const ParseError& second) {
                throw first.pos >= second.pos ? first : second;
            }
        }
    }

    CondPtr comparison() {
        auto a = expr();
        Tk op = peek().kind;
        switch (op) {
        case Tk::Gt: case Tk::Lt: case Tk::Ge: case Tk::Le: case Tk::Eq: case Tk::Ne: ++i_; break;
        default: throw ParseError("expected comparison operator", peek().pos);
        }
        auto b = expr();
        switch (op) {
        case Tk::Gt: return mk_gt(a, b);
        case Tk::Lt: return mk_gt(b, a);
        case Tk::Ge: return mk_not(mk_gt(b, a));
        case Tk::Le: return mk_not(mk_gt(a, b));
        case Tk::Eq: return mk_not(mk_or(mk_gt(a, b), mk_gt(b, a)));
        default: return mk_or(mk_gt(a, b), mk_gt(b, a));
        }
    }

    CondPtr expr() {
        auto l = term();
        for (;;) {
            if (accept(Tk::Plus)) l = mk_bin(Cond::Add, l, term());
            else if (accept(Tk::Minus)) l = mk_bin(Cond::Sub, l, term());
            else return l;
        }
    }

    CondPtr term() {
        auto l = factor();
        for (;;) {
            if (accept(Tk::Mul)) l = mk_bin(Cond::Mul, l, factor());
            else if (accept(Tk::Div)) l = mk_bin(Cond::Div, l, factor());
            else return l;
        }
    }

    CondPtr factor() {
        if (accept(Tk::Minus)) return mk_bin(Cond::Sub, mk_lit(0), factor());
        const Token& tk = peek();
        switch (tk.kind) {
        case Tk::Num: ++i_; return mk_lit(tk.num);
        case Tk::Ident: ++i_; return mk_var(tk.a);
        case Tk::Ref: ++i_; return mk_ref(tk.a, tk.b);
        case Tk::LParen: {
            ++i_;
            auto e = expr();
            expect(Tk::RParen, "')'");
            return e;
        }
        case Tk::If: {
            ++i_;
            auto c = cond();
            expect(Tk::Then, "'then'");
            auto a = expr();
            expect(Tk::Else, "'else'");
            auto b = expr();
            return mk_if(c, a, b);
        }
        default: throw ParseError("expected expression", tk.pos);
        }
    }
};

}  // namespace

CondPtr parse_condition(const std::string& text) { return Parser(lex(text)).top(); }

std::string print(const Cond& c) {
    switch (c.kind) {
    case Cond::Not: return "not (" + print(*c.kids[0]) + ")";
    case Cond::Or: return "(" + print(*c.kids[0]) + " or " + print(*c.kids[1]) + ")";
    case Cond::Gt: return "(" + print(*c.kids[0]) + " > " + print(*c.kids[1]) + ")";
    case Cond::Lit: return c.value < 0 ? "(0 - " + format_number(-c.value) + ")" : format_number(c.value);
    case Cond::Var: return c.name;
    case Cond::PlaceRef: return c.name + "." + c.place;
    case Cond::If:
        return "(if " + print(*c.kids[0]) + " then " + print(*c.kids[1]) + " else " + print(*c.kids[2]) + ")";
    case Cond::Add: return "(" + print(*c.kids[0]) + " + " + print(*c.kids[1]) + ")";
    case Cond::Sub: return "(" + print(*c.kids[0]) + " - " + print(*c.kids[1]) + ")";
    case Cond::Mul: return "(" + print(*c.kids[0]) + " * " + print(*c.kids[1]) + ")";
    case Cond::Div: return "(" + print(*c.kids[0]) + " / " + print(*c.kids[1]) + ")";
    }
    return "?";
}

namespace {

void collect(const Cond& c, std::set<std::string>& vars, std::set<std::pair<std::string, std::string>>& refs) {
    if (c.kind == Cond::Var) vars.insert(c.name);
    if (c.kind == Cond::PlaceRef) refs.insert({c.name, c.place});
    for (const auto& k : c.kids) collect(*k, vars, refs);
}

}  // namespace

std::vector<std::string> free_vars(const Cond& c) {
    std::set<std::string> v;
    std::set<std::pair<std::string, std::string>> r;
    collect(c, v, r);
    return {v.begin(), v.end()};
}

std::vector<std::pair<std::string, std::string>> place_refs(const Cond& c) {
    std::set<std::string> v;
    std::set<std::pair<std::string, std::string>> r;
    collect(c, v, r);
    return {r.begin(), r.end()};
}

// ---- evaluation ---------------------------------------------------------

namespace {

double ref_value(const std::string& tok, const std::string& place, const EvalEnv& env) {
    int id = env.net->token_id(tok);
    int p = env.net->place_id(place);
    if (id < 0 || p < 0) throw Error("unknown place reference " + tok + "." + place);
    if (env.state->place[id] != p) return env.net->absent_value;
    return env.net->tokens[id].value;
}

double var_value(const std::string& name, const EvalEnv& env) {
    int tok = env.var ? env.var(name) : -1;
    if (tok < 0) throw Error("unbound variable " + name);
    return env.net->tokens[tok].value;
}

}  // namespace

double eval_expr(const Cond& e, const EvalEnv& env) {
    switch (e.kind) {
    case Cond::Lit: return e.value;
    case Cond::Var: return var_value(e.name, env);
    case Cond::PlaceRef: return ref_value(e.name, e.place, env);
    case Cond::If:
        return eval_condition(*e.kids[0], env) ? eval_expr(*e.kids[1], env) : eval_expr(*e.kids[2], env);
    case Cond::Add: return eval_expr(*e.kids[0], env) + eval_expr(*e.kids[1], env);
    case Cond::Sub: return eval_expr(*e.kids[0], env) - eval_expr(*e.kids[1], env);
    case Cond::Mul: return eval_expr(*e.kids[0], env) * eval_expr(*e.kids[1], env);
    case Cond::Div: {
        double a = eval_expr(*e.kids[0], env);
        double b = eval_expr(*e.kids[1], env);
        if (b == 0) throw Error("undefined expression");
        return a / b;
    }
    default: throw Error("boolean used as a number");
    }
}

bool eval_condition(const Cond& c, const EvalEnv& env) {
    switch (c.kind) {
    case Cond::Not: return !eval_condition(*c.kids[0], env);
    case Cond::Or: return eval_condition(*c.kids[0], env) || eval_condition(*c.kids[1], env);
    case Cond::Gt: return eval_expr(*c.kids[0], env) > eval_expr(*c.kids[1], env);
    default: throw Error("number used as a condition");
    }
}

std::string substitute(const std::string& text, const EvalEnv& env) {
    std::string out;
    for (const auto& tk : lex(text)) {
        std::string piece;
        switch (tk.kind) {
        case Tk::End: continue;
        case Tk::Num: piece = format_number(tk.num); break;
        case Tk::Ident: {
            int tok = env.var ? env.var(tk.a) : -1;
            piece = tok >= 0 ? format_number(env.net->tokens[tok].value) : tk.a;
            break;
        }
        case Tk::Ref: piece = format_number(ref_value(tk.a, tk.b, env)); break;
        case Tk::Not: piece = "\xC2\xAC"; break;
        case Tk::Or: piece = "\xE2\x88\xA8"; break;
        case Tk::And: piece = "\xE2\x88\xA7"; break;
        case Tk::Ge: piece = "\xE2\x89\xA5"; break;
        case Tk::Le: piece = "\xE2\x89\xA4"; break;
        case Tk::Ne: piece = "\xE2\x89\xA0"; break;
        case Tk::Eq: piece = "="; break;
        case Tk::Gt: piece = ">"; break;
        case Tk::Lt: piece = "<"; break;
        case Tk::Mul: piece = "\xC3\x97"; break;
        case Tk::Div: piece = "\xC3\xB7"; break;
        case Tk::Plus: piece = "+"; break;
        case Tk::Minus: piece = "-"; break;
        case Tk::LParen: piece = "("; break;
        case Tk::RParen: piece = ")"; break;
        case Tk::If: piece = "if"; break;
        case Tk::Then: piece = "then"; break;
        case Tk::Else: piece = "else"; break;
        }
        bool glue = piece == ")" || (!out.empty() && out.back() == '(') || (!out.empty() && out.size() >= 2 && out.compare(out.size() - 2, 2, "\xC2\xAC") == 0);
        if (!out.empty() && !glue) out += ' ';
        out += piece;
    }
    return out;
}

}  // namespace rpn
