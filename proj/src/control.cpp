#include "rpn/control.hpp"

#include <functional>

namespace rpn {

CondCheck check_condition(const Engine& eng, const State& s, int t, Dir dir, const Binding& b) {
    const Net& net = eng.net();
    const auto& tr = net.transitions[t];
    CondCheck r;
    r.ext = b;
    CondPtr cond;
    std::string text;
    bool negate = false;
    if (dir == Dir::forward) {
        cond = tr.fwd;
        text = tr.fwd_text;
    } else if (tr.rev_is_neg) {
        cond = tr.fwd;
        text = tr.fwd_text;
        negate = true;
    } else {
        cond = tr.rev;
        text = tr.rev_text;
    }
    if (!cond) return r;
    r.has_condition = true;

    std::vector<int> todo;
    for (const auto& name : free_vars(*cond)) {
        int v = tr.var_id(name);
        if (v >= 0 && r.ext[v] < 0) todo.push_back(v);
    }
    EvalEnv env;
    env.net = &net;
    env.state = &s;
    Binding cur = b;
    env.var = [&](const std::string& n) {
        int v = tr.var_id(n);
        return v < 0 ? -1 : cur[v];
    };
    const char* dname = dir == Dir::forward ? "forward" : "reverse";
    bool found = false, any = false;
    std::string first_trace;

    auto judge = [&]() {
        std::string body;
        bool val = false;
        bool failed = false;
        try {
            val = eval_condition(*cond, env);
            body = substitute(text, env) + " \xE2\x86\x92 " + (val ? "true" : "false");
        } catch (const Error& e) {
            failed = true;
            body = substitute(text, env) + " \xE2\x86\x92 " + e.what();
        }
        bool ok = !failed && (negate ? !val : val);
        std::string tr_text = body + " \xE2\x87\x92 " + dname + (ok ? " allowed" : " blocked");
        if (!any) first_trace = tr_text;
        any = true;
        if (ok) {
            found = true;
            r.ext = cur;
            r.trace = tr_text;
        }
    };

    std::vector<char> used(net.tokens.size(), 0);
    for (int tok : cur)
        if (tok >= 0) used[tok] = 1;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (found) return;
        if (i == todo.size()) {
            judge();
            return;
        }
        int v = todo[i];
        auto try_tok = [&](int tok) {
            if (used[tok] || found) return;
            used[tok] = 1;
            cur[v] = tok;
            rec(i + 1);
            cur[v] = -1;
            used[tok] = 0;
        };
        if (tr.vars[v].fixed >= 0)
            try_tok(tr.vars[v].fixed);
        else if (tr.vars[v].type >= 0)
            for (int tok : eng.tokens_of_type(tr.vars[v].type)) try_tok(tok);
    };
    rec(0);
    r.ok = found;
    if (!found) r.trace = any ? first_trace : std::string("no tokens for the condition variables \xE2\x87\x92 ") + dname + " blocked";
    return r;
}

std::vector<ControlledMove> enabled_controlled(const Engine& eng, const State& s, Dir dir, Semantics sem,
                                               bool include_blocked) {
    std::vector<ControlledMove> out;
    for (auto& m : eng.moves(s, sem, dir == Dir::forward, dir == Dir::reverse)) {
        auto c = check_condition(eng, s, m.t, dir, m.binding);
        if (c.ok || include_blocked) out.push_back({std::move(m), std::move(c)});
    }
    return out;
}

std::vector<Move> controlled_moves(const Engine& eng, const State& s, Semantics sem, bool forward, bool reverse) {
    std::vector<Move> out;
    for (auto& m : eng.moves(s, sem, forward, reverse))
        if (check_condition(eng, s, m.t, m.dir, m.binding).ok) out.push_back(std::move(m));
    return out;
}

std::vector<std::string> check_conditions(const Net& net) {
    std::vector<std::string> out;
    for (const auto& tr : net.transitions) {
        auto check = [&](const CondPtr& c, const char* which) {
            if (!c) return;
            for (const auto& v : free_vars(*c))
                if (tr.var_id(v) < 0)
                    out.push_back("condition: transition " + tr.name + " " + which + " condition uses undeclared variable " + v);
            for (const auto& [tok, place] : place_refs(*c))
                if (net.token_id(tok) < 0 || net.place_id(place) < 0)
                    out.push_back("condition: transition " + tr.name + " " + which + " condition refers to unknown " + tok + "." + place);
            if (c->kind != Cond::Not && c->kind != Cond::Or && c->kind != Cond::Gt)
                out.push_back("condition: transition " + tr.name + " " + which + " condition is not boolean");
        };
        check(tr.fwd, "forward");
        check(tr.rev, "reverse");
        if (tr.rev_is_neg && !tr.fwd)
            out.push_back("condition: transition " + tr.name + " negates a missing forward condition");
        if (tr.rev_is_neg && tr.rev)
            out.push_back("condition: transition " + tr.name + " has both a reverse condition and reverseIsNegation");
    }
    return out;
}

}  // namespace rpn
