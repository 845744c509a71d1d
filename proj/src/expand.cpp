#include "rpn/expand.hpp"

#include <algorithm>
#include <functional>

#include "rpn/engine.hpp"

namespace rpn {

Net expand_to_ground(const Net& net) {
    if (net.mode != Mode::variable) throw Error("expansion needs a variable net");
    Net g = net;
    g.mode = Mode::ground;
    g.transitions.clear();

    for (const auto& tr : net.transitions) {
        std::vector<int> arc_vars = tr.guard_vars;
        std::vector<int> choice(tr.vars.size(), -1);
        std::vector<char> used(net.tokens.size(), 0);
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == arc_vars.size()) {
                Transition x = tr;
                std::string name = tr.name + "(";
                for (size_t j = 0; j < arc_vars.size(); ++j) {
                    int v = arc_vars[j];
                    x.vars[v].fixed = choice[v];
                    if (j) name += ",";
                    name += tr.vars[v].name + "=" + net.tokens[choice[v]].name;
                }
                x.name = name + ")";
                g.transitions.push_back(std::move(x));
                return;
            }
            int v = arc_vars[i];
            for (size_t tok = 0; tok < net.tokens.size(); ++tok) {
                if (used[tok] || net.token_type(static_cast<int>(tok)) != tr.vars[v].type) continue;
                used[tok] = 1;
                choice[v] = static_cast<int>(tok);
                rec(i + 1);
                used[tok] = 0;
            }
            choice[v] = -1;
        };
        rec(0);
    }
    std::sort(g.transitions.begin(), g.transitions.end(),
              [](const Transition& a, const Transition& b) { return a.name < b.name; });
    g.finalize();
    return g;
}

}  // namespace rpn
