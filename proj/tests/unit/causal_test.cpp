#include <doctest.h>

#include "rpn/causal.hpp"
#include "rpn/expand.hpp"
#include "rpn/netfile.hpp"
#include "support.hpp"

using namespace rpn;
using rpntest::bundled;

namespace {

State run(const Engine& eng, const std::vector<std::pair<std::string, Binding>>& steps) {
    const Net& net = eng.net();
    State s = eng.initial();
    for (const auto& [name, b] : steps) {
        int t = net.transition_id(name);
        Binding bind = b;
        if (bind.empty()) bind = eng.enabled_forward(s, t).at(0);
        s = eng.fire_forward(s, t, bind);
    }
    return s;
}

}  // namespace

TEST_CASE("independent firings commute up to key renaming") {
    Net net = bundled("equivalent-markings");
    Engine eng(net, Interp::individual);
    int a1 = net.token_id("a1"), a2 = net.token_id("a2");
    State s12 = run(eng, {{"t", {a1}}, {"t", {a2}}});
    State s21 = run(eng, {{"t", {a2}}, {"t", {a1}}});
    CHECK_FALSE(s12 == s21);
    CHECK(states_causally_equivalent(eng, s12, s21));
    CHECK(states_causally_equivalent(eng, s21, s12));
    // Each firing is its own causal chain.
    CHECK(causal_paths(eng, s12).size() == 2);
}

TEST_CASE("different cycles back to the same marking are not equivalent") {
    for (const char* name : {"dependent-cycles", "dependent-cycles-multi"}) {
        INFO(name);
        Net net = bundled(name);
        Engine eng(net, Interp::individual);
        State a = run(eng, {{"t1", {}}, {"t2", {}}});
        State b = run(eng, {{"t3", {}}, {"t4", {}}});
        State c = run(eng, {{"t1", {}}, {"t2", {}}});
        CHECK(a.place == b.place);
        CHECK_FALSE(states_causally_equivalent(eng, a, b));
        CHECK_FALSE(states_causally_equivalent(eng, a, eng.initial()));
        CHECK(states_causally_equivalent(eng, a, c));
        auto paths = causal_paths(eng, a);
        REQUIRE(paths.size() == 1);
        CHECK(paths[0].size() == 2);
    }
}

TEST_CASE("expansion of the equivalent nets example") {
    Net net = bundled("equivalent-rpns");
    Net g = expand_to_ground(net);
    CHECK(g.mode == Mode::ground);
    REQUIRE(g.transitions.size() == 4);
    std::vector<std::string> names;
    for (const auto& t : g.transitions) names.push_back(t.name);
    CHECK(names == std::vector<std::string>{"t(u=a1,v=b1)", "t(u=a1,v=b2)", "t(u=a2,v=b1)", "t(u=a2,v=b2)"});
    CHECK(validate_net(g).empty());
}

TEST_CASE("expansion counts injective typed choices") {
    // Three instances of one type, two variables of that type: 3 * 2 choices.
    auto doc = nlohmann::json::parse(R"({
      "name": "count", "mode": "variable", "tokenTypes": ["a"],
      "instances": [{"name": "a1", "type": "a"}, {"name": "a2", "type": "a"}, {"name": "a3", "type": "a"}],
      "places": ["x", "y"],
      "transitions": [{"name": "t", "variables": {"u": "a", "v": "a"},
        "in": [{"place": "x", "vars": ["u", "v"]}], "out": [{"place": "y", "vars": ["u", "v"], "bonds": ["u-v"]}]}],
      "initialMarking": {"x": ["a1", "a2", "a3"]}})");
    Net g = expand_to_ground(load_net_json(doc));
    CHECK(g.transitions.size() == 6);
}
