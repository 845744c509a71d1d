#include <doctest.h>

#include "rpn/lts.hpp"
#include "support.hpp"

using namespace rpn;
using rpntest::bundled;

TEST_CASE("catalysis state space") {
    Net net = bundled("catalysis");
    Engine eng(net, Interp::individual);
    Bounds b;
    b.sem = Semantics::bt;
    auto lts = build_lts(eng, eng.initial(), b);
    CHECK(lts.states.size() == 3);
    CHECK(lts.edges.size() == 4);
    CHECK_FALSE(lts.truncated);
    b.sem = Semantics::oco;
    auto oco = build_lts(eng, eng.initial(), b);
    CHECK(oco.states.size() > lts.states.size());

    std::string text = export_text(net, lts);
    CHECK(text.rfind("STATE 0 ", 0) == 0);
    CHECK(text.find("EDGE 0 t1:1:fwd 1\n") != std::string::npos);
    CHECK(text.find("EDGE 1 t1:1:rev 0\n") != std::string::npos);
    CHECK(text.find("TRUNCATED") == std::string::npos);
    CHECK(export_dot(net, lts).find("digraph") == 0);
}

TEST_CASE("bounds") {
    Net net = bundled("dependent-cycles");
    Engine eng(net, Interp::individual);
    Bounds b;
    b.sem = Semantics::causal;
    b.max_depth = 3;
    auto cut = build_lts(eng, eng.initial(), b);
    CHECK(cut.truncated);
    CHECK_FALSE(cut.state_cap);
    for (int d : cut.depth) CHECK(d <= 3);

    b.max_depth = -1;
    b.max_states = 50;
    auto capped = build_lts(eng, eng.initial(), b);
    CHECK(capped.state_cap);
    CHECK(capped.states.size() == 50);
    CHECK_THROWS_AS(lts_isomorphic_reachable(net, capped, net, capped), Error);

    b.max_states = 100000;
    b.forward_only = true;
    b.max_depth = 2;
    auto fwd = build_lts(eng, eng.initial(), b);
    for (const auto& e : fwd.edges) CHECK(e.move.dir == Dir::forward);
}

TEST_CASE("isomorphism up to state and label renaming") {
    LabelledGraph a{3, 0, {{0, "x", 1}, {1, "y", 2}, {2, "y", 0}}};
    LabelledGraph b{3, 2, {{2, "p", 0}, {0, "q", 1}, {1, "q", 2}}};
    auto iso = isomorphic(a, b);
    REQUIRE(iso);
    CHECK(iso->beta == std::vector<int>{2, 0, 1});
    CHECK(iso->eta.at("x") == "p");

    LabelledGraph c{3, 0, {{0, "x", 1}, {1, "y", 2}, {2, "z", 0}}};
    CHECK_FALSE(isomorphic(a, c));
    // Unreachable parts are ignored.
    LabelledGraph d{4, 0, {{0, "x", 1}, {1, "y", 2}, {2, "y", 0}, {3, "w", 3}}};
    CHECK(isomorphic(a, d));
}

TEST_CASE("conditions prune the controlled state space") {
    Net net = bundled("cf-cr");
    Engine eng(net, Interp::collective);
    Bounds b;
    b.sem = Semantics::coll;
    b.max_depth = 4;
    auto ctl = build_lts(eng, eng.initial(), b);
    b.controlled = false;
    auto raw = build_lts(eng, eng.initial(), b);
    CHECK(ctl.states.size() < raw.states.size());
}
