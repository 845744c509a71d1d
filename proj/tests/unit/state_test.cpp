#include <doctest.h>

#include "rpn/state.hpp"
#include "support.hpp"

using namespace rpn;

TEST_CASE("memory prefix and drop") {
    Instance a{0, {{1, 0}}};
    Instance b{0, {{1, 0}, {3, -1}, {4, 1}}};
    Instance other{1, {{1, 0}}};
    CHECK(memory_contains(a, b));
    CHECK_FALSE(memory_contains(b, a));
    CHECK_FALSE(memory_contains(other, b));
    CHECK(memory_contains(Instance{0, {}}, b));

    Instance d = memory_drop(b, 3);
    CHECK(d.mem == std::vector<Record>{{1, 0}, {4, 1}});
    CHECK_THROWS_AS(memory_drop(b, 2), std::invalid_argument);
}

TEST_CASE("connected components") {
    std::vector<Bond> bonds{make_bond(0, 1), make_bond(2, 1), make_bond(3, 4)};
    std::sort(bonds.begin(), bonds.end());
    auto c = connected(2, {0, 1, 2, 3, 4, 5}, bonds);
    CHECK(c.tokens == std::vector<int>{0, 1, 2});
    CHECK(c.bonds.size() == 2);
    // only bonds of the pool are followed
    auto alone = connected(0, {0, 3}, {make_bond(3, 4)});
    CHECK(alone.tokens == std::vector<int>{0});

    auto ids = component_ids(6, bonds);
    CHECK(ids[0] == ids[2]);
    CHECK(ids[3] == ids[4]);
    CHECK(ids[0] != ids[3]);
    CHECK(ids[5] != ids[0]);
}

TEST_CASE("bond sets stay sorted and unique") {
    std::vector<Bond> v;
    bonds_insert(v, make_bond(3, 1));
    bonds_insert(v, make_bond(0, 2));
    bonds_insert(v, make_bond(1, 3));
    REQUIRE(v.size() == 2);
    CHECK(v[0] == Bond{0, 2});
    CHECK(v[1] == Bond{1, 3});
    bonds_erase(v, make_bond(2, 0));
    CHECK(v == std::vector<Bond>{{1, 3}});
}

TEST_CASE("encode separates distinct states") {
    Net net = rpntest::bundled("catalysis");
    State s = initial_state(net);
    State t = s;
    t.place[0] = (t.place[0] + 1) % static_cast<int>(net.places.size());
    CHECK(encode(s) == encode(initial_state(net)));
    CHECK(encode(s) != encode(t));
    State u = s;
    u.live.push_back(Occ{0, 1});
    CHECK(encode(s) != encode(u));
}

TEST_CASE("history per transition") {
    State s;
    s.live = {{0, 1}, {1, 2}, {0, 4}};
    CHECK(s.history(0) == std::vector<int>{1, 4});
    CHECK(s.history(1) == std::vector<int>{2});
    CHECK(s.max_key() == 4);
    REQUIRE(s.find(2));
    CHECK(s.find(2)->t == 1);
    CHECK_FALSE(s.find(3));
}
