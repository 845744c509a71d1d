#include <doctest.h>

#include <filesystem>

#include "rpn/control.hpp"
#include "rpn/netfile.hpp"
#include "support.hpp"

using namespace rpn;
using nlohmann::json;

TEST_CASE("every bundled net survives save and reload") {
    int n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(rpntest::nets_dir())) {
        std::string path = entry.path().string();
        if (path.size() < 9 || path.substr(path.size() - 9) != ".rpn.json") continue;
        INFO(path);
        Net a = load_net(path);
        CHECK(validate_net(a).empty());
        CHECK(check_conditions(a).empty());
        json saved = save_net(a);
        Net b = load_net_json(saved);
        CHECK(save_net(b) == saved);
        CHECK(encode(initial_state(a)) == encode(initial_state(b)));
        ++n;
    }
    CHECK(n >= 15);
}

namespace {

json tiny() {
    return json::parse(R"({
      "name": "tiny", "mode": "ground", "tokens": ["a", "b"], "places": ["x", "y", "z"],
      "transitions": [{"name": "t", "in": [{"place": "x", "tokens": ["a"]}], "out": [{"place": "y", "tokens": ["a"]}]}],
      "initialMarking": {"x": ["a"], "z": ["b"]}})");
}

std::vector<std::string> problems_of(const json& doc) {
    try {
        load_net_json(doc);
    } catch (const LoadError& e) {
        return e.problems;
    }
    return {};
}

bool mentions(const std::vector<std::string>& ps, const std::string& what) {
    for (const auto& p : ps)
        if (p.find(what) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("well-formedness") {
    CHECK(problems_of(tiny()).empty());

    json d = tiny();
    d["transitions"][0]["out"] = json::parse(R"([{"place": "y", "tokens": ["a"]}, {"place": "z", "tokens": ["a"]}])");
    CHECK(mentions(problems_of(d), "cloning"));

    d = tiny();
    d["transitions"][0]["out"] = json::array();
    CHECK(mentions(problems_of(d), "token erasure"));

    d = tiny();
    d["transitions"][0]["out"] = json::parse(R"([{"place": "y", "tokens": ["a", "b"]}])");
    CHECK(mentions(problems_of(d), "token creation"));

    d = tiny();
    d["initialMarking"] = json::parse(R"({"x": ["a"]})");
    CHECK(mentions(problems_of(d), "initial marking"));

    d = tiny();
    d["transitions"][0]["in"][0]["place"] = "nowhere";
    CHECK(mentions(problems_of(d), "/transitions/t/in/nowhere"));

    d = tiny();
    d["bondDestruction"] = false;
    d["initialMarking"] = json::parse(R"({"x": {"tokens": ["a", "b"], "bonds": ["a-b"]}})");
    d["transitions"][0] = json::parse(R"({"name": "t", "in": [{"place": "x", "tokens": ["a", "b"], "bonds": ["a-b"]}],
                                          "out": [{"place": "y", "tokens": ["a", "b"]}]})");
    CHECK(mentions(problems_of(d), "bond preservation"));
}

TEST_CASE("conditions are checked at load time") {
    json d = rpntest::bundled_json("cf-cr.rpn.json");
    d["transitions"][0]["forwardCondition"] = "u >";
    CHECK_THROWS_AS(load_net_json(d), LoadError);
    d = rpntest::bundled_json("cf-cr.rpn.json");
    d["transitions"][0]["forwardCondition"] = "zz > 1";
    CHECK_THROWS_AS(load_net_json(d), LoadError);
}

TEST_CASE("marking and history views") {
    Net net = rpntest::bundled("catalysis");
    State s = initial_state(net);
    json m = marking_json(net, s);
    CHECK(m["u"]["tokens"] == json::array({"c"}));
    CHECK_FALSE(m.contains("x"));
    CHECK(history_json(net, s) == json::object());
}
