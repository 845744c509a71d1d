#include <doctest.h>

#include "rpn/trace.hpp"
#include "support.hpp"

using namespace rpn;
using nlohmann::json;

namespace {

TraceReport run(const std::string& net, const std::string& script) {
    return run_trace(rpntest::bundled(net), rpntest::bundled_json(script));
}

}  // namespace

TEST_CASE("bundled scripts") {
    for (auto [net, script] : std::vector<std::pair<std::string, std::string>>{
             {"catalysis", "catalysis.trace.json"}, {"erk", "erk.trace.json"},
             {"transaction", "transaction.trace.json"}, {"chloride", "chloride.trace.json"},
             {"cf-cr", "cf-cr.trace.json"}, {"equivalent-markings", "equivalent-markings.trace.json"},
             {"antenna", "antenna.trace.json"}}) {
        auto rep = run(net, script);
        INFO(script << ": " << rep.error);
        CHECK(rep.ok);
    }
}

TEST_CASE("a wrong expectation fails the script") {
    Net net = rpntest::bundled("catalysis");
    json script = rpntest::bundled_json("catalysis.trace.json");
    script["steps"][0]["expectMarking"] = json::parse(R"({"u": ["c"]})");
    auto rep = run_trace(net, script);
    CHECK_FALSE(rep.ok);
    CHECK(rep.steps_run == 1);
    CHECK(rep.error.find("step 1") != std::string::npos);

    script = json::parse(R"({"steps": [{"fire": "t2"}]})");
    CHECK_FALSE(run_trace(net, script).ok);
    script = json::parse(R"({"steps": [{"fire": "t2", "expectFail": true}]})");
    CHECK(run_trace(net, script).ok);
    script = json::parse(R"({"steps": [{"fire": "t1", "expectFail": true}]})");
    CHECK_FALSE(run_trace(net, script).ok);
    script = json::parse(R"({"expectInitial": {"u": ["a"]}, "steps": []})");
    CHECK_FALSE(run_trace(net, script).ok);
}

TEST_CASE("marking comparison") {
    Net net = rpntest::bundled("catalysis");
    State s = initial_state(net);
    CHECK(compare_marking(net, s, json::parse(R"({"u": ["c"], "v": ["a"], "w": ["b"]})"), true).empty());
    CHECK(compare_marking(net, s, json::parse(R"({"u": ["c"]})"), false).empty());
    CHECK_FALSE(compare_marking(net, s, json::parse(R"({"u": ["c"]})"), true).empty());
    CHECK_FALSE(compare_marking(net, s, json::parse(R"({"u": {"tokens": ["c"], "bonds": ["a-c"]}})"), false).empty());
}
