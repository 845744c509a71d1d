#include <doctest.h>
#include <httplib.h>

#include <thread>

#include "rpn/server.hpp"
#include "support.hpp"

using namespace rpn;
using nlohmann::json;

namespace {

std::string create(SessionStore& st, const std::string& net) {
    auto r = st.create(json{{"net", rpntest::bundled_json(net + ".rpn.json")}});
    REQUIRE(r.status == 201);
    return r.body.at("id").get<std::string>();
}

json moves_of(SessionStore& st, const std::string& id, const std::string& dir) {
    auto r = st.enabled(id, dir, "");
    REQUIRE(r.status == 200);
    return r.body.at("moves");
}

}  // namespace

TEST_CASE("session lifecycle and error codes") {
    SessionStore st;
    CHECK(st.state("nope").status == 404);
    CHECK(st.fire("nope", json::object()).status == 404);
    json broken = rpntest::bundled_json("catalysis.rpn.json");
    broken["transitions"][0]["in"][0]["place"] = "nowhere";
    auto bad = st.create(json{{"net", broken}});
    CHECK(bad.status == 422);
    CHECK(bad.body["problems"].size() == 1);

    std::string id = create(st, "catalysis");
    auto fwd = moves_of(st, id, "forward");
    REQUIRE(fwd.size() == 1);
    CHECK(fwd[0]["transition"] == "t1");

    CHECK(st.fire(id, {{"transition", "t9"}}).status == 422);
    auto r = st.fire(id, {{"transition", "t2"}});
    CHECK(r.status == 422);
    CHECK(r.body["error"].get<std::string>().find("out of range") != std::string::npos);
    CHECK(st.fire(id, {{"transition", "t1"}, {"assignment", 3}}).status == 422);

    auto before = st.state(id).body;
    r = st.fire(id, {{"transition", "t1"}, {"version", 0}});
    REQUIRE(r.status == 200);
    CHECK(r.body["fired"]["transition"] == "t1");
    CHECK(r.body["diff"]["historyAdded"][0]["key"] == 1);
    CHECK(st.fire(id, {{"transition", "t1"}, {"version", 0}}).status == 409);
    CHECK(st.fire(id, {{"transition", "t1"}, {"direction", "reverse"}, {"key", 7}}).status == 409);
    CHECK(st.fire(id, {{"transition", "t1"}, {"direction", "reverse"}}).status == 422);
    CHECK(st.fire(id, {{"transition", "t1"}, {"direction", "sideways"}}).status == 422);

    auto after = st.undo(id);
    REQUIRE(after.status == 200);
    for (const char* k : {"marking", "history", "tokens", "bonds"}) CHECK(after.body[k].dump() == before[k].dump());
    CHECK(after.body["version"] == 2);
    CHECK(st.undo(id).status == 409);

    CHECK(st.remove(id).status == 200);
    CHECK(st.state(id).status == 404);
    CHECK(st.remove(id).status == 404);
}

TEST_CASE("snapshot replays to the same state") {
    SessionStore st;
    std::string id = create(st, "catalysis");
    REQUIRE(st.fire(id, {{"transition", "t1"}}).status == 200);
    REQUIRE(st.fire(id, {{"transition", "t2"}}).status == 200);
    REQUIRE(st.fire(id, {{"transition", "t1"}, {"direction", "reverse"}, {"key", 1}, {"semantics", "oco"}}).status == 200);
    auto snap = st.snapshot(id);
    REQUIRE(snap.status == 200);
    auto copy = st.create(snap.body);
    REQUIRE(copy.status == 201);
    auto a = st.state(id).body, b = copy.body["state"];
    CHECK(a["marking"] == b["marking"]);
    CHECK(a["history"] == b["history"]);
}

TEST_CASE("controlled moves explain their conditions") {
    SessionStore st;
    std::string id = create(st, "chloride");
    auto fwd = moves_of(st, id, "forward");
    json t1;
    for (auto& m : fwd)
        if (m["transition"] == "t1") t1 = m;
    REQUIRE(t1.is_object());
    int h1 = -1;
    for (auto& a : t1["assignments"])
        if (a["binding"]["h"] == "H1") h1 = a["index"].get<int>();
    REQUIRE(h1 >= 0);
    REQUIRE(st.fire(id, {{"transition", "t1"}, {"assignment", h1}}).status == 200);

    auto rev = moves_of(st, id, "reverse");
    REQUIRE(rev.size() == 1);
    auto blocked = rev[0]["assignments"][0];
    CHECK(blocked["enabled"] == false);
    CHECK(blocked["condition"]["trace"] == "338 \xE2\x89\xA5 338 \xE2\x86\x92 true \xE2\x87\x92 reverse blocked");
    auto r = st.fire(id, {{"transition", "t1"}, {"direction", "reverse"}, {"key", 1}});
    CHECK(r.status == 422);

    REQUIRE(st.fire(id, {{"transition", "t2"}}).status == 200);
    rev = moves_of(st, id, "reverse");
    json again;
    for (auto& m : rev)
        if (m["transition"] == "t1") again = m;
    REQUIRE(again.is_object());
    CHECK(again["assignments"][0]["condition"]["trace"] ==
          "20 \xE2\x89\xA5 338 \xE2\x86\x92 false \xE2\x87\x92 reverse allowed");
    CHECK(st.fire(id, {{"transition", "t1"}, {"direction", "reverse"}, {"key", 1}}).status == 200);
}

TEST_CASE("lts endpoint") {
    SessionStore st;
    std::string id = create(st, "catalysis");
    auto r = st.lts(id, 500);
    REQUIRE(r.status == 200);
    CHECK(r.body["current"] == 0);
    CHECK(r.body["truncated"] == false);
    CHECK(st.lts(id, 0).status == 422);
    CHECK(st.lts(id, 2).body["truncated"] == true);
}

TEST_CASE("http round trip") {
    HttpServer server;
    int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread th([&] { server.run(); });
    server.wait_ready();
    httplib::Client cli("127.0.0.1", port);

    auto res = cli.Post("/session", json{{"net", rpntest::bundled_json("catalysis.rpn.json")}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    std::string id = json::parse(res->body)["id"];

    res = cli.Get("/session/" + id + "/enabled?direction=forward");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["moves"][0]["transition"] == "t1");

    res = cli.Post("/session/" + id + "/fire", R"({"transition": "t1", "version": 0})", "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    res = cli.Post("/session/" + id + "/fire", "{not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    res = cli.Get("/session/" + id + "/lts?maxStates=abc");
    REQUIRE(res);
    CHECK(res->status == 422);
    res = cli.Get("/session/" + id + "/state");
    REQUIRE(res);
    CHECK(json::parse(res->body)["version"] == 1);
    res = cli.Delete("/session/" + id);
    REQUIRE(res);
    CHECK(res->status == 200);
    res = cli.Get("/session/" + id + "/state");
    REQUIRE(res);
    CHECK(res->status == 404);

    server.stop();
    th.join();
}
