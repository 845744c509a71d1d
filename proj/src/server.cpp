#include "rpn/server.hpp"

#include <httplib.h>

#include <algorithm>
#include <set>

#include "rpn/control.hpp"
#include "rpn/lts.hpp"
#include "rpn/netfile.hpp"

namespace rpn {

using nlohmann::json;

namespace {

Reply fail(int status, const std::string& msg) { return {status, json{{"error", msg}}}; }

json binding_json(const Net& net, const Transition& tr, const Binding& b) {
    json j = json::object();
    for (size_t v = 0; v < tr.vars.size() && v < b.size(); ++v)
        if (b[v] >= 0) j[tr.vars[v].name] = net.tokens[b[v]].name;
    return j;
}

json diff_json(const Net& net, const State& a, const State& b) {
    json moved = json::array();
    for (size_t t = 0; t < a.place.size(); ++t)
        if (a.place[t] != b.place[t])
            moved.push_back({{"token", net.tokens[t].name}, {"from", net.places[a.place[t]]}, {"to", net.places[b.place[t]]}});
    auto bonds = [&](const State& x, const State& y) {
        json r = json::array();
        for (auto bd : x.bonds)
            if (!y.has_bond(bd.a, bd.b)) r.push_back({net.tokens[bd.a].name, net.tokens[bd.b].name});
        return r;
    };
    auto occs = [&](const State& x, const State& y) {
        json r = json::array();
        for (auto o : x.live)
            if (!y.find(o.key)) r.push_back({{"transition", net.transitions[o.t].name}, {"key", o.key}});
        return r;
    };
    return {{"moved", moved},
            {"bondsAdded", bonds(b, a)},
            {"bondsRemoved", bonds(a, b)},
            {"historyAdded", occs(b, a)},
            {"historyRemoved", occs(a, b)}};
}

}  // namespace

json state_view(const Session& s) {
    const Net& net = *s.net;
    json v = state_json(net, s.state);
    v["version"] = s.version;
    v["semantics"] = to_string(s.sem);
    v["interpretation"] = to_string(s.engine->interp());
    json toks = json::array();
    for (size_t t = 0; t < net.tokens.size(); ++t) {
        json tj{{"id", t}, {"name", net.tokens[t].name}, {"type", net.tokens[t].type},
                {"index", net.tokens[t].index}, {"place", net.places[s.state.place[t]]}};
        if (net.tokens[t].has_value) tj["value"] = net.tokens[t].value;
        if (!s.state.mem[t].empty()) tj["memory"] = v["memory"][net.tokens[t].name];
        toks.push_back(tj);
    }
    v["tokens"] = toks;
    json bonds = json::array();
    for (auto b : s.state.bonds) bonds.push_back({net.tokens[b.a].name, net.tokens[b.b].name});
    v["bonds"] = bonds;
    bool stuck = controlled_moves(*s.engine, s.state, s.sem, true, true).empty();
    v["deadlock"] = stuck;
    return v;
}

std::shared_ptr<Session> SessionStore::get(const std::string& id) {
    std::lock_guard<std::mutex> g(lock_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

Reply SessionStore::create(const json& body) {
    json netdoc = body.contains("net") ? body.at("net") : body;
    auto s = std::make_shared<Session>();
    try {
        s->net = std::make_unique<Net>(load_net_json(netdoc));
    } catch (const LoadError& e) {
        return {422, json{{"error", "invalid net"}, {"problems", e.problems}}};
    } catch (const std::exception& e) {
        return fail(422, e.what());
    }
    Interp interp = s->net->interp;
    s->sem = s->net->semantics;
    try {
        if (body.contains("interpretation")) interp = parse_interp(body.at("interpretation").get<std::string>());
        if (body.contains("semantics")) s->sem = parse_semantics(body.at("semantics").get<std::string>());
    } catch (const std::exception& e) {
        return fail(422, e.what());
    }
    s->engine = std::make_unique<Engine>(*s->net, interp);
    if (!s->engine->allows(s->sem)) return fail(422, "semantics not available under this interpretation");
    s->state = s->engine->initial();

    // optional replay of a saved trace log
    for (const auto& step : body.value("trace", json::array())) {
        json req = step;
        req.erase("version");
        auto r = fire_locked(*s, req);
        if (r.status != 200) return {422, json{{"error", "trace replay failed"}, {"detail", r.body}}};
    }
    {
        std::lock_guard<std::mutex> g(lock_);
        s->id = "s" + std::to_string(next_++);
        sessions_[s->id] = s;
    }
    std::lock_guard<std::mutex> g(s->lock);
    return {201, json{{"id", s->id}, {"state", state_view(*s)}}};
}

Reply SessionStore::state(const std::string& id) {
    auto s = get(id);
    if (!s) return fail(404, "unknown session");
    std::lock_guard<std::mutex> g(s->lock);
    return {200, state_view(*s)};
}

Reply SessionStore::enabled(const std::string& id, const std::string& direction, const std::string& semantics) {
    auto s = get(id);
    if (!s) return fail(404, "unknown session");
    std::lock_guard<std::mutex> g(s->lock);
    Semantics sem = s->sem;
    try {
        if (!semantics.empty()) sem = parse_semantics(semantics);
    } catch (const std::exception& e) {
        return fail(422, e.what());
    }
    if (!s->engine->allows(sem)) return fail(422, "semantics not available under this interpretation");
    std::vector<Dir> dirs;
    if (direction.empty() || direction == "both" || direction == "forward") dirs.push_back(Dir::forward);
    if (direction.empty() || direction == "both" || direction == "reverse") dirs.push_back(Dir::reverse);
    if (dirs.empty()) return fail(422, "direction must be forward, reverse or both");

    const Net& net = *s->net;
    json moves = json::array();
    for (Dir d : dirs) {
        auto list = enabled_controlled(*s->engine, s->state, d, sem, true);
        // group assignments per transition (and occurrence for reversal)
        std::vector<std::pair<int, int>> order;
        std::map<std::pair<int, int>, json> groups;
        for (const auto& cm : list) {
            std::pair<int, int> k{cm.move.t, d == Dir::reverse ? cm.move.key : 0};
            if (!groups.count(k)) {
                order.push_back(k);
                json g{{"transition", net.transitions[k.first].name}, {"direction", d == Dir::forward ? "forward" : "reverse"},
                       {"semantics", to_string(sem)}, {"assignments", json::array()}};
                if (d == Dir::reverse) g["key"] = k.second;
                groups[k] = g;
            }
            const auto& tr = net.transitions[cm.move.t];
            json a{{"index", groups[k]["assignments"].size()},
                   {"binding", binding_json(net, tr, cm.move.binding)},
                   {"enabled", cm.cond.ok}};
            if (cm.cond.has_condition)
                a["condition"] = {{"ok", cm.cond.ok}, {"trace", cm.cond.trace}, {"witness", binding_json(net, tr, cm.cond.ext)}};
            groups[k]["assignments"].push_back(a);
        }
        for (auto& k : order) moves.push_back(groups[k]);
    }
    return {200, json{{"version", s->version}, {"moves", moves}}};
}

Reply SessionStore::fire_locked(Session& s, const json& body) {
    const Net& net = *s.net;
    if (body.contains("version") && body.at("version").get<long>() != s.version)
        return fail(409, "stale move: state changed (version " + std::to_string(s.version) + ")");
    std::string tname = body.value("transition", "");
    int t = net.transition_id(tname);
    if (t < 0) return fail(422, "unknown transition " + tname);
    std::string dname = body.value("direction", "forward");
    if (dname != "forward" && dname != "reverse") return fail(422, "direction must be forward or reverse");
    Dir d = dname == "forward" ? Dir::forward : Dir::reverse;
    Semantics sem = s.sem;
    try {
        if (body.contains("semantics")) sem = parse_semantics(body.at("semantics").get<std::string>());
    } catch (const std::exception& e) {
        return fail(422, e.what());
    }
    if (!s.engine->allows(sem)) return fail(422, "semantics not available under this interpretation");
    int key = 0;
    if (d == Dir::reverse) {
        if (!body.contains("key")) return fail(422, "reverse moves need a key");
        key = body.at("key").get<int>();
        const Occ* o = s.state.find(key);
        if (!o || o->t != t) return fail(409, "stale move: occurrence (" + tname + "," + std::to_string(key) + ") is not live");
    }
    std::vector<ControlledMove> cands;
    for (auto& cm : enabled_controlled(*s.engine, s.state, d, sem, true))
        if (cm.move.t == t && (d == Dir::forward || cm.move.key == key)) cands.push_back(std::move(cm));
    int idx = body.value("assignment", 0);
    if (idx < 0 || idx >= static_cast<int>(cands.size()))
        return fail(422, "disabled move: assignment " + std::to_string(idx) + " out of range (" +
                             std::to_string(cands.size()) + " available)");
    const auto& cm = cands[idx];
    if (!cm.cond.ok) return fail(422, "disabled move: " + cm.cond.trace);
    State next;
    try {
        next = s.engine->apply(s.state, cm.move);
    } catch (const Error& e) {
        return fail(422, std::string("disabled move: ") + e.what());
    }
    json entry{{"transition", tname}, {"direction", dname}, {"semantics", to_string(sem)}, {"assignment", idx}};
    if (d == Dir::reverse) entry["key"] = key;
    entry["binding"] = binding_json(net, net.transitions[t], cm.move.binding);
    json diff = diff_json(net, s.state, next);
    s.undo.push_back(s.state);
    s.state = std::move(next);
    ++s.version;
    s.log.push_back(entry);
    return {200, json{{"state", state_view(s)}, {"diff", diff}, {"fired", entry}}};
}

Reply SessionStore::fire(const std::string& id, const json& body) {
    auto s = get(id);
    if (!s) return fail(404, "unknown session");
    std::lock_guard<std::mutex> g(s->lock);
    try {
        return fire_locked(*s, body);
    } catch (const json::exception& e) {
        return fail(422, std::string("malformed move: ") + e.what());
    }
}

Reply SessionStore::undo(const std::string& id) {
    auto s = get(id);
    if (!s) return fail(404, "unknown session");
    std::lock_guard<std::mutex> g(s->lock);
    if (s->undo.empty()) return fail(409, "nothing to undo");
    s->state = s->undo.back();
    s->undo.pop_back();
    s->log.erase(s->log.end() - 1);
    ++s->version;
    return {200, state_view(*s)};
}

Reply SessionStore::lts(const std::string& id, int max_states) {
    auto s = get(id);
    if (!s) return fail(404, "unknown session");
    std::lock_guard<std::mutex> g(s->lock);
    if (max_states <= 0) return fail(422, "maxStates must be positive");
    Bounds b;
    b.max_states = max_states;
    b.sem = s->sem;
    auto l = build_lts(*s->engine, s->engine->initial(), b);
    const Net& net = *s->net;
    json states = json::array(), edges = json::array();
    for (size_t i = 0; i < l.states.size(); ++i)
        states.push_back({{"id", i}, {"marking", marking_text(net, l.states[i])}, {"history", history_text(net, l.states[i])}});
    for (const auto& e : l.edges) edges.push_back({{"src", e.src}, {"label", move_label(net, e.move)}, {"dst", e.dst}});
    return {200, json{{"states", states}, {"edges", edges}, {"initial", l.initial}, {"truncated", l.truncated},
                      {"current", l.find(s->state)}, {"version", s->version}}};
}

Reply SessionStore::snapshot(const std::string& id) {
    auto s = get(id);
    if (!s) return fail(404, "unknown session");
    std::lock_guard<std::mutex> g(s->lock);
    return {200, json{{"net", save_net(*s->net)},
                      {"interpretation", to_string(s->engine->interp())},
                      {"semantics", to_string(s->sem)},
                      {"trace", s->log}}};
}

Reply SessionStore::remove(const std::string& id) {
    std::lock_guard<std::mutex> g(lock_);
    if (!sessions_.erase(id)) return fail(404, "unknown session");
    return {200, json{{"deleted", id}}};
}

namespace {

void send(httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

bool parse(const httplib::Request& req, json& out) {
    if (req.body.empty()) {
        out = json::object();
        return true;
    }
    out = json::parse(req.body, nullptr, false);
    return !out.is_discarded();
}

}  // namespace

struct HttpServer::Impl {
    httplib::Server svr;
    SessionStore store;
};

HttpServer::HttpServer() : impl_(std::make_unique<Impl>()) {
    httplib::Server& svr = impl_->svr;
    SessionStore* store = &impl_->store;
    svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type"}});
    svr.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    svr.Post("/session", [store](const httplib::Request& req, httplib::Response& res) {
        json body;
        if (!parse(req, body)) return send(res, {400, json{{"error", "body is not JSON"}}});
        send(res, store->create(body));
    });
    svr.Get(R"(/session/([^/]+)/state)", [store](const httplib::Request& req, httplib::Response& res) {
        send(res, store->state(req.matches[1]));
    });
    svr.Get(R"(/session/([^/]+)/enabled)", [store](const httplib::Request& req, httplib::Response& res) {
        send(res, store->enabled(req.matches[1], req.get_param_value("direction"), req.get_param_value("semantics")));
    });
    svr.Post(R"(/session/([^/]+)/fire)", [store](const httplib::Request& req, httplib::Response& res) {
        json body;
        if (!parse(req, body)) return send(res, {400, json{{"error", "body is not JSON"}}});
        send(res, store->fire(req.matches[1], body));
    });
    svr.Post(R"(/session/([^/]+)/undo)", [store](const httplib::Request& req, httplib::Response& res) {
        send(res, store->undo(req.matches[1]));
    });
    svr.Get(R"(/session/([^/]+)/lts)", [store](const httplib::Request& req, httplib::Response& res) {
        int n = 500;
        if (req.has_param("maxStates")) {
            try {
                n = std::stoi(req.get_param_value("maxStates"));
            } catch (const std::exception&) {
                return send(res, {422, json{{"error", "maxStates must be an integer"}}});
            }
        }
        send(res, store->lts(req.matches[1], n));
    });
    svr.Get(R"(/session/([^/]+)/snapshot)", [store](const httplib::Request& req, httplib::Response& res) {
        send(res, store->snapshot(req.matches[1]));
    });
    svr.Delete(R"(/session/([^/]+))", [store](const httplib::Request& req, httplib::Response& res) {
        send(res, store->remove(req.matches[1]));
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->svr.bind_to_any_port(host);
    return impl_->svr.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->svr.listen_after_bind(); }

void HttpServer::stop() { impl_->svr.stop(); }

void HttpServer::wait_ready() { impl_->svr.wait_until_ready(); }

int serve(const std::string& host, int port) {
    HttpServer s;
    if (s.bind(host, port) < 0) return 1;
    return s.run() ? 0 : 1;
}

}  // namespace rpn
