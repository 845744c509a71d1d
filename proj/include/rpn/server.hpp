#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpn/engine.hpp"

namespace rpn {

struct Reply {
    int status = 200;
    nlohmann::json body;
};

struct Session {
    std::string id;
    std::unique_ptr<Net> net;
    std::unique_ptr<Engine> engine;
    Semantics sem = Semantics::causal;
    State state;
    long version = 0;
    std::vector<State> undo;
    nlohmann::json log = nlohmann::json::array();  // fired moves, replayable as a trace script
    std::mutex lock;
};

// Session logic independent of the HTTP transport. Each call returns a
// status code and a JSON body; errors carry {"error": text}.
class SessionStore {
public:
    Reply create(const nlohmann::json& body);
    Reply state(const std::string& id);
    Reply enabled(const std::string& id, const std::string& direction, const std::string& semantics);
    Reply fire(const std::string& id, const nlohmann::json& body);
    Reply undo(const std::string& id);
    Reply lts(const std::string& id, int max_states);
    Reply snapshot(const std::string& id);
    Reply remove(const std::string& id);

private:
    std::mutex lock_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    long next_ = 1;

    std::shared_ptr<Session> get(const std::string& id);
    Reply fire_locked(Session& s, const nlohmann::json& body);
};

nlohmann::json state_view(const Session& s);

// HTTP front end over a SessionStore.
class HttpServer {
public:
    HttpServer();
    ~HttpServer();
    // Returns the bound port (port 0 picks a free one), or -1.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    bool run();
    void stop();
    void wait_ready();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Blocks serving HTTP on host:port.
int serve(const std::string& host, int port);

}  // namespace rpn
