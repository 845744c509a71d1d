#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpn/net.hpp"
#include "rpn/state.hpp"

namespace rpn {

struct LoadError : std::runtime_error {
    std::vector<std::string> problems;
    explicit LoadError(std::vector<std::string> p);
};

// Builds and validates a net. Problems carry a JSON-pointer style location.
Net load_net_json(const nlohmann::json& doc);
Net load_net(const std::string& path);
nlohmann::json save_net(const Net& net);

// Loads without validation; used by `validate` to report everything at once.
Net build_net(const nlohmann::json& doc, std::vector<std::string>& problems);

nlohmann::json read_json_file(const std::string& path);

// Marking as {place: {"tokens": [...], "bonds": [[a, b], ...]}} with empty places omitted.
nlohmann::json marking_json(const Net& net, const State& s);
nlohmann::json history_json(const Net& net, const State& s);
nlohmann::json state_json(const Net& net, const State& s);

}  // namespace rpn
