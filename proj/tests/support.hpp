#pragma once

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpn/engine.hpp"
#include "rpn/net.hpp"

namespace rpntest {

using nlohmann::json;
using Rng = std::mt19937;

// Directory of the bundled nets, set by the build.
std::string nets_dir();
rpn::Net bundled(const std::string& name);
json bundled_json(const std::string& file);

struct GroundShape {
    int tokens = 3;
    int places = 4;
    int transitions = 3;
};

struct VarShape {
    int types = 2;
    int max_per_type = 3;
    int places = 3;
    int transitions = 3;
    int max_vars = 3;
    bool collective = false;
    bool conditions = false;  // collective only: random data values and conditions
};

// Random well-formed nets. Draws until the loader accepts one.
rpn::Net random_ground_net(Rng& rng, const GroundShape& shape);
rpn::Net random_variable_net(Rng& rng, const VarShape& shape);
json random_ground_doc(Rng& rng, const GroundShape& shape);
json random_variable_doc(Rng& rng, const VarShape& shape);

// Random walk of up to `steps` moves, forward with probability fwd_bias.
rpn::State random_walk(const rpn::Engine& eng, const rpn::State& from, rpn::Semantics sem, Rng& rng, int steps,
                       double fwd_bias = 0.6);

int pick(Rng& rng, int n);
bool coin(Rng& rng, double p);

}  // namespace rpntest
