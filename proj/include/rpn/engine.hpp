#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rpn/net.hpp"
#include "rpn/state.hpp"

namespace rpn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-variable token choice; -1 where a variable is unbound.
using Binding = std::vector<int>;

enum class Dir { forward, reverse };

struct Move {
    Dir dir = Dir::forward;
    int t = -1;
    int key = 0;  // reverse moves only
    Semantics sem = Semantics::causal;
    Binding binding;
    bool operator==(const Move&) const = default;
};

// Firing rules for one net under one token interpretation.
// Ground nets and variable nets share this code; memories exist only for
// variable nets under the individual interpretation.
class Engine {
public:
    Engine(const Net& net, Interp interp);

    const Net& net() const { return *net_; }
    Interp interp() const { return interp_; }
    bool tracks_memory() const { return memory_; }
    bool allows(Semantics sem) const;

    State initial() const { return initial_state(*net_); }

    std::vector<Binding> enabled_forward(const State& s, int t) const;
    bool forward_ok(const State& s, int t, const Binding& b) const;
    State fire_forward(const State& s, int t, const Binding& b) const;

    // Reverse-enabling bindings of a live occurrence; empty when not enabled.
    std::vector<Binding> reverse_bindings(const State& s, Occ o, Semantics sem) const;
    std::vector<std::pair<Occ, Binding>> enabled_reverse(const State& s, Semantics sem) const;
    State fire_reverse(const State& s, Occ o, const Binding& b, Semantics sem) const;

    // All live occurrences that transitively depend on o.
    std::vector<Occ> causal_dependents(const State& s, Occ o) const;
    // Direct dependencies as (earlier key, later key) pairs.
    std::vector<std::pair<int, int>> direct_prec(const State& s) const;

    std::optional<Occ> last_occurrence(const State& s, const Component& c) const;
    // -1 when undefined.
    int last_place(const State& s, const Component& c) const;

    // Tokens named on outgoing arcs (ground nets only).
    const std::vector<int>& effect_tokens(int t) const { return effect_tokens_[t]; }
    const std::vector<int>& tokens_of_type(int type) const { return by_type_[type]; }

    // Moves enabled under the plain (uncontrolled) rules.
    std::vector<Move> moves(const State& s, Semantics sem, bool forward, bool reverse) const;
    State apply(const State& s, const Move& m) const;

private:
    const Net* net_;
    Interp interp_;
    bool memory_;
    std::vector<std::vector<int>> effect_tokens_;
    std::vector<std::vector<int>> by_type_;

    bool reverse_check(const State& s, Occ o, const Binding& b, Semantics sem) const;
    bool coll_check(const State& s, int t, const Binding& b) const;
    bool has_direct_dependent(const State& s, Occ o) const;
    bool oco_guards(const State& s, Occ o, const Binding& b) const;
    std::vector<Bond> map_bonds(const std::vector<VarPair>& vp, const Binding& b) const;
    State reverse_to_inputs(const State& s, Occ o, const Binding& b) const;
    State reverse_oco(const State& s, Occ o, const Binding& b) const;
    void drop_occurrence(State& n, int key) const;
};

const char* to_string(Dir d);

}  // namespace rpn
