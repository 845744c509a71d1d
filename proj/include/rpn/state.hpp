#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpn/net.hpp"

namespace rpn {

// One memory entry (k, u). var == -1 stands for '*'.
struct Record {
    int key = 0;
    int var = -1;
    auto operator<=>(const Record&) const = default;
};

// A token instance: base identity plus flattened memory.
struct Instance {
    int base = -1;
    std::vector<Record> mem;
    auto operator<=>(const Instance&) const = default;
};

// a ∈̄ b: a's memory is a prefix of b's.
bool memory_contains(const Instance& a, const Instance& b);
// Removes the record carrying key; throws std::invalid_argument if absent.
Instance memory_drop(const Instance& a, int key);

struct Occ {
    int t = -1;
    int key = 0;
    auto operator<=>(const Occ&) const = default;
};

struct State {
    std::vector<int> place;               // per token
    std::vector<Bond> bonds;              // sorted
    std::vector<std::vector<Record>> mem; // per token; empty outside individual variable mode
    std::vector<Occ> live;                // sorted by key
    std::vector<std::pair<int, int>> prec;  // ground mode: (k1, k2) with k1 ≺ k2, sorted

    bool operator==(const State&) const = default;

    int max_key() const { return live.empty() ? 0 : live.back().key; }
    const Occ* find(int key) const;
    std::vector<int> history(int t) const;
    bool has_bond(int a, int b) const;
    std::vector<int> tokens_in(int place) const;
};

struct Component {
    std::vector<int> tokens;  // sorted
    std::vector<Bond> bonds;  // sorted
    bool operator==(const Component&) const = default;
};

// Tokens and bonds reachable from seed through bonds of the pool.
Component connected(int seed, const std::vector<int>& pool_tokens, const std::vector<Bond>& pool_bonds);

// Union-find style components over all tokens for a bond set.
std::vector<int> component_ids(int ntokens, const std::vector<Bond>& bonds);

State initial_state(const Net& net);

// Compact byte key used for deduplication.
std::string encode(const State& s);

// Human-readable forms.
std::string token_label(const Net& net, const State& s, int tok);
std::string marking_text(const Net& net, const State& s);
std::string history_text(const Net& net, const State& s);

// Bonds sorted set helpers.
void bonds_insert(std::vector<Bond>& v, Bond b);
void bonds_erase(std::vector<Bond>& v, Bond b);

}  // namespace rpn
