#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "relnet/rng.hpp"

namespace relnet {

// Undirected arc between two node ids. Attribute nodes are 0..n-1,
// the source is node n and the sink is node n+1.
struct Arc {
    int a;
    int b;
};

// Complete network over n attribute nodes plus source and sink. Arc order
// is canonical and stable: attribute pairs (j,k) with j<k in lexicographic
// order, then source->j arcs for j = 0..n-1, then j->sink arcs. There is no
// direct source-sink arc; source and sink are perfectly reliable.
class Topology {
public:
    explicit Topology(int n_attributes);

    int n() const { return n_; }
    int n_var() const { return static_cast<int>(arcs_.size()); }
    int source() const { return n_; }
    int sink() const { return n_ + 1; }
    const std::vector<Arc>& arcs() const { return arcs_; }

    // per node: (neighbor node id, arc index) pairs
    const std::vector<std::vector<std::pair<int, int>>>& adjacency() const {
        return adjacency_;
    }

private:
    int n_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

// Up/down snapshot of every component. Source and sink have no entry; they
// are always up.
struct ComponentState {
    std::vector<std::uint8_t> arc_up;
    std::vector<std::uint8_t> node_up;
};

struct ReliabilityAssignment {
    std::vector<double> arc_rel;
    std::vector<double> node_rel;
};

Topology build_topology(int n_attributes);

// True iff an up-path joins source and sink: every traversed arc is up and
// every intermediate attribute node is up.
bool is_connected(const Topology& topo, const ComponentState& state);

// Bernoulli draw per component, arcs first in canonical order, then
// attribute nodes ascending: exactly n_var + n draws from `stream`.
ComponentState sample_state(const Topology& topo, const ReliabilityAssignment& assign,
                            rng::Stream& stream);

// Exact two-terminal reliability by complete state enumeration (with
// subtree cutoff where connectivity is already decided). Enumeration
// oracle only: throws for n > 5.
double exact_reliability(const Topology& topo, const ReliabilityAssignment& assign);

inline constexpr int kMaxExactNodes = 5;

// Scratch-reusing sampler for the simulation hot loop: one sampled state
// plus connectivity test per call, no allocation after construction.
// Consumes exactly n_var + n draws per call, same order as sample_state.
class ConnectivitySampler {
public:
    explicit ConnectivitySampler(const Topology& topo);

    bool sample_and_test(std::span<const double> arc_rel,
                         std::span<const double> node_rel, rng::Stream& stream);

private:
    const Topology* topo_;
    ComponentState state_;
    std::vector<int> queue_;
    std::vector<std::uint8_t> visited_;
};

} // namespace relnet
