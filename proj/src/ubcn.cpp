#include "relnet/ubcn.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace relnet {

Topology::Topology(int n_attributes) : n_(n_attributes) {
    if (n_ < 1) throw std::invalid_argument("topology requires at least one attribute node");

    arcs_.reserve(static_cast<std::size_t>(n_) * (n_ - 1) / 2 + 2 * n_);
    for (int j = 0; j < n_; ++j)
        for (int k = j + 1; k < n_; ++k) arcs_.push_back({j, k});
    for (int j = 0; j < n_; ++j) arcs_.push_back({source(), j});
    for (int j = 0; j < n_; ++j) arcs_.push_back({j, sink()});

    adjacency_.resize(n_ + 2);
    for (int idx = 0; idx < n_var(); ++idx) {
        const Arc& arc = arcs_[idx];
        adjacency_[arc.a].push_back({arc.b, idx});
        adjacency_[arc.b].push_back({arc.a, idx});
    }
}

Topology build_topology(int n_attributes) { return Topology(n_attributes); }

namespace {

void check_sizes(const Topology& topo, std::size_t n_arc_vals, std::size_t n_node_vals,
                 const char* what) {
    if (n_arc_vals != static_cast<std::size_t>(topo.n_var()) ||
        n_node_vals != static_cast<std::size_t>(topo.n()))
        throw std::invalid_argument(std::string(what) + ": size does not match topology");
}

// BFS from source; ArcUp/NodeUp are callables over component indices.
template <class ArcUp, class NodeUp>
bool bfs_connected(const Topology& topo, ArcUp&& arc_up, NodeUp&& node_up,
                   std::vector<std::uint8_t>& visited, std::vector<int>& queue) {
    const int src = topo.source();
    const int snk = topo.sink();
    std::fill(visited.begin(), visited.end(), std::uint8_t{0});
    int head = 0;
    int tail = 0;
    queue[tail++] = src;
    visited[src] = 1;
    while (head < tail) {
        const int u = queue[head++];
        for (const auto& [v, arc] : topo.adjacency()[u]) {
            if (!arc_up(arc) || visited[v]) continue;
            if (v == snk) return true;
            if (v < topo.n() && !node_up(v)) continue;
            visited[v] = 1;
            queue[tail++] = v;
        }
    }
    return false;
}

} // namespace

bool is_connected(const Topology& topo, const ComponentState& state) {
    check_sizes(topo, state.arc_up.size(), state.node_up.size(), "is_connected");
    std::vector<std::uint8_t> visited(topo.n() + 2, 0);
    std::vector<int> queue(topo.n() + 2, 0);
    return bfs_connected(
        topo, [&](int a) { return state.arc_up[a] != 0; },
        [&](int v) { return state.node_up[v] != 0; }, visited, queue);
}

ComponentState sample_state(const Topology& topo, const ReliabilityAssignment& assign,
                            rng::Stream& stream) {
    check_sizes(topo, assign.arc_rel.size(), assign.node_rel.size(), "sample_state");
    ComponentState state;
    state.arc_up.resize(topo.n_var());
    state.node_up.resize(topo.n());
    for (int a = 0; a < topo.n_var(); ++a)
        state.arc_up[a] = stream.bernoulli(assign.arc_rel[a]) ? 1 : 0;
    for (int v = 0; v < topo.n(); ++v)
        state.node_up[v] = stream.bernoulli(assign.node_rel[v]) ? 1 : 0;
    return state;
}

namespace {

// Component indices: arcs 0..n_var-1, then attribute nodes n_var..n_var+n-1.
class ExactEnumerator {
public:
    ExactEnumerator(const Topology& topo, const ReliabilityAssignment& assign)
        : topo_(topo),
          assign_(assign),
          n_var_(topo.n_var()),
          total_(topo.n_var() + topo.n()),
          value_(total_, 0),
          visited_(topo.n() + 2, 0),
          queue_(topo.n() + 2, 0) {}

    double run() { return descend(0, 1.0); }

private:
    double rel(int c) const {
        return c < n_var_ ? assign_.arc_rel[c] : assign_.node_rel[c - n_var_];
    }

    // connectivity with components < depth taken from value_, the rest
    // assumed `fill`
    bool connected_with(int depth, std::uint8_t fill) {
        auto comp = [&](int c) { return c < depth ? value_[c] != 0 : fill != 0; };
        return bfs_connected(
            topo_, [&](int a) { return comp(a); },
            [&](int v) { return comp(n_var_ + v); }, visited_, queue_);
    }

    double descend(int depth, double prob) {
        if (prob == 0.0) return 0.0;
        if (connected_with(depth, 0)) return prob;       // connected however the rest falls
        if (!connected_with(depth, 1)) return 0.0;       // disconnected even with all up
        const double p = rel(depth);
        double sum = 0.0;
        if (p > 0.0) {
            value_[depth] = 1;
            sum += descend(depth + 1, prob * p);
        }
        if (p < 1.0) {
            value_[depth] = 0;
            sum += descend(depth + 1, prob * (1.0 - p));
        }
        return sum;
    }

    const Topology& topo_;
    const ReliabilityAssignment& assign_;
    int n_var_;
    int total_;
    std::vector<std::uint8_t> value_;
    std::vector<std::uint8_t> visited_;
    std::vector<int> queue_;
};

} // namespace

double exact_reliability(const Topology& topo, const ReliabilityAssignment& assign) {
    if (topo.n() > kMaxExactNodes)
        throw std::invalid_argument("exact_reliability: enumeration limited to n <= " +
                                    std::to_string(kMaxExactNodes));
    check_sizes(topo, assign.arc_rel.size(), assign.node_rel.size(), "exact_reliability");
    for (double p : assign.arc_rel)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("exact_reliability: arc reliability outside [0,1]");
    for (double p : assign.node_rel)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("exact_reliability: node reliability outside [0,1]");
    return ExactEnumerator(topo, assign).run();
}

ConnectivitySampler::ConnectivitySampler(const Topology& topo)
    : topo_(&topo), queue_(topo.n() + 2, 0), visited_(topo.n() + 2, 0) {
    state_.arc_up.resize(topo.n_var());
    state_.node_up.resize(topo.n());
}

bool ConnectivitySampler::sample_and_test(std::span<const double> arc_rel,
                                          std::span<const double> node_rel,
                                          rng::Stream& stream) {
    const Topology& topo = *topo_;
    const int m = topo.n_var();
    const int n = topo.n();
    for (int a = 0; a < m; ++a) state_.arc_up[a] = stream.bernoulli(arc_rel[a]) ? 1 : 0;
    for (int v = 0; v < n; ++v) state_.node_up[v] = stream.bernoulli(node_rel[v]) ? 1 : 0;
    return bfs_connected(
        topo, [&](int a) { return state_.arc_up[a] != 0; },
        [&](int v) { return state_.node_up[v] != 0; }, visited_, queue_);
}

} // namespace relnet
