#include "relnet/reliability.hpp"

#include <cmath>
#include <stdexcept>

namespace relnet {

void SimParams::validate() const {
    if (n_sim < 1 || delta_n_sim < 1)
        throw std::invalid_argument("sim params: counts must be positive");
    if (n_sim % delta_n_sim != 0)
        throw std::invalid_argument("sim params: n_sim must be divisible by delta_n_sim");
    if (!(p_eps > 0.0 && p_eps < 1.0))
        throw std::invalid_argument("sim params: p_eps must lie in (0,1)");
    if (!(z_half_alpha > 0.0))
        throw std::invalid_argument("sim params: z_half_alpha must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("sim params: alpha must lie in (0,1)");
}

BoundsTable build_bounds(double theta, const SimParams& params) {
    params.validate();
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("build_bounds: theta must lie in [0,1]");

    BoundsTable table;
    table.theta = theta;
    table.params = params;
    const int m = params.intervals();
    table.n_sim_i.reserve(m);
    table.half_width.reserve(m);
    table.lower.reserve(m);
    table.upper.reserve(m);

    const double v = params.p_eps * (1.0 - params.p_eps);
    const double tail = std::sqrt(v / params.n_sim);
    for (int i = 1; i <= m; ++i) {
        const int n_i = i * params.delta_n_sim;
        const double hw = params.z_half_alpha * (std::sqrt(v / n_i) - tail);
        table.n_sim_i.push_back(n_i);
        table.half_width.push_back(hw);
        table.lower.push_back(n_i * (theta - hw));
        table.upper.push_back(n_i * (theta + hw));
    }
    return table;
}

double mcs_estimate(const Topology& topo, const ReliabilityAssignment& assign, int n_sim,
                    rng::Stream& stream) {
    if (n_sim < 1) throw std::invalid_argument("mcs_estimate: n_sim must be positive");
    ConnectivitySampler sampler(topo);
    long long successes = 0;
    for (int t = 0; t < n_sim; ++t)
        successes += sampler.sample_and_test(assign.arc_rel, assign.node_rel, stream) ? 1 : 0;
    return static_cast<double>(successes) / n_sim;
}

ImcsOutcome imcs_classify(ConnectivitySampler& sampler, std::span<const double> arc_rel,
                          std::span<const double> node_rel, const BoundsTable& bounds,
                          rng::Stream& stream, bool early_stop) {
    const int m = bounds.intervals();
    const int block = bounds.params.delta_n_sim;
    int omega = 0;
    for (int i = 0; i < m; ++i) {
        int hits = 0;
        for (int t = 0; t < block; ++t)
            hits += sampler.sample_and_test(arc_rel, node_rel, stream) ? 1 : 0;
        omega += hits;

        const bool last = (i + 1 == m);
        if (!early_stop && !last) continue;

        const double w = omega;
        if (w >= bounds.upper[i])
            return {1, bounds.n_sim_i[i], omega, last && w == bounds.lower[i]};
        if (w <= bounds.lower[i]) return {0, bounds.n_sim_i[i], omega, false};
    }
    // not reached: the final interval has lower == upper
    return {0, bounds.params.n_sim, omega, false};
}

ImcsOutcome imcs_classify(const Topology& topo, std::span<const double> arc_rel,
                          std::span<const double> node_rel, const BoundsTable& bounds,
                          rng::Stream& stream) {
    ConnectivitySampler sampler(topo);
    return imcs_classify(sampler, arc_rel, node_rel, bounds, stream, true);
}

ImcsOutcome mcs_classify_full(const Topology& topo, std::span<const double> arc_rel,
                              std::span<const double> node_rel, const BoundsTable& bounds,
                              rng::Stream& stream) {
    ConnectivitySampler sampler(topo);
    return imcs_classify(sampler, arc_rel, node_rel, bounds, stream, false);
}

} // namespace relnet
