#pragma once

#include <span>
#include <vector>

#include "relnet/rng.hpp"
#include "relnet/ubcn.hpp"

namespace relnet {

// Simulation sizing. z_half_alpha is the upper alpha/2 standard normal
// quantile, pinned to 4 decimals (2.5758 for alpha = 0.01) so bound tables
// are bit-reproducible.
struct SimParams {
    int n_sim = 2000;
    int delta_n_sim = 100;
    double alpha = 0.01;
    double p_eps = 0.90;
    double z_half_alpha = 2.5758;

    int intervals() const { return n_sim / delta_n_sim; }
    void validate() const; // throws std::invalid_argument
};

// Per-interval decision boundaries for the early-stopping classifier.
// With variance v = p_eps*(1-p_eps) and interval endpoint N_i = i*delta_n_sim:
//
//   half_width[i] = z_half_alpha * (sqrt(v / N_i) - sqrt(v / n_sim))
//   lower[i]      = N_i * (theta - half_width[i])
//   upper[i]      = N_i * (theta + half_width[i])
//
// half_width is strictly decreasing and exactly 0 at the last interval, so
// lower == upper == n_sim*theta there and a decision is always forced.
struct BoundsTable {
    double theta = 0.0;
    SimParams params;
    std::vector<int> n_sim_i;
    std::vector<double> half_width;
    std::vector<double> lower;
    std::vector<double> upper;

    int intervals() const { return static_cast<int>(n_sim_i.size()); }
};

BoundsTable build_bounds(double theta, const SimParams& params);

struct ImcsOutcome {
    int predicted_class = 0;
    int sims_used = 0;      // multiple of delta_n_sim, <= n_sim
    int omega_at_stop = 0;  // accumulated success count at the decision
    bool final_tie = false; // forced final decision landed exactly on n_sim*theta
};

// Plain Monte Carlo estimate: success fraction over n_sim sampled states.
double mcs_estimate(const Topology& topo, const ReliabilityAssignment& assign, int n_sim,
                    rng::Stream& stream);

// Early-stopping classification: simulate in blocks of delta_n_sim and stop
// as soon as the accumulated success count crosses a bound. Class 0 below
// the lower bound, class 1 at or above the upper bound; upper is tested
// first so the forced final-interval tie resolves to class 1. Each block
// consumes exactly delta_n_sim*(n_var+n) draws, so a full-length run over a
// copy of the same stream reproduces identical per-simulation outcomes.
ImcsOutcome imcs_classify(ConnectivitySampler& sampler, std::span<const double> arc_rel,
                          std::span<const double> node_rel, const BoundsTable& bounds,
                          rng::Stream& stream, bool early_stop = true);

ImcsOutcome imcs_classify(const Topology& topo, std::span<const double> arc_rel,
                          std::span<const double> node_rel, const BoundsTable& bounds,
                          rng::Stream& stream);

// Reference decision without early stopping: always runs all n_sim
// simulations and decides at the forced final boundary.
ImcsOutcome mcs_classify_full(const Topology& topo, std::span<const double> arc_rel,
                              std::span<const double> node_rel, const BoundsTable& bounds,
                              rng::Stream& stream);

} // namespace relnet
