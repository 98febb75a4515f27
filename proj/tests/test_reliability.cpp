#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "relnet/reliability.hpp"

using namespace relnet;

namespace {

// n=1 network whose reliability equals the single node's value.
struct SeriesNet {
    Topology topo{1};
    ReliabilityAssignment assign;

    explicit SeriesNet(double r) {
        assign.arc_rel = {1.0, 1.0};
        assign.node_rel = {r};
    }
};

} // namespace

TEST_CASE("sim params validate their shape") {
    SimParams params;
    CHECK_NOTHROW(params.validate());
    CHECK(params.intervals() == 20);

    SimParams bad = params;
    bad.delta_n_sim = 300; // 2000 not divisible
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = params;
    bad.p_eps = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = params;
    bad.n_sim = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = params;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("bounds table at defaults, theta = 0.5") {
    const BoundsTable bounds = build_bounds(0.5, SimParams{});
    REQUIRE(bounds.intervals() == 20);
    CHECK(bounds.n_sim_i.front() == 100);
    CHECK(bounds.n_sim_i.back() == 2000);

    // frozen values computed independently from the half-width formula
    CHECK(bounds.half_width[0] == doctest::Approx(0.059995008310668126).epsilon(1e-12));
    CHECK(bounds.lower[0] == doctest::Approx(44.00049916893319).epsilon(1e-12));
    CHECK(bounds.upper[0] == doctest::Approx(55.99950083106682).epsilon(1e-12));

    // the final interval forces a decision: no slack left at n_sim
    CHECK(bounds.half_width.back() == 0.0);
    CHECK(bounds.lower.back() == bounds.upper.back());
    CHECK(bounds.lower.back() == 2000 * 0.5);

    for (int i = 0; i + 1 < bounds.intervals(); ++i) {
        CHECK(bounds.half_width[i] > bounds.half_width[i + 1]);
        CHECK(bounds.lower[i] < bounds.upper[i]);
    }
}

TEST_CASE("bounds table at defaults, theta = 0.6") {
    const BoundsTable bounds = build_bounds(0.6, SimParams{});
    CHECK(bounds.half_width[4] == doctest::Approx(0.017278991689331873).epsilon(1e-12));
    CHECK(bounds.lower[4] == doctest::Approx(291.36050415533407).epsilon(1e-12));
    CHECK(bounds.upper[4] == doctest::Approx(308.63949584466593).epsilon(1e-12));
    CHECK(bounds.lower.back() == 2000 * 0.6);
}

TEST_CASE("mcs_estimate nails degenerate networks and calibrates otherwise") {
    rng::Stream stream(11);
    SeriesNet sure(1.0);
    CHECK(mcs_estimate(sure.topo, sure.assign, 500, stream) == 1.0);
    SeriesNet never(0.0);
    CHECK(mcs_estimate(never.topo, never.assign, 500, stream) == 0.0);

    SeriesNet half(0.5); // exact reliability 0.5
    const double estimate = mcs_estimate(half.topo, half.assign, 2000, stream);
    CHECK(std::abs(estimate - 0.5) < 0.04); // ~3.6 sigma
}

TEST_CASE("early stopping decides extreme networks at the first interval") {
    const BoundsTable bounds = build_bounds(0.5, SimParams{});

    SeriesNet high(0.95);
    ConnectivitySampler sampler(high.topo);
    rng::Stream stream(21);
    const ImcsOutcome up =
        imcs_classify(sampler, high.assign.arc_rel, high.assign.node_rel, bounds, stream);
    CHECK(up.predicted_class == 1);
    CHECK(up.sims_used == 100);
    CHECK(up.omega_at_stop >= bounds.upper[0]);
    CHECK_FALSE(up.final_tie);

    SeriesNet low(0.05);
    rng::Stream stream2(22);
    const ImcsOutcome down = imcs_classify(low.topo, low.assign.arc_rel,
                                           low.assign.node_rel, bounds, stream2);
    CHECK(down.predicted_class == 0);
    CHECK(down.sims_used == 100);
}

TEST_CASE("full-length runs and early stops replay the same stream") {
    const BoundsTable bounds = build_bounds(0.5, SimParams{});
    SeriesNet net(0.52);
    rng::Stream a(17), b(17), c(17);

    const ImcsOutcome full = mcs_classify_full(net.topo, net.assign.arc_rel,
                                               net.assign.node_rel, bounds, a);
    CHECK(full.sims_used == 2000);

    // the full run's success count equals n_sim times the plain estimate
    const double estimate = mcs_estimate(net.topo, net.assign, 2000, b);
    CHECK(full.omega_at_stop == static_cast<int>(std::llround(estimate * 2000)));

    // disabling early stopping in the classifier is exactly the full run
    ConnectivitySampler sampler(net.topo);
    const ImcsOutcome no_stop = imcs_classify(sampler, net.assign.arc_rel,
                                              net.assign.node_rel, bounds, c,
                                              /*early_stop=*/false);
    CHECK(no_stop.predicted_class == full.predicted_class);
    CHECK(no_stop.sims_used == full.sims_used);
    CHECK(no_stop.omega_at_stop == full.omega_at_stop);
}

TEST_CASE("the forced final tie resolves to class 1") {
    // single-interval table: the first interval is the last, so lower ==
    // upper == n_sim/2 and any run ends in a forced decision
    SimParams params;
    params.n_sim = 100;
    params.delta_n_sim = 100;
    const BoundsTable bounds = build_bounds(0.5, params);
    REQUIRE(bounds.intervals() == 1);
    REQUIRE(bounds.lower[0] == 50.0);
    REQUIRE(bounds.upper[0] == 50.0);

    SeriesNet net(0.5);
    ConnectivitySampler sampler(net.topo);

    // scan for a seed whose 100 draws contain exactly 50 successes; the
    // scan is deterministic, so the test always exercises the tie branch
    bool found = false;
    for (std::uint64_t seed = 0; seed < 2000 && !found; ++seed) {
        rng::Stream probe(seed);
        const double estimate = mcs_estimate(net.topo, net.assign, 100, probe);
        if (estimate != 0.5) continue;
        found = true;
        rng::Stream stream(seed);
        const ImcsOutcome outcome = imcs_classify(sampler, net.assign.arc_rel,
                                                  net.assign.node_rel, bounds, stream);
        CHECK(outcome.predicted_class == 1); // upper bound tested first
        CHECK(outcome.final_tie);
        CHECK(outcome.omega_at_stop == 50);
    }
    REQUIRE(found);
}

TEST_CASE("omega at an early stop counts only the simulations actually run") {
    const BoundsTable bounds = build_bounds(0.5, SimParams{});
    SeriesNet net(0.9);
    ConnectivitySampler sampler(net.topo);
    rng::Stream a(33), b(33);
    const ImcsOutcome outcome =
        imcs_classify(sampler, net.assign.arc_rel, net.assign.node_rel, bounds, a);
    const double partial = mcs_estimate(net.topo, net.assign, outcome.sims_used, b);
    CHECK(outcome.omega_at_stop ==
          static_cast<int>(std::llround(partial * outcome.sims_used)));
}
