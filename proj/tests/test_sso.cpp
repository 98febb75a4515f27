#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "relnet/sso.hpp"

using namespace relnet;

TEST_CASE("sso params validate ranges and total mass") {
    CHECK_NOTHROW(SsoParams{}.validate());
    SsoParams bad;
    bad.c_g = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = SsoParams{};
    bad.c_w = 0.5; // 0.4 + 0.2 + 0.5 > 1
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = SsoParams{0.5, 0.3, 0.2}; // sums to exactly 1
    CHECK_NOTHROW(bad.validate());
}

TEST_CASE("swarm initialization fills every variable uniformly") {
    rng::Stream stream(1001);
    const Swarm swarm = init_swarm(10, 14, stream);
    CHECK(swarm.n_sol() == 10);
    CHECK(swarm.n_var() == 14);
    REQUIRE(swarm.p.size() == 10);
    for (int s = 0; s < 10; ++s) {
        for (double v : swarm.x[s]) {
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
        }
        CHECK(swarm.x[s] == swarm.p[s]); // personal bests start as copies
    }

    rng::Stream replay(1001);
    const Swarm again = init_swarm(10, 14, replay);
    CHECK(swarm.x == again.x);

    rng::Stream small(1);
    CHECK_THROWS_AS(init_swarm(0, 5, small), std::invalid_argument);
    CHECK_THROWS_AS(init_swarm(5, 0, small), std::invalid_argument);
}

TEST_CASE("degenerate step parameters force single branches") {
    const std::vector<double> x = {0.11, 0.22, 0.33};
    const std::vector<double> p = {0.44, 0.55, 0.66};
    const std::vector<double> g = {0.77, 0.88, 0.99};

    SUBCASE("c_g = 1 always copies the global best") {
        rng::Stream stream(3);
        CHECK(update_solution(x, p, g, SsoParams{1.0, 0.0, 0.0}, stream) == g);
    }
    SUBCASE("c_p = 1 always copies the personal best") {
        rng::Stream stream(3);
        CHECK(update_solution(x, p, g, SsoParams{0.0, 1.0, 0.0}, stream) == p);
    }
    SUBCASE("c_w = 1 is the identity") {
        rng::Stream stream(3);
        CHECK(update_solution(x, p, g, SsoParams{0.0, 0.0, 1.0}, stream) == x);
    }
    SUBCASE("all zero masses always redraw") {
        rng::Stream stream(3);
        const auto out = update_solution(x, p, g, SsoParams{0.0, 0.0, 0.0}, stream);
        for (std::size_t j = 0; j < out.size(); ++j) {
            CHECK(out[j] != x[j]);
            CHECK(out[j] != p[j]);
            CHECK(out[j] != g[j]);
            CHECK(out[j] >= 0.0);
            CHECK(out[j] <= 1.0);
        }
    }
}

TEST_CASE("branch frequencies follow (c_g, c_p, c_w, rest) at defaults") {
    const int n_var = 40000;
    // distinct sentinel values identify which branch produced each output
    const std::vector<double> x(n_var, 0.125);
    const std::vector<double> p(n_var, 0.5);
    const std::vector<double> g(n_var, 0.875);
    rng::Stream stream(777);
    const auto out = update_solution(x, p, g, SsoParams{}, stream);

    int from_g = 0, from_p = 0, kept = 0, fresh = 0;
    for (double v : out) {
        if (v == 0.875)
            ++from_g;
        else if (v == 0.5)
            ++from_p;
        else if (v == 0.125)
            ++kept;
        else
            ++fresh;
    }
    const auto band = [&](int count, double prob) {
        const double sigma = std::sqrt(n_var * prob * (1 - prob));
        CHECK(std::abs(count - n_var * prob) <= 3 * sigma);
    };
    band(from_g, 0.4);
    band(from_p, 0.2);
    band(kept, 0.1);
    band(fresh, 0.3);
}

TEST_CASE("updates stay inside the unit cube and replay deterministically") {
    rng::Stream setup(55);
    const Swarm swarm = init_swarm(3, 20, setup);
    rng::Stream a(66), b(66);
    const auto out_a = update_solution(swarm.x[0], swarm.p[1], swarm.x[2], SsoParams{}, a);
    const auto out_b = update_solution(swarm.x[0], swarm.p[1], swarm.x[2], SsoParams{}, b);
    CHECK(out_a == out_b);
    for (double v : out_a) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("mismatched vector lengths are rejected") {
    const std::vector<double> x(4, 0.1), p(4, 0.2), g(3, 0.3);
    rng::Stream stream(9);
    CHECK_THROWS_AS(update_solution(x, p, g, SsoParams{}, stream), std::invalid_argument);
}
