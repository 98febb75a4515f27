#pragma once

#include <span>
#include <vector>

#include "relnet/rng.hpp"

namespace relnet {

// Step-function probabilities: copy the global best with c_g, the personal
// best with c_p, keep the current value with c_w, otherwise redraw
// uniformly from [0,1].
struct SsoParams {
    double c_g = 0.4;
    double c_p = 0.2;
    double c_w = 0.1;

    void validate() const; // throws std::invalid_argument
};

// Flat swarm storage driven by the training loop: current solutions X,
// personal bests P, global best G and their recorded fitness values.
struct Swarm {
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> p;
    std::vector<double> fit_x;
    std::vector<double> fit_p;
    std::vector<double> g;
    double fit_g = 0.0;

    int n_sol() const { return static_cast<int>(x.size()); }
    int n_var() const { return x.empty() ? 0 : static_cast<int>(x.front().size()); }
};

// Every variable drawn uniformly from [0,1); personal bests start as copies
// of the initial solutions. Fitness values are set by the first evaluation.
// Draw order: solutions ascending, variables ascending within a solution.
Swarm init_swarm(int n_sol, int n_var, rng::Stream& stream);

// One fresh uniform rho per variable selects the branch; the random
// replacement branch consumes one further draw.
std::vector<double> update_solution(std::span<const double> x_vec,
                                    std::span<const double> p_vec,
                                    std::span<const double> g_vec, const SsoParams& params,
                                    rng::Stream& stream);

} // namespace relnet
