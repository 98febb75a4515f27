#include "relnet/sso.hpp"

#include <limits>
#include <stdexcept>

namespace relnet {

void SsoParams::validate() const {
    if (!(c_g >= 0.0 && c_g <= 1.0) || !(c_p >= 0.0 && c_p <= 1.0) ||
        !(c_w >= 0.0 && c_w <= 1.0))
        throw std::invalid_argument("sso params: probabilities must lie in [0,1]");
    if (c_g + c_p + c_w > 1.0)
        throw std::invalid_argument("sso params: c_g + c_p + c_w must not exceed 1");
}

Swarm init_swarm(int n_sol, int n_var, rng::Stream& stream) {
    if (n_sol < 1 || n_var < 1)
        throw std::invalid_argument("init_swarm: need at least one solution and one variable");
    Swarm swarm;
    swarm.x.assign(n_sol, std::vector<double>(n_var, 0.0));
    for (auto& solution : swarm.x)
        for (double& value : solution) value = stream.u01();
    swarm.p = swarm.x;
    swarm.fit_x.assign(n_sol, std::numeric_limits<double>::quiet_NaN());
    swarm.fit_p.assign(n_sol, std::numeric_limits<double>::quiet_NaN());
    swarm.fit_g = std::numeric_limits<double>::quiet_NaN();
    return swarm;
}

std::vector<double> update_solution(std::span<const double> x_vec,
                                    std::span<const double> p_vec,
                                    std::span<const double> g_vec, const SsoParams& params,
                                    rng::Stream& stream) {
    if (x_vec.size() != p_vec.size() || x_vec.size() != g_vec.size())
        throw std::invalid_argument("update_solution: vector length mismatch");
    params.validate();

    const double take_g = params.c_g;
    const double take_p = params.c_g + params.c_p;
    const double keep = params.c_g + params.c_p + params.c_w;

    std::vector<double> out(x_vec.size());
    for (std::size_t j = 0; j < x_vec.size(); ++j) {
        const double rho = stream.u01();
        if (rho < take_g)
            out[j] = g_vec[j];
        else if (rho < take_p)
            out[j] = p_vec[j];
        else if (rho < keep)
            out[j] = x_vec[j];
        else
            out[j] = stream.u01();
    }
    return out;
}

} // namespace relnet
