#ifndef ROF_ENERGY_HPP
#define ROF_ENERGY_HPP

#include "rof/grid.hpp"

namespace rof {

struct EnergyParams {
    double epsilon = 1.0; ///< smoothing of the variation integrand, > 0
    double lambda = 30.0; ///< fidelity weight, > 0

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("EnergyParams: epsilon must be > 0");
        if (!(lambda > 0.0)) throw std::invalid_argument("EnergyParams: lambda must be > 0");
    }
};

/// sum_{i,j} sqrt(epsilon + |grad+- u|^2) h^2, one-sided gradients.
double variation_forward(const GridFunction& u, double epsilon);
double variation_backward(const GridFunction& u, double epsilon);

/// Discrete objective: half of each one-sided variation plus the
/// 1/(2 lambda) misfit against f, all h^2-weighted.
double J_h(const GridFunction& u, const GridFunction& f, const EnergyParams& params);

/// Per-step energy: J_h plus the proximity term |v - u_prev|^2 / (2 dt).
double E_h(const GridFunction& v, const GridFunction& u_prev, const GridFunction& f,
           const EnergyParams& params, double dt);

/// Gradient of J_h with respect to the h^2-weighted inner product:
/// -1/2 div+(grad+ u / sqrt(eps+|grad+ u|^2)) - 1/2 div-(...) + (u-f)/lambda,
/// returned per cell.
GridFunction subgrad_Jh(const GridFunction& u, const GridFunction& f, const EnergyParams& params);

/// Left-hand side of the step-optimality inequality, h^2-weighted:
/// <(u_k - u_prev)/dt, v - u_k> + J_h(v) - J_h(u_k).
/// Non-negative for every v when u_k solves the implicit step.
double characterization_gap(const GridFunction& u_k, const GridFunction& u_prev,
                            const GridFunction& v, const GridFunction& f,
                            const EnergyParams& params, double dt);

} // namespace rof

#endif
