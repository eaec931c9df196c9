#include "rof/energy.hpp"

#include <cmath>

namespace rof {

namespace {

double variation_of(const VectorField& g, int n, double epsilon) {
    double s = 0.0;
    const std::size_t m = static_cast<std::size_t>(n) * n;
    for (std::size_t k = 0; k < m; ++k) s += std::sqrt(epsilon + g.px[k] * g.px[k] + g.py[k] * g.py[k]);
    const double h = 1.0 / n;
    return s * h * h;
}

} // namespace

double variation_forward(const GridFunction& u, double epsilon) {
    return variation_of(grad_forward(u), u.n(), epsilon);
}

double variation_backward(const GridFunction& u, double epsilon) {
    return variation_of(grad_backward(u), u.n(), epsilon);
}

double J_h(const GridFunction& u, const GridFunction& f, const EnergyParams& params) {
    if (u.n() != f.n()) throw std::invalid_argument("J_h: incompatible grids");
    params.validate();
    double misfit = 0.0;
    const auto& a = u.values();
    const auto& b = f.values();
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        misfit += d * d;
    }
    const double h = u.h();
    return 0.5 * variation_forward(u, params.epsilon) + 0.5 * variation_backward(u, params.epsilon) +
           misfit * h * h / (2.0 * params.lambda);
}

double E_h(const GridFunction& v, const GridFunction& u_prev, const GridFunction& f,
           const EnergyParams& params, double dt) {
    if (v.n() != u_prev.n()) throw std::invalid_argument("E_h: incompatible grids");
    if (!(dt > 0.0)) throw std::invalid_argument("E_h: dt must be > 0");
    double prox = 0.0;
    const auto& a = v.values();
    const auto& b = u_prev.values();
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        prox += d * d;
    }
    const double h = v.h();
    return J_h(v, f, params) + prox * h * h / (2.0 * dt);
}

GridFunction subgrad_Jh(const GridFunction& u, const GridFunction& f, const EnergyParams& params) {
    if (u.n() != f.n()) throw std::invalid_argument("subgrad_Jh: incompatible grids");
    params.validate();
    const int n = u.n();
    VectorField gp = grad_forward(u);
    VectorField gm = grad_backward(u);
    const std::size_t m = static_cast<std::size_t>(n) * n;
    for (std::size_t k = 0; k < m; ++k) {
        const double dp = std::sqrt(params.epsilon + gp.px[k] * gp.px[k] + gp.py[k] * gp.py[k]);
        gp.px[k] /= dp;
        gp.py[k] /= dp;
        const double dm = std::sqrt(params.epsilon + gm.px[k] * gm.px[k] + gm.py[k] * gm.py[k]);
        gm.px[k] /= dm;
        gm.py[k] /= dm;
    }
    GridFunction dp = div_forward(gp);
    GridFunction dm = div_backward(gm);
    GridFunction out(n);
    for (std::size_t k = 0; k < m; ++k)
        out.values()[k] = -0.5 * dp.values()[k] - 0.5 * dm.values()[k] +
                          (u.values()[k] - f.values()[k]) / params.lambda;
    return out;
}

double characterization_gap(const GridFunction& u_k, const GridFunction& u_prev,
                            const GridFunction& v, const GridFunction& f,
                            const EnergyParams& params, double dt) {
    if (u_k.n() != u_prev.n() || u_k.n() != v.n() || u_k.n() != f.n())
        throw std::invalid_argument("characterization_gap: incompatible grids");
    if (!(dt > 0.0)) throw std::invalid_argument("characterization_gap: dt must be > 0");
    double dot = 0.0;
    const auto& uk = u_k.values();
    const auto& up = u_prev.values();
    const auto& vv = v.values();
    for (std::size_t k = 0; k < uk.size(); ++k) dot += (uk[k] - up[k]) * (vv[k] - uk[k]);
    const double h = u_k.h();
    return dot * h * h / dt + J_h(v, f, params) - J_h(u_k, f, params);
}

} // namespace rof
