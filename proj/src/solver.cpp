#include "rof/solver.hpp"

#include <cmath>
#include <sstream>

namespace rof {

void SolverConfig::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("SolverConfig: lambda must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be > 0");
    if (steps < 1) throw std::invalid_argument("SolverConfig: steps must be >= 1");
    if (!(tol_inner > 0.0 && tol_inner < 1.0))
        throw std::invalid_argument("SolverConfig: tol_inner must be in (0, 1)");
    if (max_inner < 1) throw std::invalid_argument("SolverConfig: max_inner must be >= 1");
    if (!(cg_tol > 0.0)) throw std::invalid_argument("SolverConfig: cg_tol must be > 0");
    if (cg_tol > tol_inner / 10.0)
        throw std::invalid_argument("SolverConfig: cg_tol must be <= tol_inner/10");
    if (cg_max_iters < 1) throw std::invalid_argument("SolverConfig: cg_max_iters must be >= 1");
}

std::pair<VectorField, VectorField> assemble_weights(const GridFunction& v, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("assemble_weights: epsilon must be > 0");
    const int n = v.n();
    VectorField wp(n), wm(n);
    VectorField g(n);
    grad_forward_into(v, g);
    const std::size_t m = static_cast<std::size_t>(n) * n;
    for (std::size_t k = 0; k < m; ++k) {
        const double w = 1.0 / std::sqrt(epsilon + g.px[k] * g.px[k] + g.py[k] * g.py[k]);
        wp.px[k] = w;
        wp.py[k] = w;
    }
    grad_backward_into(v, g);
    for (std::size_t k = 0; k < m; ++k) {
        const double w = 1.0 / std::sqrt(epsilon + g.px[k] * g.px[k] + g.py[k] * g.py[k]);
        wm.px[k] = w;
        wm.py[k] = w;
    }
    return {std::move(wp), std::move(wm)};
}

namespace {

// SPD operator (1/dt + 1/lambda) I + 1/2 Grad+^T W+ Grad+ + 1/2 Grad-^T W- Grad-
// with preallocated scratch so the CG loop does not allocate.
class LinearizedOp {
public:
    LinearizedOp(const VectorField& wp, const VectorField& wm, double lambda, double dt)
        : wp_(wp), wm_(wm), c_(1.0 / dt + 1.0 / lambda), g_(wp.n), div_(wp.n) {}

    void apply(const GridFunction& v, GridFunction& out) {
        const std::size_t m = v.values().size();
        grad_forward_into(v, g_);
        for (std::size_t k = 0; k < m; ++k) {
            g_.px[k] *= wp_.px[k];
            g_.py[k] *= wp_.py[k];
        }
        div_forward_into(g_, div_);
        for (std::size_t k = 0; k < m; ++k)
            out.values()[k] = c_ * v.values()[k] - 0.5 * div_.values()[k];
        grad_backward_into(v, g_);
        for (std::size_t k = 0; k < m; ++k) {
            g_.px[k] *= wm_.px[k];
            g_.py[k] *= wm_.py[k];
        }
        div_backward_into(g_, div_);
        for (std::size_t k = 0; k < m; ++k) out.values()[k] -= 0.5 * div_.values()[k];
    }

private:
    const VectorField& wp_;
    const VectorField& wm_;
    double c_;
    VectorField g_;
    GridFunction div_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

} // namespace

GridFunction apply_linearized(const GridFunction& v, const VectorField& w_plus,
                              const VectorField& w_minus, double lambda, double dt) {
    if (v.n() != w_plus.n || v.n() != w_minus.n)
        throw std::invalid_argument("apply_linearized: incompatible grids");
    GridFunction out(v.n());
    LinearizedOp op(w_plus, w_minus, lambda, dt);
    op.apply(v, out);
    return out;
}

GridFunction solve_inner_linear(const GridFunction& rhs, const VectorField& w_plus,
                                const VectorField& w_minus, const SolverConfig& cfg,
                                const GridFunction* warm_start) {
    cfg.validate();
    if (rhs.n() != w_plus.n || rhs.n() != w_minus.n)
        throw std::invalid_argument("solve_inner_linear: incompatible grids");
    const int n = rhs.n();
    const std::size_t m = rhs.values().size();

    const double rhs_norm = std::sqrt(dot(rhs.values(), rhs.values()));
    GridFunction x = warm_start ? *warm_start : GridFunction(n);
    if (rhs_norm == 0.0) return GridFunction(n);

    LinearizedOp op(w_plus, w_minus, cfg.lambda, cfg.dt);
    GridFunction r(n), p(n), ap(n);
    op.apply(x, ap);
    for (std::size_t k = 0; k < m; ++k) r.values()[k] = rhs.values()[k] - ap.values()[k];
    p = r;
    double rr = dot(r.values(), r.values());
    const double target = cfg.cg_tol * rhs_norm;

    for (int it = 0; it < cfg.cg_max_iters; ++it) {
        if (std::sqrt(rr) <= target) return x;
        op.apply(p, ap);
        const double alpha = rr / dot(p.values(), ap.values());
        for (std::size_t k = 0; k < m; ++k) {
            x.values()[k] += alpha * p.values()[k];
            r.values()[k] -= alpha * ap.values()[k];
        }
        const double rr_new = dot(r.values(), r.values());
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t k = 0; k < m; ++k) p.values()[k] = r.values()[k] + beta * p.values()[k];
    }
    if (std::sqrt(rr) <= target) return x;
    std::ostringstream msg;
    msg << "solve_inner_linear: no convergence in " << cfg.cg_max_iters
        << " iterations, relative residual " << std::sqrt(rr) / rhs_norm;
    throw SolveError(msg.str(), std::sqrt(rr) / rhs_norm);
}

std::pair<GridFunction, StepDiagnostics> fixed_point_step(const GridFunction& u_prev,
                                                          const GridFunction& f,
                                                          const SolverConfig& cfg) {
    cfg.validate();
    if (u_prev.n() != f.n()) throw std::invalid_argument("fixed_point_step: incompatible grids");
    const int n = u_prev.n();
    const std::size_t m = u_prev.values().size();
    const EnergyParams params = cfg.energy();

    GridFunction rhs(n);
    for (std::size_t k = 0; k < m; ++k)
        rhs.values()[k] = u_prev.values()[k] / cfg.dt + f.values()[k] / cfg.lambda;

    StepDiagnostics diag;
    GridFunction v = u_prev;
    double energy_prev = E_h(v, u_prev, f, params, cfg.dt);

    for (int iter = 1; iter <= cfg.max_inner; ++iter) {
        auto [wp, wm] = assemble_weights(v, cfg.epsilon);
        GridFunction v_next = solve_inner_linear(rhs, wp, wm, cfg, &v);

        double diff_sq = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double d = v_next.values()[k] - v.values()[k];
            diff_sq += d * d;
        }
        const double h = u_prev.h();
        const double step_norm = std::sqrt(diff_sq * h * h);

        const double energy_next = E_h(v_next, u_prev, f, params, cfg.dt);
        const double decrement = energy_prev - energy_next;
        diag.energy_decrements.push_back(decrement);
        diag.inner_step_norms.push_back(step_norm);

        // floating-point slack scales with the energy magnitude
        const double slack = std::max(1e-10, 1e-12 * (1.0 + std::abs(energy_prev)));
        if (decrement < step_norm * step_norm / (2.0 * cfg.lambda) - slack) {
            std::ostringstream msg;
            msg << "fixed_point_step: energy decrease bound violated at inner pass " << iter
                << " (decrement " << decrement << ", bound "
                << step_norm * step_norm / (2.0 * cfg.lambda) << ")";
            throw NumericalError(msg.str());
        }

        v = std::move(v_next);
        energy_prev = energy_next;
        diag.inner_iterations = iter;

        if (step_norm <= cfg.tol_inner) {
            diag.energy_J = J_h(v, f, params);
            diag.energy_E = energy_next;
            double dn = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double d = v.values()[k] - u_prev.values()[k];
                dn += d * d;
            }
            diag.step_norm = std::sqrt(dn * h * h);
            diag.residual_inf = step_residual(v, u_prev, f, cfg);
            return {std::move(v), std::move(diag)};
        }
    }
    std::ostringstream msg;
    msg << "fixed_point_step: inner iteration cap " << cfg.max_inner
        << " reached, last step norm " << diag.inner_step_norms.back();
    throw NumericalError(msg.str());
}

double step_residual(const GridFunction& u_k, const GridFunction& u_prev,
                     const GridFunction& f, const SolverConfig& cfg) {
    if (u_k.n() != u_prev.n() || u_k.n() != f.n())
        throw std::invalid_argument("step_residual: incompatible grids");
    GridFunction g = subgrad_Jh(u_k, f, cfg.energy());
    double r = 0.0;
    const std::size_t m = u_k.values().size();
    for (std::size_t k = 0; k < m; ++k) {
        const double val = (u_k.values()[k] - u_prev.values()[k]) / cfg.dt + g.values()[k];
        r = std::max(r, std::abs(val));
    }
    return r;
}

Trajectory evolve(const GridFunction& u0, const GridFunction& f, const SolverConfig& cfg) {
    cfg.validate();
    if (u0.n() != f.n()) throw std::invalid_argument("evolve: incompatible grids");
    const EnergyParams params = cfg.energy();

    Trajectory traj{cfg, f, {}, {}};
    traj.states.reserve(cfg.steps + 1);
    traj.states.push_back(u0);

    const double bound = std::max(norm(u0), norm(f));
    double energy_prev = J_h(u0, f, params);

    for (int k = 1; k <= cfg.steps; ++k) {
        auto [u, diag] = fixed_point_step(traj.states.back(), f, cfg);
        diag.step_index = k;

        const double slack = 1e-8 * (1.0 + std::abs(energy_prev));
        if (diag.energy_J > energy_prev + slack)
            throw NumericalError("evolve: objective increased across a time step");
        if (norm(u) > bound + 1e-8 * (1.0 + bound))
            throw NumericalError("evolve: L2 bound violated");
        energy_prev = diag.energy_J;

        traj.states.push_back(std::move(u));
        traj.diagnostics.push_back(std::move(diag));
    }
    return traj;
}

Trajectory perona_malik_evolve(const GridFunction& u0, const PeronaMalikConfig& cfg) {
    const int n = u0.n();
    const double h = u0.h();
    const double dt_max = h * h / 4.0;
    const double dt = cfg.dt == 0.0 ? dt_max : cfg.dt;
    if (!(dt > 0.0) || dt > dt_max * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "perona_malik_evolve: dt " << dt << " violates stability bound h^2/4 = " << dt_max;
        throw NumericalError(msg.str());
    }
    if (cfg.steps < 1) throw std::invalid_argument("perona_malik_evolve: steps must be >= 1");

    Trajectory traj{SolverConfig{}, u0, {}, {}};
    traj.config.dt = dt;
    traj.config.steps = cfg.steps;
    traj.states.reserve(cfg.steps + 1);
    traj.states.push_back(u0);

    VectorField g(n);
    GridFunction div(n);
    const std::size_t m = u0.values().size();
    GridFunction u = u0;
    for (int k = 1; k <= cfg.steps; ++k) {
        grad_forward_into(u, g);
        for (std::size_t q = 0; q < m; ++q) {
            const double c = 1.0 / std::sqrt(1.0 + g.px[q] * g.px[q] + g.py[q] * g.py[q]);
            g.px[q] *= c;
            g.py[q] *= c;
        }
        div_backward_into(g, div);
        double step_sq = 0.0;
        for (std::size_t q = 0; q < m; ++q) {
            const double d = dt * div.values()[q];
            u.values()[q] += d;
            step_sq += d * d;
        }
        StepDiagnostics diag;
        diag.step_index = k;
        diag.inner_iterations = 1;
        diag.step_norm = std::sqrt(step_sq * h * h);
        traj.diagnostics.push_back(std::move(diag));
        traj.states.push_back(u);
    }
    return traj;
}

} // namespace rof
