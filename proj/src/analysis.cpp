#include "rof/analysis.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace rof {

double Interpolant::eval_spatial(const GridFunction& u, double x, double y) {
    const int n = u.n();
    auto clamp = [n](double s) {
        if (s < 0.0) return 0.0;
        if (s > n - 1.0) return n - 1.0;
        return s;
    };
    const double sx = clamp(x * n - 0.5);
    const double sy = clamp(y * n - 0.5);
    int i0 = std::min(static_cast<int>(sx), n - 2);
    int j0 = std::min(static_cast<int>(sy), n - 2);
    const double fx = sx - i0;
    const double fy = sy - j0;
    const double v00 = u(i0, j0), v10 = u(i0 + 1, j0);
    const double v01 = u(i0, j0 + 1), v11 = u(i0 + 1, j0 + 1);
    if (fx + fy <= 1.0) return v00 + fx * (v10 - v00) + fy * (v01 - v00);
    return v11 + (1.0 - fx) * (v01 - v11) + (1.0 - fy) * (v10 - v11);
}

double Interpolant::eval(double x, double y, double t) const {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
        throw std::invalid_argument("Interpolant::eval: point outside [0,1]^2");
    const double T = duration();
    if (t < 0.0 || t > T * (1.0 + 1e-12))
        throw std::invalid_argument("Interpolant::eval: time outside [0,T]");
    const double dt = traj_->config.dt;
    int k = static_cast<int>(std::ceil(t / dt));
    if (k < 1) k = 1;
    if (k > traj_->config.steps) k = traj_->config.steps;
    const double theta = (t - (k - 1) * dt) / dt;
    const double a = eval_spatial(traj_->states[k - 1], x, y);
    const double b = eval_spatial(traj_->states[k], x, y);
    return (1.0 - theta) * a + theta * b;
}

namespace {

struct Pt {
    double x, y;
};

// Exact integral of (lin - fval)^2 over a triangle with a linear integrand
// factor: three-edge-midpoint rule, exact for quadratics.
double tri_misfit(const Pt& p1, const Pt& p2, const Pt& p3,
                  const std::function<double(double, double)>& lin, double fval) {
    const double area =
        0.5 * std::abs((p2.x - p1.x) * (p3.y - p1.y) - (p3.x - p1.x) * (p2.y - p1.y));
    const Pt m12{0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)};
    const Pt m23{0.5 * (p2.x + p3.x), 0.5 * (p2.y + p3.y)};
    const Pt m31{0.5 * (p3.x + p1.x), 0.5 * (p3.y + p1.y)};
    double s = 0.0;
    for (const Pt& m : {m12, m23, m31}) {
        const double d = lin(m.x, m.y) - fval;
        s += d * d;
    }
    return s * area / 3.0;
}

// Variation of the interpolant over the interior triangles only.
double hull_variation(const GridFunction& u, double epsilon) {
    const int n = u.n();
    const double h = u.h();
    const double half_cell = 0.5 * h * h;
    double s = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            const double v00 = u(i, j), v10 = u(i + 1, j);
            const double v01 = u(i, j + 1), v11 = u(i + 1, j + 1);
            const double glx = (v10 - v00) / h, gly = (v01 - v00) / h;
            const double gux = (v11 - v01) / h, guy = (v11 - v10) / h;
            s += half_cell * std::sqrt(epsilon + glx * glx + gly * gly);
            s += half_cell * std::sqrt(epsilon + gux * gux + guy * guy);
        }
    }
    return s;
}

double strip_area(int n) {
    const double inner = (n - 1.0) / n;
    return 1.0 - inner * inner;
}

// Misfit integral over one inter-center square, split along the diagonal
// and the f-cell boundaries so every piece has a quadratic integrand.
double square_misfit(const GridFunction& u, const GridFunction& f, int i, int j) {
    const double h = u.h();
    const double ox = (i + 0.5) * h, oy = (j + 0.5) * h; // physical origin
    const double v00 = u(i, j), v10 = u(i + 1, j);
    const double v01 = u(i, j + 1), v11 = u(i + 1, j + 1);
    auto lower = [&](double x, double y) {
        const double fx = (x - ox) / h, fy = (y - oy) / h;
        return v00 + fx * (v10 - v00) + fy * (v01 - v00);
    };
    auto upper = [&](double x, double y) {
        const double fx = (x - ox) / h, fy = (y - oy) / h;
        return v11 + (1.0 - fx) * (v01 - v11) + (1.0 - fy) * (v10 - v11);
    };
    auto P = [&](double lx, double ly) { return Pt{ox + lx * h, oy + ly * h}; };

    double s = 0.0;
    // quarter A: lower-left, f cell (i,j), below the diagonal
    s += tri_misfit(P(0, 0), P(0.5, 0), P(0.5, 0.5), lower, f(i, j));
    s += tri_misfit(P(0, 0), P(0.5, 0.5), P(0, 0.5), lower, f(i, j));
    // quarter B: lower-right, f cell (i+1,j), diagonal splits it
    s += tri_misfit(P(0.5, 0), P(1, 0), P(0.5, 0.5), lower, f(i + 1, j));
    s += tri_misfit(P(1, 0), P(1, 0.5), P(0.5, 0.5), upper, f(i + 1, j));
    // quarter C: upper-left, f cell (i,j+1), diagonal splits it
    s += tri_misfit(P(0, 0.5), P(0.5, 0.5), P(0, 1), lower, f(i, j + 1));
    s += tri_misfit(P(0.5, 0.5), P(0.5, 1), P(0, 1), upper, f(i, j + 1));
    // quarter D: upper-right, f cell (i+1,j+1), above the diagonal
    s += tri_misfit(P(0.5, 0.5), P(1, 0.5), P(1, 1), upper, f(i + 1, j + 1));
    s += tri_misfit(P(0.5, 0.5), P(1, 1), P(0.5, 1), upper, f(i + 1, j + 1));
    return s;
}

// Misfit over the h/2 boundary strip where the interpolant is the clamped
// boundary-edge value: linear along each edge, constant in the corners.
double strip_misfit(const GridFunction& u, const GridFunction& f) {
    const int n = u.n();
    const double h = u.h();
    double s = 0.0;

    // four edge strips; the value varies linearly between adjacent centers
    // and the f cell switches at the shared cell boundary
    auto edge = [&](auto center_at, auto fcell_at, auto rect) {
        for (int q = 0; q + 1 < n; ++q) {
            const double a = center_at(q), b = center_at(q + 1);
            // first half: tangential span [(q+1/2)h, (q+1)h], f cell q
            // second half: [(q+1)h, (q+3/2)h], f cell q+1
            for (int half = 0; half < 2; ++half) {
                const double t0 = (q + 0.5 + 0.5 * half) * h;
                const double t1 = t0 + 0.5 * h;
                const double fval = fcell_at(q + half);
                auto lin = [&](double tt) {
                    const double fr = (tt - (q + 0.5) * h) / h;
                    return a + fr * (b - a);
                };
                rect(t0, t1, lin, fval, s);
            }
        }
    };

    auto rect_misfit = [&](Pt c1, Pt c2, Pt c3, Pt c4,
                           const std::function<double(double, double)>& lin, double fval) {
        return tri_misfit(c1, c2, c3, lin, fval) + tri_misfit(c1, c3, c4, lin, fval);
    };

    // bottom (y in [0, h/2]) and top (y in [1-h/2, 1])
    edge([&](int q) { return u(q, 0); }, [&](int c) { return f(c, 0); },
         [&](double t0, double t1, auto lin, double fv, double& acc) {
             auto l2 = [&](double x, double) { return lin(x); };
             acc += rect_misfit({t0, 0}, {t1, 0}, {t1, 0.5 * h}, {t0, 0.5 * h}, l2, fv);
         });
    edge([&](int q) { return u(q, n - 1); }, [&](int c) { return f(c, n - 1); },
         [&](double t0, double t1, auto lin, double fv, double& acc) {
             auto l2 = [&](double x, double) { return lin(x); };
             acc += rect_misfit({t0, 1 - 0.5 * h}, {t1, 1 - 0.5 * h}, {t1, 1}, {t0, 1}, l2, fv);
         });
    // left (x in [0, h/2]) and right (x in [1-h/2, 1])
    edge([&](int q) { return u(0, q); }, [&](int c) { return f(0, c); },
         [&](double t0, double t1, auto lin, double fv, double& acc) {
             auto l2 = [&](double, double y) { return lin(y); };
             acc += rect_misfit({0, t0}, {0.5 * h, t0}, {0.5 * h, t1}, {0, t1}, l2, fv);
         });
    edge([&](int q) { return u(n - 1, q); }, [&](int c) { return f(n - 1, c); },
         [&](double t0, double t1, auto lin, double fv, double& acc) {
             auto l2 = [&](double, double y) { return lin(y); };
             acc += rect_misfit({1 - 0.5 * h, t0}, {1, t0}, {1, t1}, {1 - 0.5 * h, t1}, l2, fv);
         });

    // corners: constant value, one f cell each
    const double ca = 0.25 * h * h;
    const std::array<std::array<int, 2>, 4> corners{{{0, 0}, {n - 1, 0}, {0, n - 1}, {n - 1, n - 1}}};
    for (const auto& c : corners) {
        const double d = u(c[0], c[1]) - f(c[0], c[1]);
        s += ca * d * d;
    }
    return s;
}

} // namespace

double continuous_J_of_interpolant(const GridFunction& u, const GridFunction& f,
                                   const EnergyParams& params) {
    if (u.n() != f.n()) throw std::invalid_argument("continuous_J_of_interpolant: incompatible grids");
    params.validate();
    const int n = u.n();
    double variation = hull_variation(u, params.epsilon) + strip_area(n) * std::sqrt(params.epsilon);
    double misfit = strip_misfit(u, f);
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) misfit += square_misfit(u, f, i, j);
    return variation + misfit / (2.0 * params.lambda);
}

std::pair<double, double> tv_equality_gap(const GridFunction& u, const EnergyParams& params) {
    params.validate();
    const int n = u.n();
    const double eps = params.epsilon;
    const double tri = hull_variation(u, eps);

    // discrete half-variations restricted to the same index sets: forward
    // terms away from the far boundary, backward terms away from the near one
    const VectorField gp = grad_forward(u);
    const VectorField gm = grad_backward(u);
    const double half_cell = 0.5 * u.h() * u.h();
    double restricted = 0.0;
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i)
            restricted += half_cell * std::sqrt(eps + gp.x(i, j) * gp.x(i, j) + gp.y(i, j) * gp.y(i, j));
    for (int j = 1; j < n; ++j)
        for (int i = 1; i < n; ++i)
            restricted += half_cell * std::sqrt(eps + gm.x(i, j) * gm.x(i, j) + gm.y(i, j) * gm.y(i, j));
    const double interior_gap = std::abs(tri - restricted);

    const double full_discrete =
        0.5 * variation_forward(u, eps) + 0.5 * variation_backward(u, eps);
    const double full_gap = std::abs(tri + strip_area(n) * std::sqrt(eps) - full_discrete);
    return {interior_gap, full_gap};
}

std::pair<double, double> derivative_energy_audit(const Trajectory& traj) {
    const EnergyParams params = traj.config.energy();
    double lhs = 0.0;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        GridFunction d(traj.states[k].n());
        for (std::size_t q = 0; q < d.values().size(); ++q)
            d.values()[q] = traj.states[k - 1].values()[q] - traj.states[k].values()[q];
        const double nd = norm(d);
        lhs += nd * nd / traj.config.dt;
    }
    const double rhs =
        J_h(traj.states.front(), traj.f, params) - J_h(traj.states.back(), traj.f, params);
    return {lhs, rhs};
}

std::pair<double, double> translation_modulus(const GridFunction& u) {
    GridFunction dx = translate_x(u);
    GridFunction dy = translate_y(u);
    for (std::size_t k = 0; k < u.values().size(); ++k) {
        dx.values()[k] -= u.values()[k];
        dy.values()[k] -= u.values()[k];
    }
    return {norm(dx), norm(dy)};
}

double lip_seminorm_estimate(const GridFunction& u, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("lip_seminorm_estimate: alpha must be in (0, 1]");
    const int n = u.n();
    const double h = u.h();
    double best = 0.0;
    for (int d = 1; d <= n / 2; ++d) {
        double sx = 0.0, sy = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i + d < n; ++i) {
                const double e = u(i + d, j) - u(i, j);
                sx += e * e;
            }
        for (int j = 0; j + d < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double e = u(i, j + d) - u(i, j);
                sy += e * e;
            }
        const double scale = std::pow(d * h, alpha);
        best = std::max(best, std::sqrt(sx * h * h) / scale);
        best = std::max(best, std::sqrt(sy * h * h) / scale);
    }
    return best;
}

void RefinementSchedule::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("RefinementSchedule: alpha must be in (0, 1]");
    if (!(T > 0.0)) throw std::invalid_argument("RefinementSchedule: T must be > 0");
    if (levels.empty()) throw std::invalid_argument("RefinementSchedule: no levels");
    int prev_n = 1;
    for (const auto& [n, m] : levels) {
        if (n < 2 || m < 1) throw std::invalid_argument("RefinementSchedule: bad level");
        if (n <= prev_n) throw std::invalid_argument("RefinementSchedule: levels must be increasing");
        prev_n = n;
    }
}

bool RefinementSchedule::coupling_ok() const {
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& [n, m] : levels) {
        const double ratio = m / (T * std::pow(n, alpha));
        if (ratio >= prev) return false;
        prev = ratio;
    }
    return true;
}

std::vector<RefinementRow> refinement_study(const std::function<double(double, double)>& source,
                                            const RefinementSchedule& schedule,
                                            const SolverConfig& cfg_template,
                                            int time_samples, int subsamples) {
    schedule.validate();
    if (time_samples < 2) throw std::invalid_argument("refinement_study: need >= 2 time samples");

    const int n_fine = schedule.levels.back().first;
    const double T = schedule.T;
    std::vector<RefinementRow> rows;
    std::vector<double> prev_samples;

    for (const auto& [n, m] : schedule.levels) {
        SolverConfig cfg = cfg_template;
        cfg.dt = T / m;
        cfg.steps = m;
        GridFunction f = project_cell_average(source, n, subsamples);
        Trajectory traj = evolve(f, f, cfg);
        Interpolant interp(traj);

        std::vector<double> samples(static_cast<std::size_t>(time_samples) * n_fine * n_fine);
        const double hf = 1.0 / n_fine;
        std::size_t idx = 0;
        for (int s = 0; s < time_samples; ++s) {
            const double t = T * s / (time_samples - 1);
            for (int j = 0; j < n_fine; ++j)
                for (int i = 0; i < n_fine; ++i)
                    samples[idx++] = interp.eval((i + 0.5) * hf, (j + 0.5) * hf, t);
        }

        RefinementRow row{n, m, cfg.dt, std::numeric_limits<double>::quiet_NaN()};
        if (!prev_samples.empty()) {
            // trapezoid in time of the h^2-weighted spatial squared distance
            const double dts = T / (time_samples - 1);
            double acc = 0.0;
            const std::size_t per_slice = static_cast<std::size_t>(n_fine) * n_fine;
            for (int s = 0; s < time_samples; ++s) {
                double slice = 0.0;
                for (std::size_t q = 0; q < per_slice; ++q) {
                    const double d = samples[s * per_slice + q] - prev_samples[s * per_slice + q];
                    slice += d * d;
                }
                slice *= hf * hf;
                acc += slice * dts * ((s == 0 || s == time_samples - 1) ? 0.5 : 1.0);
            }
            row.dist_to_prev = std::sqrt(acc);
        }
        rows.push_back(row);
        prev_samples = std::move(samples);
    }
    return rows;
}

} // namespace rof
