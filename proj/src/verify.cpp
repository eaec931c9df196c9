#include "rof/verify.hpp"

#include "rof/analysis.hpp"
#include "rof/energy.hpp"
#include "rof/grid.hpp"
#include "rof/solver.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace rof::verify {

namespace {

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9E3779B97F4A7C15ULL) {}
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

GridFunction random_grid(int n, Rng& rng, double lo = 0.0, double hi = 1.0) {
    GridFunction u(n);
    for (auto& v : u.values()) v = rng.uniform(lo, hi);
    return u;
}

VectorField random_field(int n, Rng& rng) {
    VectorField p(n);
    for (auto& v : p.px) v = rng.uniform(-1.0, 1.0);
    for (auto& v : p.py) v = rng.uniform(-1.0, 1.0);
    return p;
}

double dot_plain(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double field_grid_inner(const VectorField& p, const VectorField& q, double h) {
    return (dot_plain(p.px, q.px) + dot_plain(p.py, q.py)) * h * h;
}

SolverConfig unit_config() {
    SolverConfig cfg;
    cfg.epsilon = 1.0;
    cfg.lambda = 0.5;
    cfg.dt = 0.1;
    cfg.steps = 5;
    cfg.tol_inner = 1e-10;
    cfg.cg_tol = 1e-12;
    return cfg;
}

using Check = std::function<Result(const Options&)>;

Result pass(const std::string& name) { return {name, true, ""}; }

Result fail(const std::string& name, const std::string& detail) { return {name, false, detail}; }

Result check_adjointness(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    for (int t = 0; t < std::max(o.trials, 100); ++t) {
        GridFunction u = random_grid(n, rng, -1.0, 1.0);
        VectorField p = random_field(n, rng);
        const double h = u.h();
        const double lhs_p = -inner(div_forward(p), u);
        const double rhs_p = field_grid_inner(p, grad_forward(u), h);
        const double lhs_m = -inner(div_backward(p), u);
        const double rhs_m = field_grid_inner(p, grad_backward(u), h);
        const double scale = 1.0 + std::abs(rhs_p) + std::abs(rhs_m);
        if (std::abs(lhs_p - rhs_p) > 1e-12 * scale || std::abs(lhs_m - rhs_m) > 1e-12 * scale) {
            std::ostringstream d;
            d << "trial " << t << ": gaps " << lhs_p - rhs_p << ", " << lhs_m - rhs_m;
            return fail("adjointness", d.str());
        }
    }
    return pass("adjointness");
}

Result check_boundary_nullity(const Options& o) {
    Rng rng(o.seed);
    const int n = o.size;
    GridFunction u = random_grid(n, rng);
    VectorField gp = grad_forward(u);
    VectorField gm = grad_backward(u);
    for (int k = 0; k < n; ++k) {
        if (gp.x(n - 1, k) != 0.0 || gp.y(k, n - 1) != 0.0)
            return fail("boundary-nullity", "forward gradient nonzero on far boundary");
        if (gm.x(0, k) != 0.0 || gm.y(k, 0) != 0.0)
            return fail("boundary-nullity", "backward gradient nonzero on near boundary");
    }
    return pass("boundary-nullity");
}

Result check_linearity(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    for (int t = 0; t < 20; ++t) {
        GridFunction u = random_grid(n, rng, -1.0, 1.0);
        GridFunction v = random_grid(n, rng, -1.0, 1.0);
        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
        GridFunction w(n);
        for (std::size_t k = 0; k < w.values().size(); ++k)
            w.values()[k] = a * u.values()[k] + b * v.values()[k];
        VectorField gw = grad_forward(w);
        VectorField gu = grad_forward(u);
        VectorField gv = grad_forward(v);
        for (std::size_t k = 0; k < gw.px.size(); ++k) {
            const double ex = a * gu.px[k] + b * gv.px[k];
            const double ey = a * gu.py[k] + b * gv.py[k];
            if (std::abs(gw.px[k] - ex) > 1e-12 * (1.0 + std::abs(ex)) ||
                std::abs(gw.py[k] - ey) > 1e-12 * (1.0 + std::abs(ey)))
                return fail("linearity", "forward gradient is not linear");
        }
    }
    return pass("linearity");
}

Result check_transpose_stencil(const Options&) {
    const int n = 4;
    const int m = n * n;
    // dense gradient matrix columns from unit vectors, then Div = -Grad^T entrywise
    std::vector<std::vector<double>> gx(m, std::vector<double>(m)), gy(m, std::vector<double>(m));
    for (int c = 0; c < m; ++c) {
        GridFunction e(n);
        e.values()[c] = 1.0;
        VectorField g = grad_forward(e);
        for (int r = 0; r < m; ++r) {
            gx[r][c] = g.px[r];
            gy[r][c] = g.py[r];
        }
    }
    for (int c = 0; c < m; ++c) {
        VectorField p(n);
        p.px[c] = 1.0;
        GridFunction d = div_forward(p);
        for (int r = 0; r < m; ++r)
            if (d.values()[r] != -gx[c][r])
                return fail("transpose-stencil", "div_forward x-part is not the negative transpose");
        VectorField q(n);
        q.py[c] = 1.0;
        GridFunction dy = div_forward(q);
        for (int r = 0; r < m; ++r)
            if (dy.values()[r] != -gy[c][r])
                return fail("transpose-stencil", "div_forward y-part is not the negative transpose");
    }
    return pass("transpose-stencil");
}

Result check_gradient(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 8);
    const EnergyParams params{1.0, 2.0};
    const double delta = 1e-6;
    for (int t = 0; t < std::min(o.trials, 50); ++t) {
        GridFunction u = random_grid(n, rng);
        GridFunction f = random_grid(n, rng);
        GridFunction w = random_grid(n, rng, -1.0, 1.0);
        GridFunction up(n), um(n);
        for (std::size_t k = 0; k < u.values().size(); ++k) {
            up.values()[k] = u.values()[k] + delta * w.values()[k];
            um.values()[k] = u.values()[k] - delta * w.values()[k];
        }
        const double fd = (J_h(up, f, params) - J_h(um, f, params)) / (2.0 * delta);
        const double an = inner(subgrad_Jh(u, f, params), w);
        if (std::abs(fd - an) > 1e-5 * (1.0 + std::abs(an))) {
            std::ostringstream d;
            d << "trial " << t << ": finite difference " << fd << " vs analytic " << an;
            return fail("gradient-check", d.str());
        }
    }
    return pass("gradient-check");
}

Result check_convexity(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    const EnergyParams params{0.5, 1.5};
    for (int t = 0; t < std::max(o.trials, 100); ++t) {
        GridFunction u = random_grid(n, rng, -1.0, 1.0);
        GridFunction v = random_grid(n, rng, -1.0, 1.0);
        GridFunction f = random_grid(n, rng);
        const double theta = rng.uniform(0.01, 0.99);
        GridFunction w(n);
        for (std::size_t k = 0; k < w.values().size(); ++k)
            w.values()[k] = theta * u.values()[k] + (1.0 - theta) * v.values()[k];
        const double lhs = J_h(w, f, params);
        const double rhs = theta * J_h(u, f, params) + (1.0 - theta) * J_h(v, f, params);
        if (lhs > rhs + 1e-12 * (1.0 + std::abs(rhs)))
            return fail("convexity", "segment inequality violated");
    }
    return pass("convexity");
}

Result check_flux_monotonicity(const Options& o) {
    Rng rng(o.seed);
    for (int t = 0; t < std::max(o.trials, 1000); ++t) {
        const double eps = rng.uniform(1e-4, 2.0);
        const double x0 = rng.uniform(-5.0, 5.0), x1 = rng.uniform(-5.0, 5.0);
        const double y0 = rng.uniform(-5.0, 5.0), y1 = rng.uniform(-5.0, 5.0);
        const double dx = std::sqrt(eps + x0 * x0 + x1 * x1);
        const double dy = std::sqrt(eps + y0 * y0 + y1 * y1);
        const double prod =
            (x0 / dx - y0 / dy) * (x0 - y0) + (x1 / dx - y1 / dy) * (x1 - y1);
        if (prod < -1e-14) return fail("flux-monotonicity", "negative pairing");
    }
    return pass("flux-monotonicity");
}

Result check_sqrt_inequality(const Options& o) {
    Rng rng(o.seed);
    for (int t = 0; t < std::max(o.trials, 1000); ++t) {
        const double eps = rng.uniform(1e-6, 3.0);
        const double a = rng.uniform(-10.0, 10.0), b = rng.uniform(-10.0, 10.0);
        const double lhs = 2.0 * std::sqrt(eps + b * b) - 2.0 * std::sqrt(eps + a * a);
        const double rhs = (b * b - a * a) / std::sqrt(eps + b * b);
        if (lhs < rhs - 1e-12) return fail("sqrt-inequality", "scalar inequality violated");
    }
    return pass("sqrt-inequality");
}

Result check_characterization(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    SolverConfig cfg = unit_config();
    GridFunction f = random_grid(n, rng);
    GridFunction u_prev = random_grid(n, rng);
    auto [u_k, diag] = fixed_point_step(u_prev, f, cfg);
    for (int t = 0; t < std::max(o.trials, 200); ++t) {
        GridFunction v = random_grid(n, rng, -1.0, 2.0);
        const double gap = characterization_gap(u_k, u_prev, v, f, cfg.energy(), cfg.dt);
        if (gap < -1e-8) {
            std::ostringstream d;
            d << "trial " << t << ": gap " << gap;
            return fail("characterization", d.str());
        }
    }
    return pass("characterization");
}

Result check_energy_decrease(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    for (int t = 0; t < std::min(o.trials, 50); ++t) {
        SolverConfig cfg = unit_config();
        cfg.epsilon = (t % 2 == 0) ? 1.0 : 1e-2;
        cfg.lambda = (t % 3 == 0) ? 0.5 : 2.0;
        GridFunction f = random_grid(n, rng);
        GridFunction u_prev = random_grid(n, rng);
        auto [u_k, diag] = fixed_point_step(u_prev, f, cfg);
        for (std::size_t l = 0; l < diag.energy_decrements.size(); ++l) {
            const double bound =
                diag.inner_step_norms[l] * diag.inner_step_norms[l] / (2.0 * cfg.lambda);
            if (diag.energy_decrements[l] < bound - 1e-10) {
                std::ostringstream d;
                d << "instance " << t << " pass " << l << ": decrement "
                  << diag.energy_decrements[l] << " below " << bound;
                return fail("energy-decrease", d.str());
            }
        }
    }
    return pass("energy-decrease");
}

Result check_inner_boundedness(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    SolverConfig cfg = unit_config();
    for (int t = 0; t < std::min(o.trials, 20); ++t) {
        GridFunction f = random_grid(n, rng);
        GridFunction u_prev = random_grid(n, rng);
        GridFunction rhs(n);
        for (std::size_t k = 0; k < rhs.values().size(); ++k)
            rhs.values()[k] = u_prev.values()[k] / cfg.dt + f.values()[k] / cfg.lambda;
        const double cap = norm(u_prev) / cfg.dt + norm(f) / cfg.lambda + 1e-10;
        GridFunction v = u_prev;
        for (int l = 0; l < 25; ++l) {
            auto [wp, wm] = assemble_weights(v, cfg.epsilon);
            v = solve_inner_linear(rhs, wp, wm, cfg, &v);
            if ((1.0 / cfg.dt + 1.0 / cfg.lambda) * norm(v) > cap)
                return fail("inner-boundedness", "iterate norm above bound");
        }
    }
    return pass("inner-boundedness");
}

Result check_stability(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    SolverConfig cfg = unit_config();
    cfg.steps = 10;
    for (int t = 0; t < std::min(o.trials, 20); ++t) {
        GridFunction f = random_grid(n, rng);
        GridFunction g = random_grid(n, rng);
        GridFunction u0f = random_grid(n, rng);
        GridFunction u0g = random_grid(n, rng);
        Trajectory tf = evolve(u0f, f, cfg);
        Trajectory tg = evolve(u0g, g, cfg);
        GridFunction d0(n), df(n);
        for (std::size_t k = 0; k < d0.values().size(); ++k) {
            d0.values()[k] = u0f.values()[k] - u0g.values()[k];
            df.values()[k] = f.values()[k] - g.values()[k];
        }
        const double cap = std::max(norm(d0), norm(df)) + 1e-8;
        for (int k = 1; k <= cfg.steps; ++k) {
            GridFunction d(n);
            for (std::size_t q = 0; q < d.values().size(); ++q)
                d.values()[q] = tf.states[k].values()[q] - tg.states[k].values()[q];
            if (norm(d) > cap) {
                std::ostringstream msg;
                msg << "pair " << t << " step " << k << ": distance " << norm(d) << " above " << cap;
                return fail("stability", msg.str());
            }
        }
    }
    return pass("stability");
}

Result check_variation_monotonicity(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    SolverConfig cfg = unit_config();
    GridFunction f = random_grid(n, rng);
    Trajectory traj = evolve(random_grid(n, rng), f, cfg);
    const EnergyParams params = cfg.energy();
    for (int k = 1; k <= cfg.steps; ++k) {
        const double jk = J_h(traj.states[k], f, params);
        for (int s = 0; s < 20; ++s) {
            const double theta = (s + 0.5) / 20.0;
            GridFunction blend(n);
            for (std::size_t q = 0; q < blend.values().size(); ++q)
                blend.values()[q] = theta * traj.states[k].values()[q] +
                                    (1.0 - theta) * traj.states[k - 1].values()[q];
            if (jk > J_h(blend, f, params) + 1e-10)
                return fail("variation-monotonicity", "objective above interpolated value");
        }
    }
    return pass("variation-monotonicity");
}

Result check_translation_bound(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    SolverConfig cfg = unit_config();
    GridFunction f = random_grid(n, rng);
    GridFunction u0 = random_grid(n, rng);
    Trajectory traj = evolve(u0, f, cfg);
    const auto [fx, fy] = translation_modulus(f);
    const auto [ux, uy] = translation_modulus(u0);
    for (int k = 1; k <= cfg.steps; ++k) {
        const auto [mx, my] = translation_modulus(traj.states[k]);
        if (mx > ux + fx + 1e-8 || my > uy + fy + 1e-8)
            return fail("translation-bound", "translation modulus grew past data moduli");
    }
    return pass("translation-bound");
}

Result check_derivative_energy(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    SolverConfig cfg = unit_config();
    cfg.steps = 10;
    Trajectory traj = evolve(random_grid(n, rng), random_grid(n, rng), cfg);
    const auto [lhs, rhs] = derivative_energy_audit(traj);
    if (lhs > rhs + 1e-8) {
        std::ostringstream d;
        d << "lhs " << lhs << " above rhs " << rhs;
        return fail("derivative-energy", d.str());
    }
    return pass("derivative-energy");
}

Result check_tv_equality(const Options& o) {
    Rng rng(o.seed);
    for (int n : {8, 16, std::max(o.size, 8)}) {
        GridFunction u = random_grid(n, rng, -1.0, 1.0);
        const auto [interior, full] = tv_equality_gap(u, {1.0, 1.0});
        (void)full;
        if (interior > 1e-12) {
            std::ostringstream d;
            d << "N=" << n << ": interior gap " << interior;
            return fail("tv-equality", d.str());
        }
    }
    return pass("tv-equality");
}

Result check_interpolant(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    GridFunction u = random_grid(n, rng, -1.0, 1.0);
    const double h = u.h();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (std::abs(Interpolant::eval_spatial(u, (i + 0.5) * h, (j + 0.5) * h) - u(i, j)) > 1e-13)
                return fail("interpolant", "nodal value not reproduced");
    // two-sided evaluation across the diagonal edges
    for (int t = 0; t < 1000; ++t) {
        const int i = static_cast<int>(rng.uniform(0, n - 1));
        const int j = static_cast<int>(rng.uniform(0, n - 1));
        const double fr = rng.uniform(0.05, 0.95);
        const double x = (i + 0.5 + fr) * h;
        const double y = (j + 0.5 + (1.0 - fr)) * h;
        const double d = 1e-9;
        const double a = Interpolant::eval_spatial(u, x - d, y - d);
        const double b = Interpolant::eval_spatial(u, x + d, y + d);
        if (std::abs(a - b) > 1e-7) return fail("interpolant", "discontinuity across diagonal edge");
    }
    return pass("interpolant");
}

Result check_determinism(const Options& o) {
    Rng rng(o.seed);
    const int n = std::min(o.size, 16);
    SolverConfig cfg = unit_config();
    GridFunction f = random_grid(n, rng);
    GridFunction u0 = random_grid(n, rng);
    Trajectory a = evolve(u0, f, cfg);
    Trajectory b = evolve(u0, f, cfg);
    for (std::size_t k = 0; k < a.states.size(); ++k)
        if (a.states[k].values() != b.states[k].values())
            return fail("determinism", "repeated run differs bitwise");
    return pass("determinism");
}

const std::vector<std::pair<std::string, Check>>& registry() {
    static const std::vector<std::pair<std::string, Check>> r = {
        {"adjointness", check_adjointness},
        {"boundary-nullity", check_boundary_nullity},
        {"linearity", check_linearity},
        {"transpose-stencil", check_transpose_stencil},
        {"gradient-check", check_gradient},
        {"convexity", check_convexity},
        {"flux-monotonicity", check_flux_monotonicity},
        {"sqrt-inequality", check_sqrt_inequality},
        {"characterization", check_characterization},
        {"energy-decrease", check_energy_decrease},
        {"inner-boundedness", check_inner_boundedness},
        {"stability", check_stability},
        {"variation-monotonicity", check_variation_monotonicity},
        {"translation-bound", check_translation_bound},
        {"derivative-energy", check_derivative_energy},
        {"tv-equality", check_tv_equality},
        {"interpolant", check_interpolant},
        {"determinism", check_determinism},
    };
    return r;
}

} // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

Result run_suite(const std::string& name, const Options& opts) {
    for (const auto& [n, fn] : registry())
        if (n == name) return fn(opts);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

std::vector<Result> run_all(const Options& opts) {
    std::vector<Result> out;
    for (const auto& [name, fn] : registry()) out.push_back(fn(opts));
    return out;
}

} // namespace rof::verify
