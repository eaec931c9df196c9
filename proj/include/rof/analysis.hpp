#ifndef ROF_ANALYSIS_HPP
#define ROF_ANALYSIS_HPP

#include "rof/solver.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace rof {

/// Space-time interpolant of a trajectory: piecewise linear on the
/// three-direction triangulation with vertices at cell centers, linearly
/// blended between time nodes. Outside the convex hull of the centers the
/// evaluation clamps to the hull boundary (ghost-cell extension).
class Interpolant {
public:
    explicit Interpolant(const Trajectory& traj) : traj_(&traj) {}

    double duration() const { return traj_->config.dt * traj_->config.steps; }

    /// Evaluate at x, y in [0,1], t in [0,T]; throws on out-of-domain input.
    double eval(double x, double y, double t) const;

    /// Spatial evaluation of a single grid function.
    static double eval_spatial(const GridFunction& u, double x, double y);

private:
    const Trajectory* traj_;
};

/// Energy of the piecewise linear interpolant of u: per-triangle constant
/// gradient variation, sqrt(epsilon) on the h/2 boundary strip, and the
/// misfit against the piecewise-constant f integrated exactly per piece.
double continuous_J_of_interpolant(const GridFunction& u, const GridFunction& f,
                                   const EnergyParams& params);

/// Gap between the interpolant variation and the half-weighted discrete
/// variation: exact (0) over the interior triangles, O(h) over the full
/// domain including the boundary strip.
std::pair<double, double> tv_equality_gap(const GridFunction& u, const EnergyParams& params);

/// (sum_k |u^{k-1}-u^k|^2/dt, J(u^0) - J(u^M)); the first is bounded by
/// the second for any trajectory of the implicit scheme.
std::pair<double, double> derivative_energy_audit(const Trajectory& traj);

/// (|T_x u - u|, |T_y u - u|), one-cell Neumann-clamped shifts.
std::pair<double, double> translation_modulus(const GridFunction& u);

/// Discrete surrogate of the translation Lipschitz seminorm: max over
/// axis-aligned shifts of 1..n/2 cells of |shift - id| on the overlap,
/// scaled by (d h)^-alpha.
double lip_seminorm_estimate(const GridFunction& u, double alpha);

struct RefinementSchedule {
    double alpha = 1.0;
    double T = 0.5;
    std::vector<std::pair<int, int>> levels; ///< (N, M) pairs, N strictly increasing

    void validate() const;
    /// True when M/(T N^alpha) is strictly decreasing along the levels.
    bool coupling_ok() const;
};

struct RefinementRow {
    int n = 0;
    int m = 0;
    double dt = 0.0;
    double dist_to_prev = 0.0; ///< NaN on the first level
};

/// Cell-average project the source at each level, evolve, resample each
/// interpolant on the finest level's cell centers and a uniform time grid,
/// and report L2(space-time) distances between consecutive levels.
std::vector<RefinementRow> refinement_study(const std::function<double(double, double)>& source,
                                            const RefinementSchedule& schedule,
                                            const SolverConfig& cfg_template,
                                            int time_samples = 17, int subsamples = 8);

} // namespace rof

#endif
