#ifndef ROF_SOLVER_HPP
#define ROF_SOLVER_HPP

#include "rof/energy.hpp"
#include "rof/grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rof {

/// Numerical failure (as opposed to bad input): iteration caps, stability
/// bounds, broken monotonicity guarantees.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear solve did not reach the requested residual within the iteration cap.
class SolveError : public NumericalError {
public:
    SolveError(const std::string& what, double achieved_residual)
        : NumericalError(what), achieved_residual_(achieved_residual) {}
    double achieved_residual() const { return achieved_residual_; }

private:
    double achieved_residual_;
};

struct SolverConfig {
    double epsilon = 1.0;
    double lambda = 30.0;
    double dt = 0.1;
    int steps = 50;
    double tol_inner = 1e-8;  ///< fixed-point stop on the h^2-weighted step norm
    int max_inner = 500;
    double cg_tol = 1e-10;    ///< relative residual of each linear solve
    int cg_max_iters = 20000;

    EnergyParams energy() const { return {epsilon, lambda}; }
    void validate() const;
};

struct StepDiagnostics {
    int step_index = 0;
    int inner_iterations = 0;
    double energy_J = 0.0;
    double energy_E = 0.0;
    double step_norm = 0.0;     ///< |u^k - u^{k-1}|
    double residual_inf = 0.0;  ///< max-norm optimality residual of the step
    std::vector<double> energy_decrements; ///< E(v^{l-1}) - E(v^l) per inner pass
    std::vector<double> inner_step_norms;  ///< |v^l - v^{l-1}| per inner pass
};

struct Trajectory {
    SolverConfig config;
    GridFunction f;
    std::vector<GridFunction> states; ///< u^0 ... u^M
    std::vector<StepDiagnostics> diagnostics;
};

/// Frozen diffusivities 1/sqrt(epsilon + |grad+- v|^2); both components of a
/// cell carry the same scalar.
std::pair<VectorField, VectorField> assemble_weights(const GridFunction& v, double epsilon);

/// (1/dt + 1/lambda) v - 1/2 div+(w+ o grad+ v) - 1/2 div-(w- o grad- v).
/// Symmetric positive definite for positive weights.
GridFunction apply_linearized(const GridFunction& v, const VectorField& w_plus,
                              const VectorField& w_minus, double lambda, double dt);

/// Conjugate-gradient solve of the linearized operator; returns v with
/// |A v - rhs| / |rhs| <= cfg.cg_tol. Deterministic. Optional warm start.
GridFunction solve_inner_linear(const GridFunction& rhs, const VectorField& w_plus,
                                const VectorField& w_minus, const SolverConfig& cfg,
                                const GridFunction* warm_start = nullptr);

/// One implicit time step by lagged-diffusivity fixed point iteration,
/// started from u_prev. Asserts the per-pass energy decrease bound.
std::pair<GridFunction, StepDiagnostics> fixed_point_step(const GridFunction& u_prev,
                                                          const GridFunction& f,
                                                          const SolverConfig& cfg);

/// Max-norm residual of the implicit step equation at u_k.
double step_residual(const GridFunction& u_k, const GridFunction& u_prev,
                     const GridFunction& f, const SolverConfig& cfg);

/// Run cfg.steps implicit steps from u0; enforces the energy monotonicity
/// and L2 boundedness of the trajectory.
Trajectory evolve(const GridFunction& u0, const GridFunction& f, const SolverConfig& cfg);

struct PeronaMalikConfig {
    double dt = 0.0;  ///< must satisfy dt <= h^2/4; 0 picks h^2/4
    int steps = 1000;
};

/// Explicit diffusion baseline with flux grad u / sqrt(1 + |grad u|^2)
/// (forward gradient, backward divergence), no fidelity term.
Trajectory perona_malik_evolve(const GridFunction& u0, const PeronaMalikConfig& cfg);

} // namespace rof

#endif
