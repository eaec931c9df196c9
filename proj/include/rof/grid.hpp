#ifndef ROF_GRID_HPP
#define ROF_GRID_HPP

#include <functional>
#include <stdexcept>
#include <vector>

namespace rof {

/// Real-valued function on the uniform N x N cell grid over [0,1]^2.
/// Storage is row-major: value at (i,j) = column i, row j sits at j*n + i.
/// The spacing h = 1/n is derived, never stored.
class GridFunction {
public:
    explicit GridFunction(int n);
    GridFunction(int n, std::vector<double> values);

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }
    int size() const { return n_ * n_; }

    double operator()(int i, int j) const { return v_[static_cast<std::size_t>(j) * n_ + i]; }
    double& operator()(int i, int j) { return v_[static_cast<std::size_t>(j) * n_ + i]; }

    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    /// Throws std::invalid_argument if a value is NaN/Inf.
    void check_finite() const;

private:
    int n_;
    std::vector<double> v_;
};

/// Pair of N x N component arrays; holds one-sided gradients and fluxes.
struct VectorField {
    int n = 0;
    std::vector<double> px;
    std::vector<double> py;

    VectorField() = default;
    explicit VectorField(int n_)
        : n(n_), px(static_cast<std::size_t>(n_) * n_, 0.0), py(static_cast<std::size_t>(n_) * n_, 0.0) {}

    double x(int i, int j) const { return px[static_cast<std::size_t>(j) * n + i]; }
    double y(int i, int j) const { return py[static_cast<std::size_t>(j) * n + i]; }
    double& x(int i, int j) { return px[static_cast<std::size_t>(j) * n + i]; }
    double& y(int i, int j) { return py[static_cast<std::size_t>(j) * n + i]; }
};

/// Forward divided differences with Neumann ghost u(n,j) = u(n-1,j);
/// the x component vanishes on the last column, y on the last row.
VectorField grad_forward(const GridFunction& u);

/// Backward divided differences with ghost u(-1,j) = u(0,j);
/// x vanishes on the first column, y on the first row.
VectorField grad_backward(const GridFunction& u);

/// Adjoint divergences: <-div_forward(p), u> = <p, grad_forward(u)> for all u,
/// and likewise for the backward pair. The stencils are the transposed
/// gradient stencils, boundary rows included.
GridFunction div_forward(const VectorField& p);
GridFunction div_backward(const VectorField& p);

/// Same operators writing into preallocated outputs (no allocation).
void grad_forward_into(const GridFunction& u, VectorField& out);
void grad_backward_into(const GridFunction& u, VectorField& out);
void div_forward_into(const VectorField& p, GridFunction& out);
void div_backward_into(const VectorField& p, GridFunction& out);

/// h^2-weighted inner product; reduction runs in fixed row-major order.
double inner(const GridFunction& u, const GridFunction& v);
double norm(const GridFunction& u);

/// Shift by one cell with Neumann clamping at the far boundary.
GridFunction translate_x(const GridFunction& u);
GridFunction translate_y(const GridFunction& u);

/// Cell-average projection of a continuous source by the tensor midpoint
/// rule with s x s points per cell; exact for sources constant per cell.
GridFunction project_cell_average(const std::function<double(double, double)>& sampler, int n, int s = 8);

} // namespace rof

#endif
