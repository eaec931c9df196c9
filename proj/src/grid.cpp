#include "rof/grid.hpp"

#include <cmath>

namespace rof {

GridFunction::GridFunction(int n) : n_(n), v_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 2) throw std::invalid_argument("GridFunction: n must be >= 2");
}

GridFunction::GridFunction(int n, std::vector<double> values) : n_(n), v_(std::move(values)) {
    if (n < 2) throw std::invalid_argument("GridFunction: n must be >= 2");
    if (v_.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("GridFunction: value array must have n^2 entries");
    check_finite();
}

void GridFunction::check_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) throw std::invalid_argument("GridFunction: non-finite value");
}

void grad_forward_into(const GridFunction& u, VectorField& out) {
    const int n = u.n();
    const double inv_h = n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out.x(i, j) = (i < n - 1) ? (u(i + 1, j) - u(i, j)) * inv_h : 0.0;
            out.y(i, j) = (j < n - 1) ? (u(i, j + 1) - u(i, j)) * inv_h : 0.0;
        }
    }
}

void grad_backward_into(const GridFunction& u, VectorField& out) {
    const int n = u.n();
    const double inv_h = n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out.x(i, j) = (i > 0) ? (u(i, j) - u(i - 1, j)) * inv_h : 0.0;
            out.y(i, j) = (j > 0) ? (u(i, j) - u(i, j - 1)) * inv_h : 0.0;
        }
    }
}

// Transpose of the forward-gradient stencil. The x part is a backward
// difference of px with special first and last columns; px on the last
// column never enters (it multiplies a zero gradient entry).
void div_forward_into(const VectorField& p, GridFunction& out) {
    const int n = p.n;
    const double inv_h = n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double dx;
            if (i == 0)
                dx = p.x(0, j);
            else if (i < n - 1)
                dx = p.x(i, j) - p.x(i - 1, j);
            else
                dx = -p.x(n - 2, j);
            double dy;
            if (j == 0)
                dy = p.y(i, 0);
            else if (j < n - 1)
                dy = p.y(i, j) - p.y(i, j - 1);
            else
                dy = -p.y(i, n - 2);
            out(i, j) = (dx + dy) * inv_h;
        }
    }
}

void div_backward_into(const VectorField& p, GridFunction& out) {
    const int n = p.n;
    const double inv_h = n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double dx;
            if (i == 0)
                dx = p.x(1, j);
            else if (i < n - 1)
                dx = p.x(i + 1, j) - p.x(i, j);
            else
                dx = -p.x(n - 1, j);
            double dy;
            if (j == 0)
                dy = p.y(i, 1);
            else if (j < n - 1)
                dy = p.y(i, j + 1) - p.y(i, j);
            else
                dy = -p.y(i, n - 1);
            out(i, j) = (dx + dy) * inv_h;
        }
    }
}

VectorField grad_forward(const GridFunction& u) {
    VectorField out(u.n());
    grad_forward_into(u, out);
    return out;
}

VectorField grad_backward(const GridFunction& u) {
    VectorField out(u.n());
    grad_backward_into(u, out);
    return out;
}

GridFunction div_forward(const VectorField& p) {
    GridFunction out(p.n);
    div_forward_into(p, out);
    return out;
}

GridFunction div_backward(const VectorField& p) {
    GridFunction out(p.n);
    div_backward_into(p, out);
    return out;
}

double inner(const GridFunction& u, const GridFunction& v) {
    if (u.n() != v.n()) throw std::invalid_argument("inner: incompatible grids");
    double s = 0.0;
    const auto& a = u.values();
    const auto& b = v.values();
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    const double h = u.h();
    return s * h * h;
}

double norm(const GridFunction& u) { return std::sqrt(inner(u, u)); }

GridFunction translate_x(const GridFunction& u) {
    const int n = u.n();
    GridFunction out(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(i, j) = u(std::min(i + 1, n - 1), j);
    return out;
}

GridFunction translate_y(const GridFunction& u) {
    const int n = u.n();
    GridFunction out(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(i, j) = u(i, std::min(j + 1, n - 1));
    return out;
}

GridFunction project_cell_average(const std::function<double(double, double)>& sampler, int n, int s) {
    if (n < 2) throw std::invalid_argument("project_cell_average: n must be >= 2");
    if (s < 1) throw std::invalid_argument("project_cell_average: s must be >= 1");
    GridFunction out(n);
    const double h = 1.0 / n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int b = 0; b < s; ++b) {
                const double y = (j + (b + 0.5) / s) * h;
                for (int a = 0; a < s; ++a) {
                    const double x = (i + (a + 0.5) / s) * h;
                    const double val = sampler(x, y);
                    if (!std::isfinite(val))
                        throw std::invalid_argument("project_cell_average: sampler returned non-finite value");
                    acc += val;
                }
            }
            out(i, j) = acc / (static_cast<double>(s) * s);
        }
    }
    return out;
}

} // namespace rof
