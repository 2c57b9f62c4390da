// Interpolation helpers: barycentric interpolation on the first-kind
// Chebyshev grid and cubic Lagrange interpolation on equispaced samples.
#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace chtrecon {

// First-kind Chebyshev grid q_i = cos((2i-1)pi/(2n)), i = 1..n (decreasing),
// with barycentric weights w_i proportional to (-1)^{i-1} sin((2i-1)pi/(2n)).
struct ChebGrid {
    int n = 0;
    std::vector<double> nodes;
    std::vector<double> bary_w;

    explicit ChebGrid(int n_) : n(n_) {
        if (n < 1) throw std::invalid_argument("ChebGrid: n < 1");
        nodes.resize(n);
        bary_w.resize(n);
        for (int i = 0; i < n; ++i) {
            const double a = (2.0 * i + 1.0) * std::numbers::pi / (2.0 * n);
            nodes[i] = std::cos(a);
            bary_w[i] = (i % 2 == 0 ? 1.0 : -1.0) * std::sin(a);
        }
    }
};

// Barycentric evaluation of the interpolant of (grid.nodes, values) at t.
inline double bary_eval(const ChebGrid& grid, std::span<const double> values, double t) {
    if (int(values.size()) != grid.n)
        throw std::invalid_argument("bary_eval: values size mismatch");
    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double d = t - grid.nodes[i];
        if (d == 0.0) return values[i];
        const double w = grid.bary_w[i] / d;
        num += w * values[i];
        den += w;
    }
    return num / den;
}

// Cubic (4-point Lagrange) interpolation of equispaced samples
// y_k = f(x0 + k*dx).  Near the ends the stencil is clamped, so values up to
// one spacing beyond the sampled range are mild extrapolations; farther out
// is rejected.
inline double cubic_interp(double x0, double dx, std::span<const double> y, double x) {
    const int n = int(y.size());
    if (n < 4) throw std::invalid_argument("cubic_interp: need at least 4 samples");
    const double u = (x - x0) / dx;
    if (u < -1.0 || u > n) throw std::out_of_range("cubic_interp: x outside sampled range");
    int k = int(std::floor(u)) - 1;  // stencil start: points k..k+3
    if (k < 0) k = 0;
    if (k > n - 4) k = n - 4;
    const double s = u - k;
    const double l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    return l0 * y[k] + l1 * y[k + 1] + l2 * y[k + 2] + l3 * y[k + 3];
}

// Linear interpolation of equispaced samples with zero extension one spacing
// beyond the outermost samples (ghost zero bins).
inline double linear_interp_ghost(double x0, double dx, std::span<const double> y, double x) {
    const int n = int(y.size());
    const double u = (x - x0) / dx;
    if (u <= -1.0 || u >= n) return 0.0;
    const int j = int(std::floor(u));
    const double w = u - j;
    const double a = (j >= 0 && j < n) ? y[j] : 0.0;
    const double b = (j + 1 >= 0 && j + 1 < n) ? y[j + 1] : 0.0;
    return (1.0 - w) * a + w * b;
}

}  // namespace chtrecon
