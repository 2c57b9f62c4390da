// Small dense linear algebra: LU with partial pivoting plus an infinity-norm
// condition estimate.  The moment systems are at most (M+1)x(M+1) with
// M <= 10, so everything is done directly.
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chtrecon {

struct Matrix {
    int n = 0;
    std::vector<double> a;  // row-major

    Matrix() = default;
    explicit Matrix(int n_) : n(n_), a(std::size_t(n_) * n_, 0.0) {}
    double& operator()(int i, int j) { return a[std::size_t(i) * n + j]; }
    double operator()(int i, int j) const { return a[std::size_t(i) * n + j]; }
};

inline double norm_inf(const Matrix& m) {
    double best = 0.0;
    for (int i = 0; i < m.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < m.n; ++j) row += std::abs(m(i, j));
        best = std::max(best, row);
    }
    return best;
}

struct LinearSolve {
    std::vector<double> x;
    double cond = 0.0;  // inf-norm condition estimate
};

// Solves A x = b by LU with partial pivoting; also inverts A (cheap at this
// size) to report cond_inf(A).  Throws on a singular-to-working-precision
// matrix, naming the caller-supplied context.
inline LinearSolve solve_dense(Matrix A, std::span<const double> b,
                               const std::string& context = "solve_dense") {
    const int n = A.n;
    if (int(b.size()) != n) throw std::invalid_argument(context + ": rhs size mismatch");
    const double a_norm = norm_inf(A);

    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
        if (std::abs(A(p, k)) < 1e-300 || std::abs(A(p, k)) < 1e-15 * a_norm)
            throw std::runtime_error(context + ": matrix is singular to working precision");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(A(p, j), A(k, j));
            std::swap(piv[p], piv[k]);
        }
        for (int i = k + 1; i < n; ++i) {
            A(i, k) /= A(k, k);
            for (int j = k + 1; j < n; ++j) A(i, j) -= A(i, k) * A(k, j);
        }
    }

    auto lu_solve = [&](std::span<const double> rhs) {
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = rhs[piv[i]];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) y[i] -= A(i, j) * y[j];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) y[i] -= A(i, j) * y[j];
            y[i] /= A(i, i);
        }
        return y;
    };

    LinearSolve out;
    out.x = lu_solve(b);

    double inv_norm = 0.0;
    std::vector<double> e(n, 0.0);
    std::vector<double> row_sum(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        auto col = lu_solve(e);
        e[j] = 0.0;
        for (int i = 0; i < n; ++i) row_sum[i] += std::abs(col[i]);
    }
    for (int i = 0; i < n; ++i) inv_norm = std::max(inv_norm, row_sum[i]);
    out.cond = a_norm * inv_norm;
    return out;
}

}  // namespace chtrecon
