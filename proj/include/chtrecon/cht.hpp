// Inversion of the finite cosh-weighted Hilbert transform
//   h_mu1(tau) = int_{-1}^{1} cosh(mu1 (tau - t)) / (pi (tau - t)) f(t) dt
// given c_mu1 = int f(t) cosh(mu1 t) dt: Tricomi inversion of the mu1 = 0
// part plus a moment-correction series, with the even/odd moments obtained
// from two small dense linear systems.
#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "chtrecon/interp.hpp"
#include "chtrecon/linalg.hpp"
#include "chtrecon/tables.hpp"

namespace chtrecon {

// f is reported only on |t| <= 1 - edge_epsilon and extended by zero
// outside; dividing by sqrt(1-t^2) amplifies errors near the endpoints.
inline constexpr double edge_epsilon = 0.02;

// One normalized line problem on (-1, 1): h_mu1 sampled at the n first-kind
// Gauss-Chebyshev nodes, plus the cosh-weighted zeroth moment c_mu1.
struct StandardLine {
    double mu1 = 0.0;
    double c_mu1 = 0.0;
    std::vector<double> h_nodes;

    int n() const { return int(h_nodes.size()); }
};

struct MomentVector {
    int M = 0;
    std::vector<double> even;  // c_0, c_2, ..., c_{2M}
    std::vector<double> odd;   // c_1, c_3, ..., c_{2M-1}

    double moment(int k) const {
        return (k % 2 == 0) ? even.at(k / 2) : odd.at((k - 1) / 2);
    }
};

struct MomentSystems {
    int M = 0;
    Matrix Q_hat;  // (M+1) x (M+1), even moments
    Matrix P_hat;  // M x M, odd moments
};

// Maps one vertical chord [L, U] of the backprojection field to the
// standard problem: c_hat = (U+L)/2, d_hat = (U-L)/2, mu1 = d_hat * mu0,
//   h_mu1(q_i) = -b(x1, c_hat + d_hat q_i) / (2 pi),
//   c_mu1 = [exp(-c_hat mu0) g(x1, 0) + exp(c_hat mu0) g(-x1, pi)] / (2 d_hat).
// b is sampled at b_x0 + k*db along the line and interpolated cubically.
inline StandardLine normalize_line(std::span<const double> b_line, double b_x0, double db,
                                   double L, double U, double mu0, double g0, double gpi,
                                   int n) {
    if (!(U > L)) throw std::invalid_argument("normalize_line: U <= L");
    if (n < 2) throw std::invalid_argument("normalize_line: n < 2");
    const double c_hat = 0.5 * (U + L);
    const double d_hat = 0.5 * (U - L);
    StandardLine line;
    line.mu1 = d_hat * mu0;
    line.c_mu1 = (std::exp(-c_hat * mu0) * g0 + std::exp(c_hat * mu0) * gpi) / (2.0 * d_hat);
    const ChebGrid grid(n);
    line.h_nodes.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x2 = c_hat + d_hat * grid.nodes[i];
        line.h_nodes[i] = -cubic_interp(b_x0, db, b_line, x2) / (2.0 * std::numbers::pi);
    }
    return line;
}

namespace detail {
// One subtracted-singularity term; if the target hits a quadrature node, the
// limit -h'(t) is taken by a centered difference across the neighbors.
inline double subtracted_term(std::span<const double> hq, std::span<const double> xq,
                              double h_t, double t, int j) {
    const double d = t - xq[j];
    if (std::abs(d) > 1e-13) return (hq[j] - h_t) / d;
    const int m = int(xq.size());
    const int a = j > 0 ? j - 1 : j + 1;
    const int b = j + 1 < m ? j + 1 : j - 1;
    return -(hq[a] - hq[b]) / (xq[a] - xq[b]);
}
}  // namespace detail

// (1/pi) p.v. int sqrt(1-tau^2) h(tau) / (t - tau) dtau, by singularity
// subtraction: the smooth remainder goes through an m-node second-kind
// Gauss-Chebyshev rule and the subtracted part integrates exactly to h(t)*t.
// h is given at the n first-kind nodes and interpolated barycentrically.
inline double weighted_finite_hilbert(std::span<const double> h_nodes, double t,
                                      int quad_nodes = 2048) {
    if (!(std::abs(t) < 1.0))
        throw std::invalid_argument("weighted_finite_hilbert: |t| >= 1");
    const ChebGrid grid(int(h_nodes.size()));
    const GaussChebyshev2Rule rule = gauss_chebyshev2_rule(quad_nodes);
    const int m = quad_nodes;
    std::vector<double> hq(m);
    for (int j = 0; j < m; ++j) hq[j] = bary_eval(grid, h_nodes, rule.nodes[j]);
    const double h_t = bary_eval(grid, h_nodes, t);
    double acc = 0.0;
    for (int j = 0; j < m; ++j)
        acc += rule.weights[j] * detail::subtracted_term(hq, rule.nodes, h_t, t, j);
    return acc / std::numbers::pi + h_t * t;
}

// f_mu1(q_i) = c_mu1/pi - (1/pi) p.v. int sqrt(1-tau^2) h(tau)/(q_i - tau) dtau
// at every node.  The default quadrature size 2n never collides with the
// first-kind target nodes.
inline std::vector<double> tricomi_inverse(const StandardLine& line, int quad_nodes = 0) {
    const int n = line.n();
    if (n < 2) throw std::invalid_argument("tricomi_inverse: need >= 2 nodes");
    const int m = quad_nodes > 0 ? quad_nodes : 2 * n;
    const ChebGrid grid(n);
    const GaussChebyshev2Rule rule = gauss_chebyshev2_rule(m);
    std::vector<double> hq(m);
    for (int j = 0; j < m; ++j) hq[j] = bary_eval(grid, line.h_nodes, rule.nodes[j]);
    std::vector<double> f(n);
    const double c_over_pi = line.c_mu1 / std::numbers::pi;
    for (int i = 0; i < n; ++i) {
        const double t = grid.nodes[i];
        const double h_t = line.h_nodes[i];
        double acc = 0.0;
        for (int j = 0; j < m; ++j)
            acc += rule.weights[j] * detail::subtracted_term(hq, rule.nodes, h_t, t, j);
        f[i] = c_over_pi - (acc / std::numbers::pi + h_t * t);
    }
    return f;
}

// d_k = int t^k f_mu1(t) / sqrt(1-t^2) dt ~= (pi/n) sum_i q_i^k f_mu1(q_i)
// for k = 0..2M.  Requires n >= 2M+2 so the rule stays exact for the
// highest monomial against smooth f_mu1.
inline std::vector<double> compute_d(std::span<const double> f_mu1_nodes, int M) {
    const int n = int(f_mu1_nodes.size());
    if (n < 2 * M + 2) throw std::invalid_argument("compute_d: need n >= 2M+2 nodes");
    const ChebGrid grid(n);
    std::vector<double> d(2 * M + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        double pw = 1.0;
        for (int k = 0; k <= 2 * M; ++k) {
            d[k] += pw * f_mu1_nodes[i];
            pw *= grid.nodes[i];
        }
    }
    const double w = std::numbers::pi / n;
    for (auto& v : d) v *= w;
    return d;
}

// Truncated even/odd moment systems.  With mu_k = mu1^{2k}/(2k)!:
//   Q_ij = delta_ij + [j>=1] B_{2i} mu_j
//          - sum_{k=j+1}^{M} mu_k C(2k-1, 2j) T^{2i}_{2(k-j)-1},  0 <= i,j <= M
//   P_ij = delta_ij + sum_{k=j}^{M} mu_k C(2k-1, 2j-1) T^{2i-1}_{2(k-j)},
//          1 <= i,j <= M.
// Both are the identity at mu1 = 0.
inline MomentSystems assemble_systems(double mu1, int M, const CoeffCache& cache) {
    if (M < 1) throw std::invalid_argument("assemble_systems: M < 1");
    if (cache.max_order() < 4 * M + 2)
        throw std::invalid_argument("assemble_systems: cache depth < 4M+2");
    std::vector<double> mu_k(M + 1);
    mu_k[0] = 1.0;
    for (int k = 1; k <= M; ++k)
        mu_k[k] = mu_k[k - 1] * mu1 * mu1 / ((2.0 * k - 1.0) * (2.0 * k));

    MomentSystems sys;
    sys.M = M;
    sys.Q_hat = Matrix(M + 1);
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j) {
            double q = (i == j) ? 1.0 : 0.0;
            if (j >= 1) q += cache.B(2 * i) * mu_k[j];
            for (int k = j + 1; k <= M; ++k)
                q -= mu_k[k] * binomial(2 * k - 1, 2 * j) * cache.T(2 * (k - j) - 1, 2 * i);
            sys.Q_hat(i, j) = q;
        }
    sys.P_hat = Matrix(M);
    for (int i = 1; i <= M; ++i)
        for (int j = 1; j <= M; ++j) {
            double p = (i == j) ? 1.0 : 0.0;
            for (int k = j; k <= M; ++k)
                p += mu_k[k] * binomial(2 * k - 1, 2 * j - 1) * cache.T(2 * (k - j), 2 * i - 1);
            sys.P_hat(i - 1, j - 1) = p;
        }
    return sys;
}

struct MomentSolve {
    MomentVector moments;
    double cond_even = 0.0;
    double cond_odd = 0.0;
};

inline MomentSolve solve_moments(const MomentSystems& sys, std::span<const double> d) {
    const int M = sys.M;
    if (int(d.size()) != 2 * M + 1)
        throw std::invalid_argument("solve_moments: d must have length 2M+1");
    std::vector<double> d_even(M + 1), d_odd(M);
    for (int i = 0; i <= M; ++i) d_even[i] = d[2 * i];
    for (int i = 1; i <= M; ++i) d_odd[i - 1] = d[2 * i - 1];
    auto even = solve_dense(sys.Q_hat, d_even,
                            "solve_moments(even system, M=" + std::to_string(M) + ")");
    auto odd = solve_dense(sys.P_hat, d_odd,
                           "solve_moments(odd system, M=" + std::to_string(M) + ")");
    MomentSolve out;
    out.moments = MomentVector{M, std::move(even.x), std::move(odd.x)};
    out.cond_even = even.cond;
    out.cond_odd = odd.cond;
    return out;
}

// f(t) = [ f_mu1(t) - (1/pi) sum_{k=1}^M mu_k c_{2k}
//          + (1/pi) sum_{k=1}^M mu_k sum_{l=0}^{2k-1} (-1)^l C(2k-1,l) c_l T_{2k-1-l}(t) ]
//        / sqrt(1-t^2),
// with f_mu1 interpolated from its node samples.  Only |t| < 1 - edge_epsilon
// is admissible; outside, f is extended by zero by the callers.
inline double synthesize(std::span<const double> f_mu1_nodes, const MomentVector& c,
                         double mu1, double t) {
    if (!(std::abs(t) < 1.0 - edge_epsilon))
        throw std::invalid_argument("synthesize: |t| >= 1 - edge_epsilon");
    const int M = c.M;
    const ChebGrid grid(int(f_mu1_nodes.size()));
    double val = bary_eval(grid, f_mu1_nodes, t);

    // T_0..T_{2M-1}(t) by the recursion
    std::vector<double> T(std::max(2 * M, 1));
    T[0] = t;
    for (int nn = 1; nn < 2 * M; ++nn) T[nn] = t * T[nn - 1] - sqrt_weight_moment(nn - 1);

    double mu_k = 1.0;
    for (int k = 1; k <= M; ++k) {
        mu_k *= mu1 * mu1 / ((2.0 * k - 1.0) * (2.0 * k));
        val -= mu_k * c.even[k] / std::numbers::pi;
        double inner = 0.0;
        for (int l = 0; l <= 2 * k - 1; ++l) {
            const double sign = (l % 2 == 0) ? 1.0 : -1.0;
            inner += sign * binomial(2 * k - 1, l) * c.moment(l) * T[2 * k - 1 - l];
        }
        val += mu_k * inner / std::numbers::pi;
    }
    return val / std::sqrt(1.0 - t * t);
}

struct LineInversion {
    std::vector<double> f_nodes;      // f at the first-kind nodes (zero at the edges)
    std::vector<double> f_mu1_nodes;  // Tricomi output f_mu1 at the nodes
    MomentVector moments;
    double cond_even = 0.0;
    double cond_odd = 0.0;
};

// Full per-line pipeline: Tricomi inversion, moment quadrature, system
// assembly and solve, then synthesis at every node.
inline LineInversion invert_line(const StandardLine& line, int M, const CoeffCache& cache,
                                 int quad_nodes = 0) {
    LineInversion out;
    out.f_mu1_nodes = tricomi_inverse(line, quad_nodes);
    const std::vector<double> d = compute_d(out.f_mu1_nodes, M);
    const MomentSystems sys = assemble_systems(line.mu1, M, cache);
    MomentSolve solved = solve_moments(sys, d);
    out.moments = std::move(solved.moments);
    out.cond_even = solved.cond_even;
    out.cond_odd = solved.cond_odd;
    const ChebGrid grid(line.n());
    out.f_nodes.assign(line.n(), 0.0);
    for (int i = 0; i < line.n(); ++i)
        if (std::abs(grid.nodes[i]) < 1.0 - edge_epsilon)
            out.f_nodes[i] = synthesize(out.f_mu1_nodes, out.moments, line.mu1, grid.nodes[i]);
    return out;
}

}  // namespace chtrecon
