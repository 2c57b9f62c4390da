// Test-only quadrature oracles, kept independent of the recursion- and
// table-based implementation paths they check.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "chtrecon/tables.hpp"

namespace oracles {

// (1/pi) int t^m / sqrt(1-t^2) dt by an n-node first-kind rule.
inline double chebyshev_moment_quad(int m, int n = 2000) {
    auto rule = chtrecon::gauss_chebyshev_rule(n);
    double acc = 0.0;
    for (double q : rule.nodes) acc += std::pow(q, m);
    return acc / n;
}

// (1/pi) int t^n sqrt(1-t^2) dt by an m-node second-kind rule.
inline double sqrt_weight_moment_quad(int n, int m = 2000) {
    auto rule = chtrecon::gauss_chebyshev2_rule(m);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += rule.weights[j] * std::pow(rule.nodes[j], n);
    return acc / std::numbers::pi;
}

// (1/pi) p.v. int tau^n sqrt(1-tau^2) / (t - tau) dtau by singularity
// subtraction on the monomial: the smooth remainder goes through a
// second-kind rule and the subtracted part uses the identity
// (1/pi) p.v. int sqrt(1-tau^2)/(t-tau) dtau = t.
inline double pv_weighted_power_quad(int n, double t, int m = 4096) {
    auto rule = chtrecon::gauss_chebyshev2_rule(m);
    const double st = std::pow(t, n);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
        const double x = rule.nodes[j];
        const double d = t - x;
        // (tau^n - t^n)/(t - tau) is a polynomial; evaluate it stably
        double q;
        if (std::abs(d) > 1e-9) {
            q = (std::pow(x, n) - st) / d;
        } else {
            q = -n * std::pow(t, n - 1);
        }
        acc += rule.weights[j] * q;
    }
    return acc / std::numbers::pi + st * t;
}

// (1/pi) int t^j T_i(t) / sqrt(1-t^2) dt with T_i from the recursion,
// integrated by an n-node first-kind rule.
inline double t_scalar_quad(int i, int j, int n = 2000) {
    auto rule = chtrecon::gauss_chebyshev_rule(n);
    double acc = 0.0;
    for (double q : rule.nodes)
        acc += std::pow(q, j) * chtrecon::weighted_hilbert_power(i, q);
    return acc / n;
}

// Forward cosh-weighted Hilbert transform
//   h(tau) = int_{-1}^{1} cosh(mu1 (tau - t)) f(t) / (pi (tau - t)) dt
// by singularity subtraction: subtract f(tau)/(tau - t), integrate the smooth
// remainder with an m-node first-kind rule (weight reinserted), and add the
// analytic p.v. integral f(tau)/pi * ln((1+tau)/(1-tau)).
inline double forward_cht(const std::function<double(double)>& f, double mu1, double tau,
                          int m = 4096) {
    auto rule = chtrecon::gauss_chebyshev_rule(m);
    const double ft = f(tau);
    double acc = 0.0;
    for (double t : rule.nodes) {
        const double d = tau - t;
        double q;
        if (std::abs(d) > 1e-9) {
            q = (std::cosh(mu1 * d) * f(t) - ft) / d;
        } else {
            // removable singularity: limit is -f'(tau); a centered difference
            // of f at +-1e-6 is plenty at the tolerances used here
            q = -(f(tau + 1e-6) - f(tau - 1e-6)) / 2e-6;
        }
        acc += q * std::sqrt(1.0 - t * t);
    }
    acc *= std::numbers::pi / m;  // first-kind rule with the weight reinserted
    return acc / std::numbers::pi +
           ft / std::numbers::pi * std::log((1.0 + tau) / (1.0 - tau));
}

// int_{-1}^{1} f(t) cosh(mu1 t) dt by an m-node first-kind rule with the
// weight reinserted.
inline double cosh_moment(const std::function<double(double)>& f, double mu1, int m = 4096) {
    auto rule = chtrecon::gauss_chebyshev_rule(m);
    double acc = 0.0;
    for (double t : rule.nodes)
        acc += f(t) * std::cosh(mu1 * t) * std::sqrt(1.0 - t * t);
    return acc * std::numbers::pi / m;
}

// int_{-1}^{1} f(t) t^k dt, same scheme.
inline double power_moment(const std::function<double(double)>& f, int k, int m = 4096) {
    auto rule = chtrecon::gauss_chebyshev_rule(m);
    double acc = 0.0;
    for (double t : rule.nodes)
        acc += f(t) * std::pow(t, k) * std::sqrt(1.0 - t * t);
    return acc * std::numbers::pi / m;
}

}  // namespace oracles
