// Special coefficients for the moment-based inversion of the finite
// cosh-weighted Hilbert transform: Chebyshev-weight monomial moments B_n,
// sqrt-weight moments S_n, the weighted Hilbert power functions T_n(t),
// the scalars T_i^j, and Gauss-Chebyshev quadrature rules.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace chtrecon {

// B_m = (1/pi) \int_{-1}^{1} t^m / sqrt(1-t^2) dt.
// Zero for odd m, B_0 = 1, and B_{2i} = (2i-1)!!/(2i)!! for i >= 1,
// computed by the ratio recurrence B_{2i} = B_{2i-2} * (2i-1)/(2i).
// (The equivalent double-factorial identity (2i-2)!!/(2i)!! sometimes seen
// in print is wrong already at i = 2; the defining integral gives 3/8.)
inline double chebyshev_moment(int m) {
    if (m < 0) throw std::invalid_argument("chebyshev_moment: m < 0");
    if (m % 2 != 0) return 0.0;
    double b = 1.0;
    for (int i = 1; 2 * i <= m; ++i) b *= (2.0 * i - 1.0) / (2.0 * i);
    return b;
}

// S_n = (1/pi) \int_{-1}^{1} t^n sqrt(1-t^2) dt = B_n - B_{n+2}; zero for odd n.
inline double sqrt_weight_moment(int n) {
    if (n < 0) throw std::invalid_argument("sqrt_weight_moment: n < 0");
    if (n % 2 != 0) return 0.0;
    return chebyshev_moment(n) - chebyshev_moment(n + 2);
}

// T_n(t) = (1/pi) p.v. \int_{-1}^{1} tau^n sqrt(1-tau^2) / (t - tau) dtau,
// a degree-(n+1) polynomial evaluated by T_n = t*T_{n-1} - S_{n-1}, T_0 = t.
// Parity: T_n(-t) = (-1)^{n+1} T_n(t), forced by the odd base case T_0.
inline double weighted_hilbert_power(int n, double t) {
    if (n < 0) throw std::invalid_argument("weighted_hilbert_power: n < 0");
    double v = t;
    for (int k = 1; k <= n; ++k) v = t * v - sqrt_weight_moment(k - 1);
    return v;
}

// Binomial coefficient as a double (exact for the small orders used here).
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// T_i^j = (1/pi) \int_{-1}^{1} t^j T_i(t) / sqrt(1-t^2) dt.
// Zero when i and j share parity.  Otherwise reduced by
//   T_{2n}^{2k+1} = T_{2n-1}^{2k+2}
//   T_{2n+1}^{2k} = T_{2n}^{2k+1} - S_{2n} B_{2k}
// down to the base row T_0^{2k+1} = B_{2k+2}.
inline double t_scalar(int i, int j) {
    if (i < 0 || j < 0) throw std::invalid_argument("t_scalar: negative index");
    if ((i + j) % 2 == 0) return 0.0;
    double corr = 0.0;
    while (i > 0) {
        if (i % 2 == 1) corr += sqrt_weight_moment(i - 1) * chebyshev_moment(j);
        --i;
        ++j;
    }
    return chebyshev_moment(j + 1) - corr;
}

// n-node Gauss-Chebyshev rule of the first kind:
//   \int_{-1}^{1} s(t)/sqrt(1-t^2) dt ~= (pi/n) sum_i s(q_i),
// q_i = cos((2i-1)pi/(2n)), exact for polynomials of degree <= 2n-1.
struct GaussChebyshevRule {
    std::vector<double> nodes;  // strictly decreasing, in (-1,1)
    double weight = 0.0;        // common weight pi/n
};

inline GaussChebyshevRule gauss_chebyshev_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_chebyshev_rule: n < 1");
    GaussChebyshevRule rule;
    rule.nodes.resize(n);
    for (int i = 1; i <= n; ++i)
        rule.nodes[i - 1] = std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * n));
    rule.weight = std::numbers::pi / n;
    return rule;
}

// m-node Gauss-Chebyshev rule of the second kind:
//   \int_{-1}^{1} g(t) sqrt(1-t^2) dt ~= sum_j w_j g(x_j),
// x_j = cos(j pi/(m+1)), w_j = (pi/(m+1)) sin^2(j pi/(m+1)).
struct GaussChebyshev2Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussChebyshev2Rule gauss_chebyshev2_rule(int m) {
    if (m < 1) throw std::invalid_argument("gauss_chebyshev2_rule: m < 1");
    GaussChebyshev2Rule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int j = 1; j <= m; ++j) {
        const double a = j * std::numbers::pi / (m + 1.0);
        rule.nodes[j - 1] = std::cos(a);
        rule.weights[j - 1] = std::numbers::pi / (m + 1.0) * std::sin(a) * std::sin(a);
    }
    return rule;
}

// Immutable tables of B, S and T_i^j up to a fixed order.  Safe to share
// across concurrent line solvers.
class CoeffCache {
  public:
    explicit CoeffCache(int max_order) : max_order_(max_order) {
        if (max_order < 0) throw std::invalid_argument("CoeffCache: max_order < 0");
        b_.resize(max_order + 1);
        s_.resize(max_order + 1);
        for (int n = 0; n <= max_order; ++n) {
            b_[n] = chebyshev_moment(n);
            s_[n] = sqrt_weight_moment(n);
        }
        t_ij_.resize(std::size_t(max_order + 1) * (max_order + 1));
        for (int i = 0; i <= max_order; ++i)
            for (int j = 0; j <= max_order; ++j)
                t_ij_[std::size_t(i) * (max_order + 1) + j] = t_scalar(i, j);
    }

    int max_order() const { return max_order_; }
    double B(int n) const { return b_.at(n); }
    double S(int n) const { return s_.at(n); }
    double T(int i, int j) const {
        if (i < 0 || j < 0 || i > max_order_ || j > max_order_)
            throw std::out_of_range("CoeffCache::T index out of range");
        return t_ij_[std::size_t(i) * (max_order_ + 1) + j];
    }

  private:
    int max_order_;
    std::vector<double> b_, s_, t_ij_;
};

}  // namespace chtrecon
