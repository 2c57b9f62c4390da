// Sinogram container plus data conditioning: s-derivative, Poisson noise,
// and truncation masking.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace chtrecon {

// Projection samples g(s, phi) on an equispaced grid.  Views cover [0, pi)
// as phi_k = k*pi/n_views; ray offsets are bin centers on [-s_max, s_max].
// The phi = 0 and phi = pi rows are stored separately because the line
// normalization needs both boundary views.
struct Sinogram {
    int n_views = 0;
    int n_rays = 0;
    double s_max = 0.0;
    double mu0 = 0.0;
    std::vector<double> phi;      // size n_views
    std::vector<double> s;        // size n_rays, strictly increasing, equispaced
    std::vector<double> values;   // n_views * n_rays, view-major
    std::vector<double> row0;     // g(., 0), size n_rays (may be empty)
    std::vector<double> row_pi;   // g(., pi), size n_rays (may be empty)
    std::vector<uint8_t> mask;    // empty = all measured; 1 = measured
    std::vector<uint8_t> mask0;   // masks for the boundary rows
    std::vector<uint8_t> mask_pi;

    double ds() const { return 2.0 * s_max / n_rays; }
    double s_origin() const { return s.empty() ? 0.0 : s.front(); }
    double value(int v, int r) const { return values[std::size_t(v) * n_rays + r]; }
    double& value(int v, int r) { return values[std::size_t(v) * n_rays + r]; }
    bool measured(int v, int r) const {
        return mask.empty() || mask[std::size_t(v) * n_rays + r] != 0;
    }
    bool has_endpoint_rows() const { return !row0.empty() && !row_pi.empty(); }

    static Sinogram make(int n_views, int n_rays, double s_max, double mu0) {
        if (n_views < 1 || n_rays < 1)
            throw std::invalid_argument("Sinogram: non-positive dimensions");
        if (s_max <= 0.0) throw std::invalid_argument("Sinogram: s_max must be positive");
        Sinogram g;
        g.n_views = n_views;
        g.n_rays = n_rays;
        g.s_max = s_max;
        g.mu0 = mu0;
        g.phi.resize(n_views);
        for (int k = 0; k < n_views; ++k) g.phi[k] = k * std::numbers::pi / n_views;
        g.s.resize(n_rays);
        const double ds = 2.0 * s_max / n_rays;
        for (int j = 0; j < n_rays; ++j) g.s[j] = -s_max + (j + 0.5) * ds;
        g.values.assign(std::size_t(n_views) * n_rays, 0.0);
        return g;
    }
};

// d/ds of a sinogram on the same grid.
struct DerivativeSinogram {
    int n_views = 0;
    int n_rays = 0;
    double s_max = 0.0;
    std::vector<double> phi;
    std::vector<double> s;
    std::vector<double> values;
    std::vector<uint8_t> mask;  // empty = all measured

    double ds() const { return 2.0 * s_max / n_rays; }
    double value(int v, int r) const { return values[std::size_t(v) * n_rays + r]; }
    bool measured(int v, int r) const {
        return mask.empty() || mask[std::size_t(v) * n_rays + r] != 0;
    }
};

// Second-order finite differences in s: central in the interior, one-sided
// at the two edge rays.  A bin of the result is measured only if its whole
// stencil is measured.
inline DerivativeSinogram differentiate_s(const Sinogram& g) {
    if (g.n_rays < 3) throw std::invalid_argument("differentiate_s: need n_rays >= 3");
    DerivativeSinogram d;
    d.n_views = g.n_views;
    d.n_rays = g.n_rays;
    d.s_max = g.s_max;
    d.phi = g.phi;
    d.s = g.s;
    d.values.assign(g.values.size(), 0.0);
    const double inv2 = 1.0 / (2.0 * g.ds());
    const bool masked = !g.mask.empty();
    if (masked) d.mask.assign(g.values.size(), 0);
    for (int v = 0; v < g.n_views; ++v) {
        const int n = g.n_rays;
        auto set = [&](int r, double val, bool ok) {
            d.values[std::size_t(v) * n + r] = ok ? val : 0.0;
            if (masked) d.mask[std::size_t(v) * n + r] = ok ? 1 : 0;
        };
        set(0, (-3.0 * g.value(v, 0) + 4.0 * g.value(v, 1) - g.value(v, 2)) * inv2,
            g.measured(v, 0) && g.measured(v, 1) && g.measured(v, 2));
        for (int r = 1; r < n - 1; ++r)
            set(r, (g.value(v, r + 1) - g.value(v, r - 1)) * inv2,
                g.measured(v, r - 1) && g.measured(v, r) && g.measured(v, r + 1));
        set(n - 1,
            (3.0 * g.value(v, n - 1) - 4.0 * g.value(v, n - 2) + g.value(v, n - 3)) * inv2,
            g.measured(v, n - 1) && g.measured(v, n - 2) && g.measured(v, n - 3));
    }
    return d;
}

namespace detail {
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4a9cec9f2c5a7ULL;  // odd multiplier variant
    return x ^ (x >> 31);
}
}  // namespace detail

struct NoisySinogram {
    Sinogram sinogram;
    long long clamped = 0;  // number of negative input bins clamped to zero
};

// Count-scaling Poisson noise: with alpha = total_counts / sum(values), each
// bin becomes Poisson(alpha * value) / alpha.  Each bin owns a random stream
// derived solely from (seed, bin index), so the result is reproducible and
// order-independent.  The phi = 0 boundary row is kept identical to view row
// zero; the phi = pi row is noised as its own set of bins.
inline NoisySinogram add_poisson_noise(const Sinogram& g, double total_counts, uint64_t seed) {
    if (total_counts <= 0.0)
        throw std::invalid_argument("add_poisson_noise: total_counts must be positive");
    NoisySinogram out;
    out.sinogram = g;
    Sinogram& r = out.sinogram;

    double sum = 0.0;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        if (r.values[i] < 0.0) {
            r.values[i] = 0.0;
            ++out.clamped;
        }
        sum += r.values[i];
    }
    if (sum <= 0.0) throw std::invalid_argument("add_poisson_noise: all-zero sinogram");
    const double alpha = total_counts / sum;

    auto draw = [&](double value, uint64_t index) {
        if (value <= 0.0) return 0.0;
        std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(index)));
        std::poisson_distribution<long long> pois(alpha * value);
        return double(pois(rng)) / alpha;
    };

    const uint64_t n_main = r.values.size();
    for (uint64_t i = 0; i < n_main; ++i)
        if (r.mask.empty() || r.mask[i]) r.values[i] = draw(r.values[i], i);
    if (!r.row_pi.empty()) {
        for (uint64_t j = 0; j < r.row_pi.size(); ++j) {
            if (r.row_pi[j] < 0.0) {
                r.row_pi[j] = 0.0;
                ++out.clamped;
            }
            if (r.mask_pi.empty() || r.mask_pi[j])
                r.row_pi[j] = draw(r.row_pi[j], n_main + j);
        }
    }
    if (!r.row0.empty() && r.n_views > 0 && r.phi[0] == 0.0)
        for (int j = 0; j < r.n_rays; ++j) r.row0[j] = r.value(0, j);
    return out;
}

// Axis-aligned rectangle, used both as truncation ROI and metric region.
struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    bool degenerate() const { return !(x1 > x0) || !(y1 > y0); }
    bool contains(double x, double y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
};

// Keeps exactly the bins whose line {s*theta + t*theta_perp} meets the
// closed box: s must lie between the min and max projections of the four
// corners onto theta.  Masked-out bins are zeroed.  Idempotent; composes
// with an existing mask by intersection.
inline Sinogram apply_truncation(const Sinogram& g, const Box& box) {
    if (box.degenerate()) throw std::invalid_argument("apply_truncation: degenerate box");
    Sinogram out = g;
    if (out.mask.empty()) out.mask.assign(out.values.size(), 1);

    auto keep_range = [&](double phi, double& lo, double& hi) {
        const double c = std::cos(phi), sn = std::sin(phi);
        lo = 1e300;
        hi = -1e300;
        for (double cx : {box.x0, box.x1})
            for (double cy : {box.y0, box.y1}) {
                const double p = cx * c + cy * sn;
                lo = std::min(lo, p);
                hi = std::max(hi, p);
            }
    };

    for (int v = 0; v < out.n_views; ++v) {
        double lo, hi;
        keep_range(out.phi[v], lo, hi);
        for (int r = 0; r < out.n_rays; ++r) {
            const std::size_t i = std::size_t(v) * out.n_rays + r;
            if (out.s[r] < lo || out.s[r] > hi) out.mask[i] = 0;
            if (!out.mask[i]) out.values[i] = 0.0;
        }
    }
    auto mask_row = [&](std::vector<double>& row, std::vector<uint8_t>& m, double phi) {
        if (row.empty()) return;
        if (m.empty()) m.assign(row.size(), 1);
        double lo, hi;
        keep_range(phi, lo, hi);
        for (int r = 0; r < int(row.size()); ++r) {
            if (out.s[r] < lo || out.s[r] > hi) m[r] = 0;
            if (!m[r]) row[r] = 0.0;
        }
    };
    mask_row(out.row0, out.mask0, 0.0);
    mask_row(out.row_pi, out.mask_pi, std::numbers::pi);
    return out;
}

}  // namespace chtrecon
