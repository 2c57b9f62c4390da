// Ellipse phantom: activity evaluation, rasterization and the analytic
// exponential Radon transform g(s, phi) = int p(s*theta + t*theta_perp)
// exp(mu0 t) dt, summed ellipse by ellipse in closed form.
#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chtrecon/parallel.hpp"
#include "chtrecon/sinogram.hpp"

namespace chtrecon {

struct Ellipse {
    double cx = 0.0, cy = 0.0;   // center
    double a = 0.0, b = 0.0;     // semi-axes along the rotated x1/x2 directions
    double angle_deg = 0.0;      // counterclockwise rotation of axis 1 from x1
    double intensity = 0.0;      // additive activity value
};

// Activity distribution: sum of ellipse intensities, zero outside the
// centered support disc of radius support_radius.
struct Phantom {
    std::vector<Ellipse> ellipses;
    double support_radius = 1.0;
};

inline Phantom make_phantom(std::vector<Ellipse> ellipses, double support_radius = 1.0) {
    if (support_radius <= 0.0) throw std::invalid_argument("Phantom: support_radius <= 0");
    for (const auto& e : ellipses) {
        if (e.a <= 0.0 || e.b <= 0.0)
            throw std::invalid_argument("Phantom: ellipse semi-axes must be positive");
        // bounding-box containment check against the support disc
        const double r = std::hypot(std::abs(e.cx) + std::max(e.a, e.b),
                                    std::abs(e.cy) + std::max(e.a, e.b));
        if (r > std::sqrt(2.0) * support_radius + 1e-12)
            throw std::invalid_argument("Phantom: ellipse outside the support disc");
    }
    return Phantom{std::move(ellipses), support_radius};
}

// The ten-ellipse activity phantom (a Shepp-Logan variant) on the unit disc.
inline Phantom default_phantom() {
    return make_phantom({
        {0.0, 0.0, 0.69, 0.92, 0.0, 0.5},
        {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.2},
        {0.22, 0.0, 0.31, 0.11, 72.0, -0.2},
        {-0.22, 0.0, 0.41, 0.16, 108.0, -0.2},
        {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
        {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
        {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
        {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
        {0.0, -0.605, 0.023, 0.023, 0.0, 0.1},
        {0.06, -0.605, 0.203, 0.046, 0.0, 0.1},
    });
}

// One ellipse per line: cx cy a b angle_deg intensity.  '#' starts a comment.
// An optional line "support_radius <R>" overrides the default unit disc.
inline Phantom load_phantom(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_phantom: cannot open " + path);
    std::vector<Ellipse> ellipses;
    double radius = 1.0;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "support_radius") {
            if (!(ls >> radius)) throw std::runtime_error("load_phantom: bad support_radius");
            continue;
        }
        Ellipse e;
        e.cx = std::stod(first);
        if (!(ls >> e.cy >> e.a >> e.b >> e.angle_deg >> e.intensity))
            throw std::runtime_error("load_phantom: malformed ellipse record: " + line);
        ellipses.push_back(e);
    }
    return make_phantom(std::move(ellipses), radius);
}

// Boundary points count as inside.
inline bool ellipse_contains(const Ellipse& e, double x, double y) {
    const double t = e.angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(t), s = std::sin(t);
    const double u = c * (x - e.cx) + s * (y - e.cy);
    const double v = -s * (x - e.cx) + c * (y - e.cy);
    return (u / e.a) * (u / e.a) + (v / e.b) * (v / e.b) <= 1.0;
}

inline double evaluate(const Phantom& p, double x, double y) {
    if (x * x + y * y > p.support_radius * p.support_radius) return 0.0;
    double v = 0.0;
    for (const auto& e : p.ellipses)
        if (ellipse_contains(e, x, y)) v += e.intensity;
    return v;
}

// Square pixel grid: n1 x n2 values on [-extent, extent]^2, pixel centers at
// -extent + (k + 1/2) * 2*extent/n.  Values are stored column-major in x1,
// so one vertical line (fixed x1) is contiguous.
struct ImageGrid {
    int n1 = 0, n2 = 0;
    double extent = 1.0;
    std::vector<double> values;

    ImageGrid() = default;
    ImageGrid(int n1_, int n2_, double extent_)
        : n1(n1_), n2(n2_), extent(extent_), values(std::size_t(n1_) * n2_, 0.0) {
        if (n1 < 1 || n2 < 1 || extent <= 0.0)
            throw std::invalid_argument("ImageGrid: bad geometry");
    }
    double pixel_size1() const { return 2.0 * extent / n1; }
    double pixel_size2() const { return 2.0 * extent / n2; }
    double x1(int k) const { return -extent + (k + 0.5) * pixel_size1(); }
    double x2(int k) const { return -extent + (k + 0.5) * pixel_size2(); }
    double at(int i1, int i2) const { return values[std::size_t(i1) * n2 + i2]; }
    double& at(int i1, int i2) { return values[std::size_t(i1) * n2 + i2]; }
};

inline ImageGrid rasterize(const Phantom& p, int n, double extent) {
    ImageGrid img(n, n, extent);
    for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
            img.at(i1, i2) = evaluate(p, img.x1(i1), img.x2(i2));
    return img;
}

namespace detail {
// sinh(x)/x with a series branch that keeps the mu0 -> 0 limit exact.
inline double sinhc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}
}  // namespace detail

// Exponentially weighted line integral along {s*theta + t*theta_perp},
// theta = (cos phi, sin phi), theta_perp = (-sin phi, cos phi).  Per ellipse
// the chord endpoints t-, t+ solve a quadratic, and the weight integrates to
// (exp(mu0 t+) - exp(mu0 t-))/mu0 = L * exp(mu0 tm) * sinhc(mu0 L / 2)
// with L the chord length and tm the chord midpoint.
inline double ert_line(const Phantom& p, double mu0, double s, double phi) {
    const double ct = std::cos(phi), st = std::sin(phi);
    double g = 0.0;
    for (const auto& e : p.ellipses) {
        const double ta = e.angle_deg * std::numbers::pi / 180.0;
        const double ca = std::cos(ta), sa = std::sin(ta);
        // origin of the line and its direction, in the ellipse frame
        const double ox = s * ct - e.cx, oy = s * st - e.cy;
        const double w1 = (ca * ox + sa * oy) / e.a;
        const double w2 = (-sa * ox + ca * oy) / e.b;
        const double v1 = (ca * -st + sa * ct) / e.a;
        const double v2 = (sa * st + ca * ct) / e.b;
        const double A = v1 * v1 + v2 * v2;
        const double B = 2.0 * (w1 * v1 + w2 * v2);
        const double C = w1 * w1 + w2 * w2 - 1.0;
        const double disc = B * B - 4.0 * A * C;
        if (disc <= 0.0) continue;
        const double sq = std::sqrt(disc);
        const double t_mid = -B / (2.0 * A);
        const double chord = sq / A;
        g += e.intensity * chord * std::exp(mu0 * t_mid) * detail::sinhc(0.5 * mu0 * chord);
    }
    return g;
}

// Samples the exponential Radon transform on n_views views over [0, pi) and
// n_rays bin-centered offsets, and stores the two boundary-view rows phi = 0
// and phi = pi (the latter evaluated explicitly).
inline Sinogram project(const Phantom& p, double mu0, int n_views, int n_rays,
                        double s_max, int threads = 0) {
    if (n_views < 2 || n_rays < 2)
        throw std::invalid_argument("project: need n_views >= 2 and n_rays >= 2");
    Sinogram g = Sinogram::make(n_views, n_rays, s_max, mu0);
    parallel_for(0, n_views, threads, [&](int v) {
        for (int r = 0; r < n_rays; ++r)
            g.value(v, r) = ert_line(p, mu0, g.s[r], g.phi[v]);
    });
    g.row0.assign(g.values.begin(), g.values.begin() + n_rays);
    g.row_pi.resize(n_rays);
    for (int r = 0; r < n_rays; ++r)
        g.row_pi[r] = ert_line(p, mu0, g.s[r], std::numbers::pi);
    return g;
}

}  // namespace chtrecon
