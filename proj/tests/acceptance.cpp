// Acceptance checks for the full reconstruction chain.  Each criterion
// prints exactly one PASS/FAIL line; the exit status is the number of
// failed criteria.
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "chtrecon/cht.hpp"
#include "chtrecon/phantom.hpp"
#include "chtrecon/recon.hpp"
#include "chtrecon/sinogram.hpp"
#include "chtrecon/tables.hpp"
#include "oracles.hpp"

using namespace chtrecon;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("%s: criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", idx, name,
                detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double bump(double t) { return (1.0 - t * t) * (1.0 - t * t); }

double bump_moment(int m) {
    if (m % 2 != 0) return 0.0;
    return 2.0 * (1.0 / (m + 1.0) - 2.0 / (m + 3.0) + 1.0 / (m + 5.0));
}

StandardLine bump_line(double mu1, int n) {
    StandardLine line;
    line.mu1 = mu1;
    line.c_mu1 = oracles::cosh_moment(bump, mu1);
    const ChebGrid grid(n);
    line.h_nodes.resize(n);
    for (int i = 0; i < n; ++i)
        line.h_nodes[i] = oracles::forward_cht(bump, mu1, grid.nodes[i]);
    return line;
}

double round_trip_error(const LineInversion& inv, int n) {
    const ChebGrid grid(n);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(grid.nodes[i]) > 0.95) continue;
        const double d = inv.f_nodes[i] - bump(grid.nodes[i]);
        num += d * d;
        den += bump(grid.nodes[i]) * bump(grid.nodes[i]);
    }
    return std::sqrt(num / den);
}

// criterion 1: table recursions against p.v. quadrature oracles
void criterion_tables() {
    double worst_t = 0.0, worst_ts = 0.0, worst_parity = 0.0;
    for (int n = 0; n <= 12; ++n)
        for (int k = 0; k <= 100; ++k) {
            const double t = -0.99 + 1.98 * k / 100.0;
            worst_t = std::max(worst_t, std::abs(weighted_hilbert_power(n, t) -
                                                 oracles::pv_weighted_power_quad(n, t)));
            const double sign = (n % 2 == 0) ? -1.0 : 1.0;
            worst_parity =
                std::max(worst_parity, std::abs(weighted_hilbert_power(n, -t) -
                                                sign * weighted_hilbert_power(n, t)));
        }
    for (int i = 0; i <= 12; ++i)
        for (int j = 0; i + j <= 12; ++j)
            worst_ts = std::max(worst_ts,
                                std::abs(t_scalar(i, j) - oracles::t_scalar_quad(i, j)));
    const bool ok = worst_t <= 1e-10 && worst_ts <= 1e-8 && worst_parity <= 1e-12;
    report(1, "weighted Hilbert tables vs quadrature", ok,
           "T_n err " + fmt(worst_t) + ", T_i^j err " + fmt(worst_ts) + ", parity err " +
               fmt(worst_parity));
}

// criterion 2: Tricomi inversion of the exact pair h = t, c = pi/2
void criterion_tricomi() {
    const int n = 400;
    const ChebGrid grid(n);
    StandardLine line;
    line.mu1 = 0.0;
    line.c_mu1 = pi / 2.0;
    line.h_nodes.assign(grid.nodes.begin(), grid.nodes.end());
    const std::vector<double> f_mu1 = tricomi_inverse(line);
    double num = 0.0;
    long long cnt = 0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(grid.nodes[i]) > 0.95) continue;
        const double w = std::sqrt(1.0 - grid.nodes[i] * grid.nodes[i]);
        const double d = f_mu1[i] / w - w;
        num += d * d;
        ++cnt;
    }
    const double err = std::sqrt(num / cnt);
    report(2, "Tricomi formula on a known pair", err <= 1e-6, "L2 err " + fmt(err));
}

// criterion 3: full per-line round trips and M-monotonicity
void criterion_round_trip() {
    const int n = 400;
    const CoeffCache cache(4 * 6 + 2);
    bool ok = true;
    std::string detail;
    const std::vector<std::pair<double, double>> cases = {
        {0.5, 1e-3}, {1.5, 1e-3}, {3.0, 1e-2}};
    for (auto [mu1, tol] : cases) {
        const double err = round_trip_error(invert_line(bump_line(mu1, n), 6, cache), n);
        ok = ok && err <= tol;
        detail += "mu1=" + fmt(mu1) + ": " + fmt(err) + "  ";
    }
    const StandardLine line = bump_line(1.5, n);
    double prev = 1e300;
    for (int m : {2, 4, 6}) {
        const CoeffCache c(4 * m + 2);
        const double err = round_trip_error(invert_line(line, m, c), n);
        ok = ok && err <= prev * (1.0 + 1e-12);
        prev = err;
    }
    report(3, "cosh-Hilbert round trips", ok, detail + "M-monotone at mu1=1.5");
}

// criterion 4: recovered moments and matrix assembly vs brute force
void criterion_moments() {
    const int n = 400, M = 6;
    const double mu1 = 1.5;
    const CoeffCache cache(4 * M + 2);
    const LineInversion inv = invert_line(bump_line(mu1, n), M, cache);
    double worst_rel = 0.0;
    for (int k = 0; k <= 8; ++k) {
        const double exact = bump_moment(k);
        const double err = std::abs(inv.moments.moment(k) - exact);
        worst_rel = std::max(worst_rel, exact == 0.0 ? err : err / std::abs(exact));
    }

    const MomentSystems sys = assemble_systems(mu1, M, cache);
    std::vector<double> mu_k(M + 1, 1.0);
    for (int k = 1; k <= M; ++k)
        mu_k[k] = mu_k[k - 1] * mu1 * mu1 / ((2.0 * k - 1.0) * (2.0 * k));
    double worst_entry = 0.0;
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j) {
            double q = (i == j) ? 1.0 : 0.0;
            if (j >= 1) q += oracles::chebyshev_moment_quad(2 * i) * mu_k[j];
            for (int k = j + 1; k <= M; ++k)
                q -= mu_k[k] * binomial(2 * k - 1, 2 * j) *
                     oracles::t_scalar_quad(2 * (k - j) - 1, 2 * i);
            worst_entry = std::max(worst_entry, std::abs(sys.Q_hat(i, j) - q));
        }
    for (int i = 1; i <= M; ++i)
        for (int j = 1; j <= M; ++j) {
            double p = (i == j) ? 1.0 : 0.0;
            for (int k = j; k <= M; ++k)
                p += mu_k[k] * binomial(2 * k - 1, 2 * j - 1) *
                     oracles::t_scalar_quad(2 * (k - j), 2 * i - 1);
            worst_entry = std::max(worst_entry, std::abs(sys.P_hat(i - 1, j - 1) - p));
        }
    const bool ok = worst_rel <= 1e-4 && worst_entry <= 1e-8;
    report(4, "moment recovery and system assembly", ok,
           "moment rel err " + fmt(worst_rel) + ", entry err " + fmt(worst_entry));
}

// criteria 5 and 8 share the full-pipeline reconstruction at mu0 = 1.5
ImageGrid pipeline_image_256(double mu0) {
    const Phantom p = default_phantom();
    const Sinogram g = project(p, mu0, 720, 400, 1.0);
    ReconConfig cfg;
    cfg.mu0 = mu0;
    cfg.grid_n = 256;
    cfg.moment_order = 6;
    return reconstruct(cfg, g).image;
}

void criterion_pipeline(const ImageGrid& img15) {
    const Phantom p = default_phantom();
    const ImageGrid ref = rasterize(p, 256, 1.0);
    const double err15 = rmse(img15, ref, std::nullopt, 0.95);
    const ImageGrid img30 = pipeline_image_256(3.0);
    const double err30 = rmse(img30, ref, std::nullopt, 0.95);
    const bool ok = err15 <= 0.05 && std::isfinite(err30);
    report(5, "full pipeline at 720x400, 256^2", ok,
           "rmse mu0=1.5: " + fmt(err15) + ", mu0=3: " + fmt(err30));
}

void criterion_truncation() {
    const Phantom p = default_phantom();
    const double mu0 = 1.5;
    const Sinogram g = project(p, mu0, 720, 400, 1.0);
    const Box roi{-0.45, -1.0, 0.45, 1.0};
    const Sinogram gt = apply_truncation(g, roi);
    ReconConfig cfg;
    cfg.mu0 = mu0;
    cfg.grid_n = 256;
    cfg.moment_order = 6;
    const ImageGrid full = reconstruct(cfg, g).image;
    cfg.roi_box = roi;
    const ImageGrid part = reconstruct(cfg, gt).image;
    double num = 0.0, den = 0.0;
    for (int i1 = 0; i1 < 256; ++i1) {
        if (std::abs(full.x1(i1)) > 0.4) continue;
        for (int i2 = 0; i2 < 256; ++i2) {
            const double d = part.at(i1, i2) - full.at(i1, i2);
            num += d * d;
            den += full.at(i1, i2) * full.at(i1, i2);
        }
    }
    const double rel = std::sqrt(num / den);
    report(6, "truncated-data ROI reconstruction", rel <= 0.02,
           "rel rmse vs full inside |x1|<=0.4: " + fmt(rel));
}

void criterion_noise() {
    const Phantom p = default_phantom();
    const double mu0 = 1.5;
    const Sinogram g = project(p, mu0, 360, 200, 1.0);
    ReconConfig cfg;
    cfg.mu0 = mu0;
    cfg.grid_n = 128;
    cfg.moment_order = 6;
    const ImageGrid clean = reconstruct(cfg, g).image;

    const NoisySinogram a = add_poisson_noise(g, 1e8, 1234);
    const NoisySinogram b = add_poisson_noise(g, 1e8, 1234);
    const bool deterministic =
        a.sinogram.values == b.sinogram.values && a.sinogram.row_pi == b.sinogram.row_pi;

    const int K = 20;
    ImageGrid mean(128, 128, 1.0);
    double best_single = 1e300;
    for (int k = 0; k < K; ++k) {
        const NoisySinogram n = add_poisson_noise(g, 1e8, 100 + k);
        const ImageGrid img = reconstruct(cfg, n.sinogram).image;
        for (std::size_t i = 0; i < img.values.size(); ++i) mean.values[i] += img.values[i];
        best_single = std::min(best_single, rmse(img, clean, std::nullopt, 0.95));
    }
    for (auto& v : mean.values) v /= K;
    const double mean_err = rmse(mean, clean, std::nullopt, 0.95);
    const bool ok = deterministic && mean_err < best_single;
    report(7, "Poisson noise determinism and averaging", ok,
           std::string(deterministic ? "deterministic" : "NOT deterministic") +
               ", mean rmse " + fmt(mean_err) + " vs best single " + fmt(best_single));
}

void criterion_profile(const ImageGrid& img15) {
    const Phantom p = default_phantom();
    const auto prof = profile(img15, 0.0);
    const double x1 = img15.x1(127);  // nearest column to x1 = 0
    // breakpoints: chord endpoints of each ellipse along the column
    std::vector<double> breaks;
    for (const auto& e : p.ellipses) {
        const double t = e.angle_deg * pi / 180.0;
        const double ca = std::cos(t), sa = std::sin(t);
        const double ox = x1 - e.cx, oy = -e.cy;
        const double w1 = (ca * ox + sa * oy) / e.a;
        const double w2 = (-sa * ox + ca * oy) / e.b;
        const double v1 = sa / e.a, v2 = ca / e.b;
        const double A = v1 * v1 + v2 * v2;
        const double B = 2.0 * (w1 * v1 + w2 * v2);
        const double C = w1 * w1 + w2 * w2 - 1.0;
        const double disc = B * B - 4.0 * A * C;
        if (disc <= 0.0) continue;
        breaks.push_back((-B - std::sqrt(disc)) / (2.0 * A));
        breaks.push_back((-B + std::sqrt(disc)) / (2.0 * A));
    }
    const double guard = 2.0 * img15.pixel_size2();
    double worst = 0.0;
    for (const auto& [x2, v] : prof) {
        if (std::abs(x2) > 1.0 - edge_epsilon) continue;
        double mind = 1e300;
        for (double bk : breaks) mind = std::min(mind, std::abs(x2 - bk));
        if (mind <= guard) continue;
        worst = std::max(worst, std::abs(v - evaluate(p, x1, x2)));
    }
    report(8, "central profile accuracy", worst <= 0.05,
           "max |err| away from jumps: " + fmt(worst));
}

}  // namespace

int main() {
    criterion_tables();
    criterion_tricomi();
    criterion_round_trip();
    criterion_moments();
    const ImageGrid img15 = pipeline_image_256(1.5);
    criterion_pipeline(img15);
    criterion_truncation();
    criterion_noise();
    criterion_profile(img15);
    return failures;
}
