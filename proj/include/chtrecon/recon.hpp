// Orchestrates the full reconstruction: derivative + weighted backprojection,
// then one cosh-Hilbert inversion per vertical grid line, mapped back to
// pixels.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "chtrecon/cht.hpp"
#include "chtrecon/dbp.hpp"
#include "chtrecon/interp.hpp"
#include "chtrecon/parallel.hpp"
#include "chtrecon/phantom.hpp"
#include "chtrecon/sinogram.hpp"

namespace chtrecon {

struct ReconConfig {
    double mu0 = 0.0;
    int grid_n = 256;
    double extent = 1.0;
    int moment_order = 6;           // M
    double support_radius = 1.0;    // chord endpoints U(x1) = -L(x1) = sqrt(R^2 - x1^2)
    std::optional<Box> roi_box;     // present for truncated data
    int threads = 0;
};

struct ReconResult {
    ImageGrid image;
    double mu1_max = 0.0;
    double cond_max = 0.0;
    int lines_solved = 0;
};

namespace detail {
// Columns the solver is required to handle: inside the support, and for
// truncated data inside the ROI box shrunk by interpolation margins.
inline bool column_required(double x1, double R, const std::optional<Box>& box,
                            double margin) {
    if (std::abs(x1) >= R) return false;
    if (!box) return true;
    return x1 >= box->x0 + margin && x1 <= box->x1 - margin;
}
}  // namespace detail

inline ReconResult reconstruct(const ReconConfig& cfg, const Sinogram& g) {
    if (!g.has_endpoint_rows())
        throw std::invalid_argument("reconstruct: sinogram lacks the phi=0 / phi=pi rows");
    if (cfg.grid_n < 2 * cfg.moment_order + 2)
        throw std::invalid_argument("reconstruct: grid too small for the moment order");
    const double R = cfg.support_radius;
    if (cfg.roi_box) {
        const Box& box = *cfg.roi_box;
        if (box.degenerate()) throw std::invalid_argument("reconstruct: degenerate ROI box");
        // the box must span the full vertical extent of the support over its
        // x1 range, otherwise chords are cut (interior problem)
        double xa = std::max(box.x0, -R), xb = std::min(box.x1, R);
        const double closest = (xa <= 0.0 && 0.0 <= xb) ? 0.0
                               : std::min(std::abs(xa), std::abs(xb));
        const double u_max = std::sqrt(std::max(0.0, R * R - closest * closest));
        if (box.y0 > -u_max || box.y1 < u_max)
            throw std::invalid_argument(
                "reconstruct: ROI box cuts vertical chords (interior problem)");
    }

    const DerivativeSinogram dg = differentiate_s(g);
    const BField b = backproject(dg, cfg.mu0, cfg.grid_n, cfg.extent, cfg.threads);

    const int n = cfg.grid_n;
    const double px = b.grid.pixel_size2();
    const double margin = 2.0 * px + 2.0 * g.ds();
    const CoeffCache cache(4 * cfg.moment_order + 2);

    ReconResult out;
    out.image = ImageGrid(n, n, cfg.extent);
    std::vector<double> col_mu1(n, 0.0), col_cond(n, 0.0);
    std::vector<uint8_t> col_solved(n, 0);

    parallel_for(0, n, cfg.threads, [&](int i1) {
        const double x1 = out.image.x1(i1);
        if (!detail::column_required(x1, R, cfg.roi_box, margin)) return;
        const double U = std::sqrt(R * R - x1 * x1);
        const double L = -U;

        // every pixel of the chord must carry a valid backprojection value
        for (int i2 = 0; i2 < n; ++i2) {
            const double x2 = out.image.x2(i2);
            if (x2 < L || x2 > U) continue;
            if (!b.valid_at(i1, i2))
                throw std::runtime_error(
                    "reconstruct: backprojection invalid on a required line "
                    "(truncated data do not cover the ROI)");
        }

        const double g0 = linear_interp_ghost(g.s_origin(), g.ds(), g.row0, x1);
        const double gpi = linear_interp_ghost(g.s_origin(), g.ds(), g.row_pi, -x1);
        std::span<const double> b_col(b.grid.values.data() + std::size_t(i1) * n, n);
        const StandardLine line =
            normalize_line(b_col, b.grid.x2(0), px, L, U, cfg.mu0, g0, gpi, n);
        const LineInversion inv = invert_line(line, cfg.moment_order, cache);

        const double c_hat = 0.5 * (U + L);
        const double d_hat = 0.5 * (U - L);
        const ChebGrid grid(n);
        for (int i2 = 0; i2 < n; ++i2) {
            const double t = (out.image.x2(i2) - c_hat) / d_hat;
            if (std::abs(t) <= 1.0 - edge_epsilon)
                out.image.at(i1, i2) = bary_eval(grid, inv.f_nodes, t);
        }
        col_mu1[i1] = line.mu1;
        col_cond[i1] = std::max(inv.cond_even, inv.cond_odd);
        col_solved[i1] = 1;
    });

    for (int i1 = 0; i1 < n; ++i1) {
        if (!col_solved[i1]) continue;
        ++out.lines_solved;
        out.mu1_max = std::max(out.mu1_max, col_mu1[i1]);
        out.cond_max = std::max(out.cond_max, col_cond[i1]);
    }
    return out;
}

// The image column nearest x1, with physical x2 coordinates.
inline std::vector<std::pair<double, double>> profile(const ImageGrid& img, double x1) {
    if (std::abs(x1) > img.extent) throw std::invalid_argument("profile: x1 outside grid");
    int best = 0;
    for (int k = 1; k < img.n1; ++k)
        if (std::abs(img.x1(k) - x1) < std::abs(img.x1(best) - x1)) best = k;
    std::vector<std::pair<double, double>> out(img.n2);
    for (int i2 = 0; i2 < img.n2; ++i2) out[i2] = {img.x2(i2), img.at(best, i2)};
    return out;
}

// Root-mean-square difference over a rectangular region, or over the
// centered disc of radius `disc_radius` when no region is given.
inline double rmse(const ImageGrid& img, const ImageGrid& ref,
                   const std::optional<Box>& region = std::nullopt,
                   double disc_radius = 1.0) {
    if (img.n1 != ref.n1 || img.n2 != ref.n2 || img.extent != ref.extent)
        throw std::invalid_argument("rmse: grid mismatch");
    double acc = 0.0;
    long long count = 0;
    for (int i1 = 0; i1 < img.n1; ++i1)
        for (int i2 = 0; i2 < img.n2; ++i2) {
            const double x = img.x1(i1), y = img.x2(i2);
            const bool in = region ? region->contains(x, y)
                                   : (x * x + y * y <= disc_radius * disc_radius);
            if (!in) continue;
            const double d = img.at(i1, i2) - ref.at(i1, i2);
            acc += d * d;
            ++count;
        }
    if (count == 0) throw std::invalid_argument("rmse: empty region");
    return std::sqrt(acc / count);
}

}  // namespace chtrecon
