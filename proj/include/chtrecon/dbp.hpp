// Weighted differential backprojection:
//   b(x) = int_0^pi exp(-mu0 x.theta_perp) dg(x.theta, phi) dphi
// discretized as a Riemann sum over the sinogram's own view grid with
// linear interpolation in s.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "chtrecon/parallel.hpp"
#include "chtrecon/phantom.hpp"
#include "chtrecon/sinogram.hpp"

namespace chtrecon {

struct BField {
    ImageGrid grid;
    double mu0 = 0.0;
    std::vector<uint8_t> valid;  // per pixel, same layout as grid.values

    bool valid_at(int i1, int i2) const { return valid[std::size_t(i1) * grid.n2 + i2] != 0; }
};

// A pixel is valid when every view's interpolation stencil stays inside the
// covered detector interval [-s_max, s_max] and touches only measured bins.
// Between the outermost bin center and s_max the data are extended toward a
// ghost zero bin, consistent with projections that vanish at the detector
// edge.
inline BField backproject(const DerivativeSinogram& dg, double mu0, int n, double extent,
                          int threads = 0) {
    if (dg.n_views < 2) throw std::invalid_argument("backproject: need >= 2 views");
    BField b;
    b.grid = ImageGrid(n, n, extent);
    b.mu0 = mu0;
    b.valid.assign(b.grid.values.size(), 1);

    const int n_views = dg.n_views;
    const int n_rays = dg.n_rays;
    const double dphi = std::numbers::pi / n_views;
    const double ds = dg.ds();
    const double s0 = dg.s.front();
    std::vector<double> cphi(n_views), sphi(n_views);
    for (int v = 0; v < n_views; ++v) {
        cphi[v] = std::cos(dg.phi[v]);
        sphi[v] = std::sin(dg.phi[v]);
    }
    const bool masked = !dg.mask.empty();

    parallel_for(0, n, threads, [&](int i1) {
        const double x1 = b.grid.x1(i1);
        for (int i2 = 0; i2 < n; ++i2) {
            const double x2 = b.grid.x2(i2);
            double acc = 0.0;
            bool ok = true;
            for (int v = 0; v < n_views; ++v) {
                const double sproj = x1 * cphi[v] + x2 * sphi[v];
                if (std::abs(sproj) > dg.s_max) {
                    ok = false;
                    break;
                }
                const double u = (sproj - s0) / ds;
                const int j = int(std::floor(u));
                const double w = u - j;
                double lo = 0.0, hi = 0.0;
                if (j >= 0 && j < n_rays) {
                    if (masked && !dg.measured(v, j)) {
                        ok = false;
                        break;
                    }
                    lo = dg.value(v, j);
                }
                if (j + 1 >= 0 && j + 1 < n_rays) {
                    if (masked && !dg.measured(v, j + 1)) {
                        ok = false;
                        break;
                    }
                    hi = dg.value(v, j + 1);
                }
                const double xtp = -x1 * sphi[v] + x2 * cphi[v];
                acc += std::exp(-mu0 * xtp) * ((1.0 - w) * lo + w * hi);
            }
            b.grid.at(i1, i2) = ok ? acc * dphi : 0.0;
            b.valid[std::size_t(i1) * n + i2] = ok ? 1 : 0;
        }
    });
    return b;
}

}  // namespace chtrecon
