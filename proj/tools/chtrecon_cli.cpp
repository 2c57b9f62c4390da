// Command-line driver: phantom rasterization, projection, noise, truncation,
// reconstruction, single-line inversion, profiles and metrics.  Every run
// writes a JSON manifest recording the configuration, files and timings.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chtrecon/cht.hpp"
#include "chtrecon/dbp.hpp"
#include "chtrecon/io.hpp"
#include "chtrecon/phantom.hpp"
#include "chtrecon/recon.hpp"
#include "chtrecon/sinogram.hpp"

using namespace chtrecon;
using nlohmann::json;

namespace {

constexpr const char* version = "1.0.0";

struct Manifest {
    json j;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    std::chrono::steady_clock::time_point last = t0;

    explicit Manifest(const std::string& command) {
        j["tool"] = "chtrecon";
        j["version"] = version;
        j["command"] = command;
        j["timings_ms"] = json::object();
    }
    void stage(const std::string& name) {
        const auto now = std::chrono::steady_clock::now();
        j["timings_ms"][name] =
            std::chrono::duration<double, std::milli>(now - last).count();
        last = now;
    }
    void write(const std::string& path) {
        j["timings_ms"]["total"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write manifest: " + path);
        out << j.dump(2) << "\n";
    }
};

Phantom load_phantom_opt(const std::string& path) {
    return path.empty() ? default_phantom() : load_phantom(path);
}

json box_json(const Box& b) { return json{{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}}; }

void maybe_render(Manifest& m, const ImageGrid& img, const std::string& pgm, double lo,
                  double hi) {
    if (pgm.empty()) return;
    const PgmWindow w = save_pgm16(img, pgm, lo, hi);
    m.j["outputs"]["pgm"] = pgm;
    m.j["pgm_window"] = {{"lo", w.lo}, {"hi", w.hi}};
}

std::string default_manifest_path(const std::string& out) { return out + ".manifest.json"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attenuated projection simulation and reconstruction"};
    app.require_subcommand(1);

    // phantom: rasterize the activity distribution
    auto* cmd_phantom = app.add_subcommand("phantom", "rasterize a phantom image");
    std::string ph_ellipses, ph_out, ph_pgm, ph_manifest;
    int ph_n = 256;
    double ph_extent = 1.0;
    cmd_phantom->add_option("--ellipses", ph_ellipses, "phantom description file");
    cmd_phantom->add_option("--out", ph_out, "output image file")->required();
    cmd_phantom->add_option("--n", ph_n, "grid size");
    cmd_phantom->add_option("--extent", ph_extent, "half-width of the grid");
    cmd_phantom->add_option("--pgm", ph_pgm, "also render a 16-bit PGM");
    cmd_phantom->add_option("--manifest", ph_manifest, "manifest path");

    // project: analytic exponential Radon transform
    auto* cmd_project = app.add_subcommand("project", "compute projections");
    std::string pr_ellipses, pr_out, pr_manifest;
    double pr_mu0 = 0.0, pr_smax = 1.0;
    int pr_views = 720, pr_rays = 400, pr_threads = 0;
    cmd_project->add_option("--ellipses", pr_ellipses, "phantom description file");
    cmd_project->add_option("--mu0", pr_mu0, "attenuation coefficient")->required();
    cmd_project->add_option("--views", pr_views, "number of views on [0, pi)");
    cmd_project->add_option("--rays", pr_rays, "rays per view");
    cmd_project->add_option("--smax", pr_smax, "detector half-width");
    cmd_project->add_option("--threads", pr_threads, "worker threads (0 = auto)");
    cmd_project->add_option("--out", pr_out, "output sinogram file")->required();
    cmd_project->add_option("--manifest", pr_manifest, "manifest path");

    // noise: Poisson count noise
    auto* cmd_noise = app.add_subcommand("noise", "apply Poisson noise");
    std::string no_in, no_out, no_manifest;
    double no_counts = 0.0;
    std::uint64_t no_seed = 0;
    cmd_noise->add_option("--in", no_in, "input sinogram")->required();
    cmd_noise->add_option("--counts", no_counts, "total expected counts")->required();
    cmd_noise->add_option("--seed", no_seed, "random seed")->required();
    cmd_noise->add_option("--out", no_out, "output sinogram")->required();
    cmd_noise->add_option("--manifest", no_manifest, "manifest path");

    // truncate: mask rays missing a rectangular ROI
    auto* cmd_trunc = app.add_subcommand("truncate", "truncate projections to an ROI");
    std::string tr_in, tr_out, tr_manifest;
    std::vector<double> tr_box;
    cmd_trunc->add_option("--in", tr_in, "input sinogram")->required();
    cmd_trunc->add_option("--box", tr_box, "ROI as x0 y0 x1 y1")
        ->expected(4)
        ->required();
    cmd_trunc->add_option("--out", tr_out, "output sinogram")->required();
    cmd_trunc->add_option("--manifest", tr_manifest, "manifest path");

    // reconstruct
    auto* cmd_recon = app.add_subcommand("reconstruct", "reconstruct an image");
    std::string rc_in, rc_out, rc_pgm, rc_manifest;
    int rc_n = 256, rc_moments = 6, rc_threads = 0;
    double rc_extent = 1.0, rc_support = 1.0, rc_pgm_lo = 0.0, rc_pgm_hi = 0.0;
    std::vector<double> rc_roi;
    cmd_recon->add_option("--in", rc_in, "input sinogram")->required();
    cmd_recon->add_option("--out", rc_out, "output image")->required();
    cmd_recon->add_option("--n", rc_n, "grid size");
    cmd_recon->add_option("--extent", rc_extent, "half-width of the grid");
    cmd_recon->add_option("--moments", rc_moments, "moment correction order M");
    cmd_recon->add_option("--support-radius", rc_support, "support disc radius");
    cmd_recon->add_option("--roi", rc_roi, "ROI box for truncated data: x0 y0 x1 y1")
        ->expected(4);
    cmd_recon->add_option("--threads", rc_threads, "worker threads (0 = auto)");
    cmd_recon->add_option("--pgm", rc_pgm, "also render a 16-bit PGM");
    cmd_recon->add_option("--pgm-lo", rc_pgm_lo, "PGM window lower bound");
    cmd_recon->add_option("--pgm-hi", rc_pgm_hi, "PGM window upper bound");
    cmd_recon->add_option("--manifest", rc_manifest, "manifest path");

    // invert-line: debug view of one vertical line inversion
    auto* cmd_line = app.add_subcommand("invert-line", "invert a single vertical line");
    std::string il_in, il_out, il_manifest;
    double il_x1 = 0.0, il_extent = 1.0, il_support = 1.0;
    int il_n = 256, il_moments = 6, il_threads = 0;
    cmd_line->add_option("--in", il_in, "input sinogram")->required();
    cmd_line->add_option("--x1", il_x1, "line abscissa")->required();
    cmd_line->add_option("--n", il_n, "grid size / node count");
    cmd_line->add_option("--extent", il_extent, "half-width of the grid");
    cmd_line->add_option("--moments", il_moments, "moment correction order M");
    cmd_line->add_option("--support-radius", il_support, "support disc radius");
    cmd_line->add_option("--threads", il_threads, "worker threads (0 = auto)");
    cmd_line->add_option("--out", il_out, "output CSV")->required();
    cmd_line->add_option("--manifest", il_manifest, "manifest path");

    // profile: one image column as CSV
    auto* cmd_profile = app.add_subcommand("profile", "extract a vertical profile");
    std::string pf_in, pf_out, pf_manifest;
    double pf_x1 = 0.0;
    cmd_profile->add_option("--in", pf_in, "input image")->required();
    cmd_profile->add_option("--x1", pf_x1, "profile abscissa")->required();
    cmd_profile->add_option("--out", pf_out, "output CSV")->required();
    cmd_profile->add_option("--manifest", pf_manifest, "manifest path");

    // metrics: RMSE between two images
    auto* cmd_metrics = app.add_subcommand("metrics", "RMSE between two images");
    std::string mt_a, mt_b, mt_manifest;
    std::vector<double> mt_region;
    double mt_disc = 1.0;
    cmd_metrics->add_option("--a", mt_a, "first image")->required();
    cmd_metrics->add_option("--b", mt_b, "second image")->required();
    cmd_metrics->add_option("--region", mt_region, "rectangular region: x0 y0 x1 y1")
        ->expected(4);
    cmd_metrics->add_option("--disc", mt_disc, "disc radius when no region is given");
    cmd_metrics->add_option("--manifest", mt_manifest, "manifest path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_phantom) {
            Manifest m("phantom");
            const Phantom p = load_phantom_opt(ph_ellipses);
            m.j["config"] = {{"ellipses", ph_ellipses.empty() ? "<built-in>" : ph_ellipses},
                             {"n", ph_n},
                             {"extent", ph_extent}};
            const ImageGrid img = rasterize(p, ph_n, ph_extent);
            m.stage("rasterize");
            save_image(img, ph_out);
            m.j["outputs"]["image"] = ph_out;
            maybe_render(m, img, ph_pgm, 0.0, 0.0);
            m.stage("write");
            m.write(ph_manifest.empty() ? default_manifest_path(ph_out) : ph_manifest);
        } else if (*cmd_project) {
            Manifest m("project");
            const Phantom p = load_phantom_opt(pr_ellipses);
            m.j["config"] = {{"ellipses", pr_ellipses.empty() ? "<built-in>" : pr_ellipses},
                             {"mu0", pr_mu0},
                             {"views", pr_views},
                             {"rays", pr_rays},
                             {"smax", pr_smax},
                             {"threads", pr_threads}};
            const Sinogram g = project(p, pr_mu0, pr_views, pr_rays, pr_smax, pr_threads);
            m.stage("project");
            save_sinogram(g, pr_out);
            m.j["outputs"]["sinogram"] = pr_out;
            m.stage("write");
            m.write(pr_manifest.empty() ? default_manifest_path(pr_out) : pr_manifest);
        } else if (*cmd_noise) {
            Manifest m("noise");
            const Sinogram g = load_sinogram(no_in);
            m.j["config"] = {{"counts", no_counts}, {"seed", no_seed}};
            m.j["inputs"]["sinogram"] = no_in;
            const NoisySinogram n = add_poisson_noise(g, no_counts, no_seed);
            m.stage("noise");
            m.j["clamped_bins"] = n.clamped;
            save_sinogram(n.sinogram, no_out);
            m.j["outputs"]["sinogram"] = no_out;
            m.stage("write");
            m.write(no_manifest.empty() ? default_manifest_path(no_out) : no_manifest);
        } else if (*cmd_trunc) {
            Manifest m("truncate");
            const Sinogram g = load_sinogram(tr_in);
            const Box box{tr_box[0], tr_box[1], tr_box[2], tr_box[3]};
            m.j["config"]["box"] = box_json(box);
            m.j["inputs"]["sinogram"] = tr_in;
            const Sinogram t = apply_truncation(g, box);
            m.stage("truncate");
            save_sinogram(t, tr_out);
            m.j["outputs"]["sinogram"] = tr_out;
            m.stage("write");
            m.write(tr_manifest.empty() ? default_manifest_path(tr_out) : tr_manifest);
        } else if (*cmd_recon) {
            Manifest m("reconstruct");
            const Sinogram g = load_sinogram(rc_in);
            ReconConfig cfg;
            cfg.mu0 = g.mu0;
            cfg.grid_n = rc_n;
            cfg.extent = rc_extent;
            cfg.moment_order = rc_moments;
            cfg.support_radius = rc_support;
            cfg.threads = rc_threads;
            if (!rc_roi.empty()) cfg.roi_box = Box{rc_roi[0], rc_roi[1], rc_roi[2], rc_roi[3]};
            m.j["config"] = {{"mu0", cfg.mu0},
                             {"n", cfg.grid_n},
                             {"extent", cfg.extent},
                             {"moments", cfg.moment_order},
                             {"support_radius", cfg.support_radius},
                             {"threads", cfg.threads}};
            if (cfg.roi_box) m.j["config"]["roi"] = box_json(*cfg.roi_box);
            m.j["inputs"]["sinogram"] = rc_in;
            const ReconResult r = reconstruct(cfg, g);
            m.stage("reconstruct");
            m.j["stats"] = {{"lines_solved", r.lines_solved},
                            {"mu1_max", r.mu1_max},
                            {"cond_max", r.cond_max}};
            save_image(r.image, rc_out);
            m.j["outputs"]["image"] = rc_out;
            maybe_render(m, r.image, rc_pgm, rc_pgm_lo, rc_pgm_hi);
            m.stage("write");
            m.write(rc_manifest.empty() ? default_manifest_path(rc_out) : rc_manifest);
        } else if (*cmd_line) {
            Manifest m("invert-line");
            const Sinogram g = load_sinogram(il_in);
            if (!g.has_endpoint_rows())
                throw std::runtime_error("invert-line: sinogram lacks boundary view rows");
            m.j["config"] = {{"x1", il_x1},
                             {"n", il_n},
                             {"extent", il_extent},
                             {"moments", il_moments},
                             {"support_radius", il_support}};
            m.j["inputs"]["sinogram"] = il_in;
            const BField b =
                backproject(differentiate_s(g), g.mu0, il_n, il_extent, il_threads);
            m.stage("backproject");
            int i1 = 0;
            for (int k = 1; k < il_n; ++k)
                if (std::abs(b.grid.x1(k) - il_x1) < std::abs(b.grid.x1(i1) - il_x1)) i1 = k;
            const double x1 = b.grid.x1(i1);
            if (std::abs(x1) >= il_support)
                throw std::runtime_error("invert-line: line outside the support disc");
            const double U = std::sqrt(il_support * il_support - x1 * x1);
            for (int i2 = 0; i2 < il_n; ++i2) {
                const double x2 = b.grid.x2(i2);
                if (x2 >= -U && x2 <= U && !b.valid_at(i1, i2))
                    throw std::runtime_error("invert-line: backprojection invalid on the line");
            }
            const double g0 = linear_interp_ghost(g.s_origin(), g.ds(), g.row0, x1);
            const double gpi = linear_interp_ghost(g.s_origin(), g.ds(), g.row_pi, -x1);
            std::span<const double> col(b.grid.values.data() + std::size_t(i1) * il_n, il_n);
            const StandardLine line =
                normalize_line(col, b.grid.x2(0), b.grid.pixel_size2(), -U, U, g.mu0, g0,
                               gpi, il_n);
            const CoeffCache cache(4 * il_moments + 2);
            const LineInversion inv = invert_line(line, il_moments, cache);
            m.stage("invert");
            m.j["stats"] = {{"x1_used", x1},
                            {"mu1", line.mu1},
                            {"c_mu1", line.c_mu1},
                            {"cond_even", inv.cond_even},
                            {"cond_odd", inv.cond_odd}};
            std::ofstream out(il_out);
            if (!out) throw std::runtime_error("cannot write: " + il_out);
            out << "# x1_used=" << x1 << " mu1=" << line.mu1 << " c_mu1=" << line.c_mu1
                << "\n";
            out << "t,x2,h_mu1,f_mu1,f\n";
            const ChebGrid grid(il_n);
            const double c_hat = 0.0, d_hat = U;
            for (int i = 0; i < il_n; ++i) {
                const double t = grid.nodes[i];
                out << t << "," << c_hat + d_hat * t << "," << line.h_nodes[i] << ","
                    << inv.f_mu1_nodes[i] << "," << inv.f_nodes[i] << "\n";
            }
            m.j["outputs"]["csv"] = il_out;
            m.stage("write");
            m.write(il_manifest.empty() ? default_manifest_path(il_out) : il_manifest);
        } else if (*cmd_profile) {
            Manifest m("profile");
            const ImageGrid img = load_image(pf_in);
            m.j["config"]["x1"] = pf_x1;
            m.j["inputs"]["image"] = pf_in;
            const auto prof = profile(img, pf_x1);
            std::ofstream out(pf_out);
            if (!out) throw std::runtime_error("cannot write: " + pf_out);
            out << "x2,value\n";
            for (const auto& [x2, v] : prof) out << x2 << "," << v << "\n";
            m.j["outputs"]["csv"] = pf_out;
            m.stage("write");
            m.write(pf_manifest.empty() ? default_manifest_path(pf_out) : pf_manifest);
        } else if (*cmd_metrics) {
            Manifest m("metrics");
            const ImageGrid a = load_image(mt_a);
            const ImageGrid b = load_image(mt_b);
            m.j["inputs"] = {{"a", mt_a}, {"b", mt_b}};
            std::optional<Box> region;
            if (!mt_region.empty())
                region = Box{mt_region[0], mt_region[1], mt_region[2], mt_region[3]};
            m.j["config"]["disc"] = mt_disc;
            if (region) m.j["config"]["region"] = box_json(*region);
            const double err = rmse(a, b, region, mt_disc);
            m.stage("rmse");
            m.j["stats"]["rmse"] = err;
            std::printf("rmse %.12g\n", err);
            if (!mt_manifest.empty()) m.write(mt_manifest);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
