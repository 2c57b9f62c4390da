// File formats: a shared container (magic, JSON header, little-endian f64
// payload, optional mask bytes) for sinograms, images and backprojection
// fields, plus a 16-bit PGM renderer.  Round trips are bit-exact.
#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chtrecon/dbp.hpp"
#include "chtrecon/phantom.hpp"
#include "chtrecon/sinogram.hpp"

namespace chtrecon {

inline constexpr char file_magic[8] = {'C', 'H', 'T', 'R', 'A', 'W', '1', '\n'};

namespace detail {

inline void write_container(const std::string& path, const nlohmann::json& header,
                            const std::vector<double>& payload,
                            const std::vector<uint8_t>& mask_bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(file_magic, 8);
    const std::string h = header.dump();
    const uint64_t len = h.size();
    out.write(reinterpret_cast<const char*>(&len), 8);
    out.write(h.data(), std::streamsize(h.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              std::streamsize(payload.size() * sizeof(double)));
    if (!mask_bytes.empty())
        out.write(reinterpret_cast<const char*>(mask_bytes.data()),
                  std::streamsize(mask_bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct Container {
    nlohmann::json header;
    std::vector<double> payload;
    std::vector<uint8_t> mask_bytes;
};

inline Container read_container(const std::string& path, std::size_t payload_hint = 0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, file_magic, 8) != 0)
        throw std::runtime_error("not a chtrecon raw file: " + path);
    uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 8);
    if (!in || len > (1u << 20)) throw std::runtime_error("corrupt header: " + path);
    std::string h(len, '\0');
    in.read(h.data(), std::streamsize(len));
    Container c;
    c.header = nlohmann::json::parse(h);

    std::vector<char> rest((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    (void)payload_hint;
    const std::size_t n_doubles = c.header.value("payload_doubles", std::size_t(0));
    const std::size_t n_mask = c.header.value("mask_bytes", std::size_t(0));
    if (rest.size() != n_doubles * sizeof(double) + n_mask)
        throw std::runtime_error("payload size mismatch: " + path);
    c.payload.resize(n_doubles);
    std::memcpy(c.payload.data(), rest.data(), n_doubles * sizeof(double));
    c.mask_bytes.assign(rest.begin() + std::ptrdiff_t(n_doubles * sizeof(double)), rest.end());
    return c;
}

}  // namespace detail

// Payload layout: values (view-major), then the phi=0 and phi=pi rows when
// present.  Mask bytes (one per bin) follow the same order.
inline void save_sinogram(const Sinogram& g, const std::string& path) {
    nlohmann::json h;
    h["kind"] = "sinogram";
    h["n_views"] = g.n_views;
    h["n_rays"] = g.n_rays;
    h["s_max"] = g.s_max;
    h["mu0"] = g.mu0;
    h["has_mask"] = !g.mask.empty();
    h["has_endpoint_rows"] = g.has_endpoint_rows();

    std::vector<double> payload = g.values;
    if (g.has_endpoint_rows()) {
        payload.insert(payload.end(), g.row0.begin(), g.row0.end());
        payload.insert(payload.end(), g.row_pi.begin(), g.row_pi.end());
    }
    std::vector<uint8_t> mask_bytes;
    if (!g.mask.empty()) {
        mask_bytes = g.mask;
        if (g.has_endpoint_rows()) {
            const std::vector<uint8_t> ones(g.n_rays, 1);
            const auto& m0 = g.mask0.empty() ? ones : g.mask0;
            const auto& mp = g.mask_pi.empty() ? ones : g.mask_pi;
            mask_bytes.insert(mask_bytes.end(), m0.begin(), m0.end());
            mask_bytes.insert(mask_bytes.end(), mp.begin(), mp.end());
        }
    }
    h["payload_doubles"] = payload.size();
    h["mask_bytes"] = mask_bytes.size();
    detail::write_container(path, h, payload, mask_bytes);
}

inline Sinogram load_sinogram(const std::string& path) {
    auto c = detail::read_container(path);
    if (c.header.value("kind", "") != "sinogram")
        throw std::runtime_error("not a sinogram file: " + path);
    Sinogram g = Sinogram::make(c.header.at("n_views"), c.header.at("n_rays"),
                                c.header.at("s_max"), c.header.at("mu0"));
    const std::size_t nv = std::size_t(g.n_views) * g.n_rays;
    const bool endpoints = c.header.value("has_endpoint_rows", false);
    const std::size_t expected = nv + (endpoints ? 2 * std::size_t(g.n_rays) : 0);
    if (c.payload.size() != expected) throw std::runtime_error("bad payload: " + path);
    g.values.assign(c.payload.begin(), c.payload.begin() + std::ptrdiff_t(nv));
    if (endpoints) {
        auto it = c.payload.begin() + std::ptrdiff_t(nv);
        g.row0.assign(it, it + g.n_rays);
        g.row_pi.assign(it + g.n_rays, it + 2 * g.n_rays);
    }
    if (c.header.value("has_mask", false)) {
        if (c.mask_bytes.size() != expected) throw std::runtime_error("bad mask: " + path);
        g.mask.assign(c.mask_bytes.begin(), c.mask_bytes.begin() + std::ptrdiff_t(nv));
        if (endpoints) {
            auto it = c.mask_bytes.begin() + std::ptrdiff_t(nv);
            g.mask0.assign(it, it + g.n_rays);
            g.mask_pi.assign(it + g.n_rays, it + 2 * g.n_rays);
        }
    }
    return g;
}

inline void save_image(const ImageGrid& img, const std::string& path) {
    nlohmann::json h;
    h["kind"] = "image";
    h["n1"] = img.n1;
    h["n2"] = img.n2;
    h["extent"] = img.extent;
    h["payload_doubles"] = img.values.size();
    h["mask_bytes"] = 0;
    detail::write_container(path, h, img.values, {});
}

inline ImageGrid load_image(const std::string& path) {
    auto c = detail::read_container(path);
    if (c.header.value("kind", "") != "image")
        throw std::runtime_error("not an image file: " + path);
    ImageGrid img(c.header.at("n1"), c.header.at("n2"), c.header.at("extent"));
    if (c.payload.size() != img.values.size())
        throw std::runtime_error("bad payload: " + path);
    img.values = std::move(c.payload);
    return img;
}

inline void save_bfield(const BField& b, const std::string& path) {
    nlohmann::json h;
    h["kind"] = "bfield";
    h["n1"] = b.grid.n1;
    h["n2"] = b.grid.n2;
    h["extent"] = b.grid.extent;
    h["mu0"] = b.mu0;
    h["payload_doubles"] = b.grid.values.size();
    h["mask_bytes"] = b.valid.size();
    detail::write_container(path, h, b.grid.values, b.valid);
}

inline BField load_bfield(const std::string& path) {
    auto c = detail::read_container(path);
    if (c.header.value("kind", "") != "bfield")
        throw std::runtime_error("not a bfield file: " + path);
    BField b;
    b.grid = ImageGrid(c.header.at("n1"), c.header.at("n2"), c.header.at("extent"));
    b.mu0 = c.header.at("mu0");
    if (c.payload.size() != b.grid.values.size() || c.mask_bytes.size() != c.payload.size())
        throw std::runtime_error("bad payload: " + path);
    b.grid.values = std::move(c.payload);
    b.valid = std::move(c.mask_bytes);
    return b;
}

struct PgmWindow {
    double lo = 0.0;
    double hi = 1.0;
};

// 16-bit binary PGM with min/max windowing; returns the window actually used
// so it can be recorded alongside the render.  Image rows run top to bottom
// in decreasing x2.
inline PgmWindow save_pgm16(const ImageGrid& img, const std::string& path,
                            double lo = 0.0, double hi = 0.0) {
    PgmWindow w{lo, hi};
    if (!(w.hi > w.lo)) {
        w.lo = img.values.empty() ? 0.0 : img.values[0];
        w.hi = w.lo;
        for (double v : img.values) {
            w.lo = std::min(w.lo, v);
            w.hi = std::max(w.hi, v);
        }
        if (!(w.hi > w.lo)) w.hi = w.lo + 1.0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "P5\n" << img.n1 << " " << img.n2 << "\n65535\n";
    for (int row = 0; row < img.n2; ++row) {
        const int i2 = img.n2 - 1 - row;
        for (int i1 = 0; i1 < img.n1; ++i1) {
            double v = (img.at(i1, i2) - w.lo) / (w.hi - w.lo);
            v = std::min(1.0, std::max(0.0, v));
            const uint16_t q = uint16_t(v * 65535.0 + 0.5);
            const uint8_t bytes[2] = {uint8_t(q >> 8), uint8_t(q & 0xff)};
            out.write(reinterpret_cast<const char*>(bytes), 2);
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
    return w;
}

}  // namespace chtrecon
