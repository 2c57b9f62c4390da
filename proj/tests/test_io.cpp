#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "chtrecon/dbp.hpp"
#include "chtrecon/io.hpp"
#include "chtrecon/phantom.hpp"
#include "chtrecon/sinogram.hpp"

using namespace chtrecon;

namespace {
struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("sinogram round trip is bit-exact", "[io]") {
    const Phantom p = default_phantom();
    Sinogram g = project(p, 1.3, 12, 24, 1.0);
    const TempFile f("io_sino.chtraw");

    save_sinogram(g, f.path);
    const Sinogram r = load_sinogram(f.path);
    CHECK(r.n_views == g.n_views);
    CHECK(r.n_rays == g.n_rays);
    CHECK(r.s_max == g.s_max);
    CHECK(r.mu0 == g.mu0);
    CHECK(r.values == g.values);
    CHECK(r.row0 == g.row0);
    CHECK(r.row_pi == g.row_pi);
    CHECK(r.mask.empty());

    // with truncation mask and zeroed bins
    const Sinogram t = apply_truncation(g, Box{-0.45, -1.0, 0.45, 1.0});
    save_sinogram(t, f.path);
    const Sinogram rt = load_sinogram(f.path);
    CHECK(rt.values == t.values);
    CHECK(rt.mask == t.mask);
    CHECK(rt.mask0 == t.mask0);
    CHECK(rt.mask_pi == t.mask_pi);
}

TEST_CASE("image and bfield round trips are bit-exact", "[io]") {
    const Phantom p = default_phantom();
    const ImageGrid img = rasterize(p, 32, 1.0);
    const TempFile f("io_img.chtraw");
    save_image(img, f.path);
    const ImageGrid r = load_image(f.path);
    CHECK(r.n1 == img.n1);
    CHECK(r.n2 == img.n2);
    CHECK(r.extent == img.extent);
    CHECK(r.values == img.values);

    const Sinogram g = project(p, 1.3, 24, 32, 1.0);
    const BField b = backproject(differentiate_s(g), 1.3, 16, 1.0);
    const TempFile fb("io_bfield.chtraw");
    save_bfield(b, fb.path);
    const BField rb = load_bfield(fb.path);
    CHECK(rb.mu0 == b.mu0);
    CHECK(rb.grid.values == b.grid.values);
    CHECK(rb.valid == b.valid);
}

TEST_CASE("loaders reject wrong kinds and corrupt files", "[io]") {
    const Phantom p = default_phantom();
    const TempFile f("io_kind.chtraw");
    save_image(rasterize(p, 8, 1.0), f.path);
    CHECK_THROWS_AS(load_sinogram(f.path), std::runtime_error);
    CHECK_THROWS_AS(load_bfield(f.path), std::runtime_error);
    CHECK_THROWS_AS(load_image("no_such.chtraw"), std::runtime_error);

    const TempFile bad("io_bad.chtraw");
    {
        std::ofstream out(bad.path, std::ios::binary);
        out << "NOTMAGIC and some junk";
    }
    CHECK_THROWS_AS(load_image(bad.path), std::runtime_error);

    // truncated payload
    const TempFile cut("io_cut.chtraw");
    {
        std::ifstream in(f.path, std::ios::binary);
        std::vector<char> all((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
        std::ofstream out(cut.path, std::ios::binary);
        out.write(all.data(), std::streamsize(all.size() - 16));
    }
    CHECK_THROWS_AS(load_image(cut.path), std::runtime_error);
}

TEST_CASE("save_pgm16 windowing and layout", "[io]") {
    ImageGrid img(2, 2, 1.0);
    img.at(0, 0) = 0.0;   // bottom-left
    img.at(1, 1) = 4.0;   // top-right
    img.at(0, 1) = 2.0;   // top-left
    img.at(1, 0) = 2.0;
    const TempFile f("io_render.pgm");
    const PgmWindow w = save_pgm16(img, f.path);
    CHECK(w.lo == 0.0);
    CHECK(w.hi == 4.0);

    std::ifstream in(f.path, std::ios::binary);
    std::string magic, dims1, dims2, maxval;
    in >> magic >> dims1 >> dims2 >> maxval;
    CHECK(magic == "P5");
    CHECK(dims1 == "2");
    CHECK(maxval == "65535");
    in.get();  // single whitespace after the header
    unsigned char px[8];
    in.read(reinterpret_cast<char*>(px), 8);
    auto val = [&](int k) { return (unsigned(px[2 * k]) << 8) | px[2 * k + 1]; };
    // first row is the top of the image: (0,1)=2.0 then (1,1)=4.0
    CHECK(val(0) == 32768);
    CHECK(val(1) == 65535);
    CHECK(val(2) == 0);      // bottom-left
    CHECK(val(3) == 32768);

    // explicit window clamps
    const PgmWindow w2 = save_pgm16(img, f.path, 0.0, 2.0);
    CHECK(w2.hi == 2.0);
}
