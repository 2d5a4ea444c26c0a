#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>

#include "difftomo/field.hpp"
#include "difftomo/io.hpp"

using namespace dt;
namespace fs = std::filesystem;

namespace
{
    fs::path temp_dir()
    {
        const fs::path p = fs::temp_directory_path() / "difftomo-test-fieldcore";
        fs::create_directories(p);
        return p;
    }
}

TEST_SUITE("field-core")
{
    TEST_CASE("make_grid node coordinates")
    {
        const Grid g = make_grid(10.0, 4);
        CHECK(g.spacing() == doctest::Approx(5.0));
        CHECK(g.coord(0) == doctest::Approx(-10.0));
        CHECK(g.coord(1) == doctest::Approx(-5.0));
        CHECK(g.coord(2) == doctest::Approx(0.0));
        CHECK(g.coord(3) == doctest::Approx(5.0));
    }

    TEST_CASE("make_grid production-scale spacing")
    {
        const Grid g = make_grid(240.0 / (8.0 * std::sqrt(2.0)), 240);
        CHECK(g.spacing() == doctest::Approx(1.0 / (4.0 * std::sqrt(2.0)))
                                 .epsilon(1e-12));
    }

    TEST_CASE("make_grid rejects bad arguments")
    {
        CHECK_THROWS_AS(make_grid(10.0, 3), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(10.0, 0), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(-1.0, 4), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(0.0, 4), std::invalid_argument);
    }

    TEST_CASE("origin is a node")
    {
        const Grid g = make_grid(3.0, 8);
        CHECK(g.coord(g.n / 2) == doctest::Approx(0.0));
    }

    TEST_CASE("uniform_receivers")
    {
        const auto rx = uniform_receivers(2.0, 4);
        REQUIRE(rx.size() == 4);
        CHECK(rx[0] == doctest::Approx(-2.0));
        CHECK(rx[1] == doctest::Approx(-1.0));
        CHECK(rx[2] == doctest::Approx(0.0));
        CHECK(rx[3] == doctest::Approx(1.0));
    }

    TEST_CASE("psnr closed form")
    {
        const Grid g = make_grid(1.0, 8);
        RealField ref(g), cand(g);
        ref.at(3, 3) = 2.0;  // peak 2
        for (std::size_t p = 0; p < cand.values.size(); ++p)
            cand.values[p] = ref.values[p] + 0.1;
        // 10 log10(4 / 0.01)
        CHECK(psnr(ref, cand) == doctest::Approx(26.0206).epsilon(1e-4));
    }

    TEST_CASE("psnr errors")
    {
        const Grid g = make_grid(1.0, 8);
        RealField ref(g, 1.0);
        CHECK_THROWS_AS(psnr(ref, ref), std::invalid_argument);  // zero MSE
        RealField other(make_grid(1.0, 10), 1.0);
        CHECK_THROWS_AS(psnr(ref, other), std::invalid_argument);
    }

    TEST_CASE("psnr window restricts the evaluation")
    {
        const Grid g = make_grid(4.0, 32);
        RealField ref(g), cand(g);
        ref.at(16, 16) = 1.0;
        cand = ref;
        cand.at(0, 0) = 5.0;  // corruption outside the central window
        CHECK_THROWS_AS(psnr(ref, cand, 2.0), std::invalid_argument); // zero MSE inside
        cand.at(16, 17) = 0.5;
        const double inner = psnr(ref, cand, 2.0);
        const double full = psnr(ref, cand);
        CHECK(inner > full);  // window excludes the big corner error
    }

    TEST_CASE("add_noise power and determinism")
    {
        Trace tr;
        tr.receiver_x = uniform_receivers(5.0, 1000);
        tr.height = 1.0;
        tr.values.assign(1000, cplx{1.0, 0.0});  // unit power
        const Trace noisy = add_noise(tr, 50.0, 1);
        double p = 0.0;
        for (std::size_t j = 0; j < tr.values.size(); ++j)
            p += std::norm(noisy.values[j] - tr.values[j]);
        p /= double(tr.values.size());
        CHECK(p > 0.5e-5);
        CHECK(p < 2.0e-5);

        const Trace again = add_noise(tr, 50.0, 1);
        CHECK(again.values == noisy.values);
        const Trace other = add_noise(tr, 50.0, 2);
        CHECK(other.values != noisy.values);
    }

    TEST_CASE("field file round trip")
    {
        const fs::path dir = temp_dir();
        const Grid g = make_grid(2.5, 6);
        RealField f(g);
        for (std::size_t p = 0; p < f.values.size(); ++p)
            f.values[p] = std::sin(double(p));
        write_field(dir / "r.fld", f);
        const RealField f2 = read_real_field(dir / "r.fld");
        CHECK(f2.grid == g);
        CHECK(f2.values == f.values);

        ComplexField c(g);
        for (std::size_t p = 0; p < c.values.size(); ++p)
            c.values[p] = cplx{std::cos(double(p)), std::sin(double(p))};
        write_field(dir / "c.fld", c);
        const ComplexField c2 = read_complex_field(dir / "c.fld");
        CHECK(c2.values == c.values);
    }

    TEST_CASE("field file corruption")
    {
        const fs::path dir = temp_dir();
        const Grid g = make_grid(1.0, 4);
        write_field(dir / "x.fld", RealField(g, 1.0));
        {
            std::fstream s(dir / "x.fld",
                           std::ios::in | std::ios::out | std::ios::binary);
            s.put('X');  // clobber the magic
        }
        CHECK_THROWS(read_real_field(dir / "x.fld"));

        write_field(dir / "y.fld", RealField(g, 1.0));
        fs::resize_file(dir / "y.fld", 40);
        CHECK_THROWS(read_real_field(dir / "y.fld"));

        CHECK_THROWS(read_real_field(dir / "missing.fld"));
    }

    TEST_CASE("pgm rendering")
    {
        const fs::path dir = temp_dir();
        const Grid g = make_grid(1.0, 4);

        write_pgm(dir / "const.pgm", RealField(g, 0.25), -1.0, 1.0);
        std::ifstream is(dir / "const.pgm", std::ios::binary);
        std::string magic, w, h, maxv;
        is >> magic >> w >> h >> maxv;
        CHECK(magic == "P5");
        CHECK(w == "4");
        CHECK(h == "4");
        is.get();
        std::vector<unsigned char> pix(16);
        is.read(reinterpret_cast<char*>(pix.data()), 16);
        // 0.25 in [-1,1] -> 0.625 * 255 = 159.375 -> 159; constant image
        for (unsigned char v : pix) CHECK(int(v) == 159);

        RealField ramp(g);
        ramp.at(0, 0) = -1.0;
        ramp.at(1, 0) = 0.0;
        ramp.at(2, 0) = 1.0;
        write_pgm(dir / "ramp.pgm", ramp, -1.0, 1.0);
        std::ifstream is2(dir / "ramp.pgm", std::ios::binary);
        is2 >> magic >> w >> h >> maxv;
        is2.get();
        std::vector<unsigned char> pix2(16);
        is2.read(reinterpret_cast<char*>(pix2.data()), 16);
        // row j=0 is the bottom of the grid; it is written last (top-down)
        CHECK(int(pix2[12]) == 0);
        CHECK(int(pix2[13]) == 128);
        CHECK(int(pix2[14]) == 255);

        CHECK_THROWS_AS(write_pgm(dir / "w.pgm", ramp, -1.0, 1.0, 10.0),
                        std::invalid_argument);
    }

    TEST_CASE("dataset directory round trip")
    {
        const fs::path dir = temp_dir() / "ds";
        Dataset ds;
        ds.kind = DatasetKind::scattered;
        ds.acquisition.n_angles = 2;
        ds.acquisition.wavenumbers = {1.5, 3.0};
        ds.acquisition.r_M = 2.0;
        ds.acquisition.l_M = 2.0;
        ds.acquisition.n_receivers = 8;
        ds.acquisition.snr_db = 30.0;
        ds.acquisition.seed = 17;
        for (int a = 0; a < 2; ++a)
            for (int k = 0; k < 2; ++k)
            {
                Trace tr;
                tr.receiver_x = uniform_receivers(2.0, 8);
                tr.height = 2.0;
                for (int j = 0; j < 8; ++j)
                    tr.values.push_back(cplx{double(a + j), double(k - j)});
                ds.traces.emplace(std::pair{a, k}, std::move(tr));
            }
        write_dataset(dir, ds);
        const Dataset ds2 = read_dataset(dir);
        CHECK(ds2.kind == ds.kind);
        CHECK(ds2.acquisition.n_angles == 2);
        CHECK(ds2.acquisition.seed == 17);
        REQUIRE(ds2.traces.size() == 4);
        CHECK(ds2.trace(1, 0).values == ds.trace(1, 0).values);
        CHECK(ds2.trace(0, 1).receiver_x == ds.trace(0, 1).receiver_x);
    }
}
