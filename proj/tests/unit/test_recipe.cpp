#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "difftomo/io.hpp"
#include "difftomo/recipe.hpp"

using namespace dt;
namespace fs = std::filesystem;

namespace
{
    fs::path temp_dir(const std::string& leaf)
    {
        const fs::path p = fs::temp_directory_path() / "difftomo-test-recipe" / leaf;
        fs::create_directories(p);
        return p;
    }

    ExperimentRecipe tiny_recipe()
    {
        ExperimentRecipe r;
        r.name = "tiny-disk";
        r.phantom.primitives.push_back({DiskShape{{0.0, 0.0}, 1.0}, 1.0});
        r.acquisition.n_angles = 8;
        r.acquisition.wavenumbers = {2.0 * M_PI};
        r.acquisition.c0 = 1.0;
        r.acquisition.source = SourceSpec::plane();
        r.acquisition.r_M = 2.5;
        r.acquisition.l_M = 3.0;
        r.acquisition.n_receivers = 64;
        r.acquisition.snr_db = 40.0;
        r.acquisition.seed = 99;
        r.solver_grid = make_grid(3.5, 128);
        r.method = ReconMethod::born;
        r.recon_grid = make_grid(3.0, 48);
        r.cg_iterations = 15;
        r.psnr_window = 3.0;
        return r;
    }
}

TEST_SUITE("recipe")
{
    TEST_CASE("JSON round trip")
    {
        const ExperimentRecipe r = tiny_recipe();
        const ExperimentRecipe back = ExperimentRecipe::from_json(r.to_json());
        CHECK(back.name == r.name);
        CHECK(back.acquisition.n_angles == 8);
        CHECK(back.acquisition.wavenumbers == r.acquisition.wavenumbers);
        CHECK(back.acquisition.snr_db == r.acquisition.snr_db);
        CHECK(back.acquisition.seed == 99);
        CHECK(back.solver_grid == r.solver_grid);
        CHECK(back.recon_grid == r.recon_grid);
        CHECK(back.method == ReconMethod::born);
        CHECK(back.cg_iterations == 15);
        REQUIRE(back.psnr_window);
        CHECK(*back.psnr_window == doctest::Approx(3.0));
    }

    TEST_CASE("default reconstruction grid follows the receiver aperture")
    {
        ExperimentRecipe r = tiny_recipe();
        std::string text = r.to_json();
        // drop the recon_grid field
        auto pos = text.find("\"recon_grid\"");
        REQUIRE(pos != std::string::npos);
        auto end = text.find('}', pos);
        end = text.find(',', end);
        text.erase(pos, end - pos + 1);
        const ExperimentRecipe back = ExperimentRecipe::from_json(text);
        CHECK(back.recon_grid.half_width == doctest::Approx(3.0));  // l_M
        CHECK(back.recon_grid.n % 2 == 0);
        // gridding range: sqrt(2) kmax h < pi
        CHECK(std::sqrt(2.0) * 2.0 * M_PI * back.recon_grid.spacing() <
              M_PI);
    }

    TEST_CASE("unknown method rejected")
    {
        std::string text = tiny_recipe().to_json();
        auto pos = text.find("\"born\"");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 6, "\"nope\"");
        CHECK_THROWS_AS(ExperimentRecipe::from_json(text),
                        std::invalid_argument);
    }

    TEST_CASE("forward then reconstruct produces a report")
    {
        const ExperimentRecipe r = tiny_recipe();
        const fs::path data = temp_dir("data");
        const fs::path out = temp_dir("out");
        run_forward(r, data);
        CHECK(fs::exists(data / "scattered" / "manifest.json"));
        CHECK(fs::exists(data / "total" / "manifest.json"));
        CHECK(fs::exists(data / "incident" / "manifest.json"));
        CHECK(fs::exists(data / "ground_truth.fld"));
        CHECK(fs::exists(data / "forward_manifest.json"));

        const ReconReport rep = run_reconstruct(r, data, out);
        CHECK(rep.method == "born");
        CHECK(rep.iterations == 15);
        REQUIRE(rep.psnr_db);
        CHECK(*rep.psnr_db > 5.0);  // smoke threshold; trends are acceptance
        CHECK(fs::exists(out / "recon.fld"));
        CHECK(fs::exists(out / "report.json"));
        const RealField recon = read_real_field(out / "recon.fld");
        CHECK(recon.grid == r.recon_grid);

        // rytov on the same data also runs
        ExperimentRecipe ry = r;
        ry.method = ReconMethod::rytov;
        const ReconReport rep2 = run_reconstruct(ry, data, temp_dir("out2"));
        CHECK(rep2.method == "rytov");
        REQUIRE(rep2.psnr_db);
    }

    TEST_CASE("all shipped recipes parse and validate")
    {
        int seen = 0;
        for (const auto& entry :
             fs::recursive_directory_iterator(DIFFTOMO_RECIPE_DIR))
        {
            if (entry.path().extension() != ".json") continue;
            ++seen;
            INFO(entry.path().string());
            const ExperimentRecipe r = ExperimentRecipe::load(entry.path());
            CHECK(!r.name.empty());
            CHECK(r.acquisition.n_angles >= 1);
            CHECK(!r.phantom.primitives.empty());
            if (r.method == ReconMethod::fwi)
            {
                CHECK(!r.fwi_frequencies.empty());
                // every FWI frequency must exist in the dataset
                for (double w : r.fwi_frequencies)
                {
                    bool found = false;
                    for (double k : r.acquisition.wavenumbers)
                        found = found ||
                                std::abs(k * r.acquisition.c0 - w) < 1e-9 * w;
                    CHECK(found);
                }
            }
        }
        CHECK(seen >= 15);
    }

    TEST_CASE("compare-forward with a duplicated model gives equal columns")
    {
        ExperimentRecipe r = tiny_recipe();
        r.acquisition.snr_db.reset();
        r.acquisition.n_receivers = 50;
        r.compare_models = {"born-convolution", "born-convolution"};
        const fs::path csv = temp_dir("csv") / "cmp.csv";
        run_compare_forward(r, csv);

        std::ifstream is(csv);
        REQUIRE(is.good());
        std::string line;
        std::getline(is, line);  // header
        CHECK(line.find("born-convolution_re") != std::string::npos);
        int rows = 0;
        while (std::getline(is, line))
        {
            ++rows;
            double x1, a_re, a_im, b_re, b_im;
            char c;
            std::istringstream ss(line);
            ss >> x1 >> c >> a_re >> c >> a_im >> c >> b_re >> c >> b_im;
            CHECK(a_re == b_re);
            CHECK(a_im == b_im);
        }
        CHECK(rows == 50);

        r.compare_models = {"no-such-model"};
        CHECK_THROWS_AS(run_compare_forward(r, temp_dir("csv") / "x.csv"),
                        std::invalid_argument);
    }
}
