// difftomo: forward simulation, reconstruction, and verification driver.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "difftomo/io.hpp"
#include "difftomo/recipe.hpp"

#include "acceptance.hpp"

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_validation = 2;
    constexpr int exit_numerical = 3;
    constexpr int exit_io = 4;

    int classify(const std::exception& e)
    {
        if (dynamic_cast<const std::invalid_argument*>(&e) ||
            dynamic_cast<const std::domain_error*>(&e))
            return exit_validation;
        // file-system and stream failures surface as runtime_error from the
        // I/O layer with a path in the message
        const std::string what = e.what();
        if (what.find("cannot open") != std::string::npos ||
            what.find("write failed") != std::string::npos ||
            what.find("truncated") != std::string::npos ||
            what.find("bad magic") != std::string::npos)
            return exit_io;
        return exit_numerical;
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"2D diffraction tomography toolkit"};
    app.require_subcommand(1);

    int threads = 1;
    app.add_option("--threads", threads,
                   "worker cap (the pipeline is sequential; accepted for "
                   "script compatibility)");

    std::string recipe_path, out_dir = "out", data_dir, out_csv;

    auto* cmd_forward =
        app.add_subcommand("forward", "simulate datasets for a recipe");
    cmd_forward->add_option("recipe", recipe_path, "recipe JSON file")
        ->required();
    cmd_forward->add_option("-o,--out", out_dir, "output directory");

    auto* cmd_reconstruct =
        app.add_subcommand("reconstruct", "reconstruct from simulated data");
    cmd_reconstruct->add_option("recipe", recipe_path, "recipe JSON file")
        ->required();
    cmd_reconstruct->add_option("-d,--data", data_dir,
                                "dataset directory (from `forward`)")
        ->required();
    cmd_reconstruct->add_option("-o,--out", out_dir, "output directory");

    std::string field_path, pgm_path;
    double lo = -1.0, hi = 1.0;
    double window = 0.0;
    auto* cmd_render =
        app.add_subcommand("render", "render a field file to 8-bit PGM");
    cmd_render->add_option("field", field_path, "field file (.fld)")
        ->required();
    cmd_render->add_option("out", pgm_path, "output PGM path")->required();
    cmd_render->add_option("--lo", lo, "value mapped to black");
    cmd_render->add_option("--hi", hi, "value mapped to white");
    cmd_render->add_option("--window", window,
                           "centered square crop side length (length units)");

    auto* cmd_compare = app.add_subcommand(
        "compare-forward", "receiver-line CSV comparing forward models");
    cmd_compare->add_option("recipe", recipe_path, "recipe JSON file")
        ->required();
    cmd_compare->add_option("-o,--out", out_csv, "output CSV path")
        ->required();

    std::vector<int> criteria;
    std::string verify_dir = "verify-out";
    auto* cmd_verify =
        app.add_subcommand("verify", "run the acceptance criteria");
    cmd_verify->add_option("--criteria", criteria,
                           "criterion ids to run (default: all)");
    cmd_verify->add_option("--work-dir", verify_dir,
                           "scratch/artifact directory");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*cmd_forward)
        {
            dt::run_forward(dt::ExperimentRecipe::load(recipe_path), out_dir);
        }
        else if (*cmd_reconstruct)
        {
            const dt::ReconReport report = dt::run_reconstruct(
                dt::ExperimentRecipe::load(recipe_path), data_dir, out_dir);
            std::cout << report.to_json() << "\n";
        }
        else if (*cmd_render)
        {
            const dt::RealField f = dt::read_real_field(field_path);
            dt::write_pgm(pgm_path, f, lo, hi,
                          window > 0.0 ? std::optional<double>(window)
                                       : std::nullopt);
        }
        else if (*cmd_compare)
        {
            dt::run_compare_forward(dt::ExperimentRecipe::load(recipe_path),
                                    out_csv);
        }
        else if (*cmd_verify)
        {
            if (criteria.empty()) criteria = dt::acceptance::all_criteria();
            const int failures = dt::acceptance::run_and_report(
                criteria, verify_dir, std::cout);
            return failures == 0 ? exit_ok : exit_numerical;
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
    return exit_ok;
}
