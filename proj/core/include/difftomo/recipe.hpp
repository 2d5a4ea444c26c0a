#ifndef DIFFTOMO_RECIPE_HPP
#define DIFFTOMO_RECIPE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "difftomo/acquisition.hpp"
#include "difftomo/helmholtz.hpp"
#include "difftomo/ndft.hpp"
#include "difftomo/phantom.hpp"

namespace dt
{
    enum class ReconMethod { born, rytov, fwi };

    struct ExperimentRecipe
    {
        std::string name;
        SceneSpec phantom;
        AcquisitionConfig acquisition;
        Grid solver_grid;
        ReconMethod method = ReconMethod::born;
        // born/rytov parameters; when absent from the JSON, recon_grid
        // defaults to half_width = l_M (so the grid's k-space resolution
        // matches the k1 sample spacing) with n chosen for the gridding range
        Grid recon_grid;
        int cg_iterations = 20;
        // fwi parameters
        std::vector<double> fwi_frequencies;  // omega values; empty = c0 * K
        int fwi_iterations = 50;
        std::optional<double> fwi_window_radius;
        double fwi_gradient_smoothing = 0.0;  // Gaussian sigma, length units

        std::optional<double> psnr_window;    // side length, length units
        std::vector<std::string> compare_models; // for compare-forward

        std::string to_json() const;
        static ExperimentRecipe from_json(const std::string& text);
        static ExperimentRecipe load(const std::filesystem::path& path);
    };

    struct ReconReport
    {
        std::string recipe;
        std::string method;
        std::optional<double> psnr_db;
        int iterations = 0;
        std::vector<double> history;  // CG residuals or FWI misfits
        std::string to_json() const;
    };

    // forward: writes total/, scattered/, incident/ dataset directories and
    // ground_truth.fld + manifest diagnostics under out_dir.
    void run_forward(const ExperimentRecipe& recipe,
                     const std::filesystem::path& out_dir);

    // reconstruct: reads the dataset directories, writes recon.fld and
    // report.json under out_dir.
    ReconReport run_reconstruct(const ExperimentRecipe& recipe,
                                const std::filesystem::path& data_dir,
                                const std::filesystem::path& out_dir);

    // compare-forward: aligned receiver-line CSV for the recipe's model list
    // (pde-scattered | born-pde | born-convolution | line-source |
    // point-source), plus the calibration scalars used.
    void run_compare_forward(const ExperimentRecipe& recipe,
                             const std::filesystem::path& out_csv);
}

#endif
