#ifndef DIFFTOMO_FWI_HPP
#define DIFFTOMO_FWI_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "difftomo/acquisition.hpp"
#include "difftomo/field.hpp"

namespace dt
{
    struct FwiConfig
    {
        std::vector<double> frequencies;   // omega, ascending
        int iters_per_frequency = 50;
        RealField initial_speed;           // c0 field on the solver grid
        AcquisitionConfig acquisition;     // point or line sources
        std::optional<double> window_radius; // updates restricted to this ball
        double reference_omega = 0.0;      // omega used to report f; 0 = max
        // Gaussian sigma (length units) used to precondition the search
        // direction in fwi_run; 0 disables. fwi_gradient is never smoothed.
        double gradient_smoothing = 0.0;
        // Armijo line search
        double armijo_c1 = 1e-4;
        int max_line_search = 20;
        double initial_step_fraction = 0.01; // of the current c range

        void validate() const;
    };

    // Misfit J(c) = 1/2 sum_omega sum_alpha (2 l_M/m) ||R u_tot - d||^2 over
    // total-field traces. Per angle the speed perturbation is resampled
    // bilinearly, c_alpha(x) = c0 + (c - c0)(R_alpha x), which keeps the
    // per-angle medium linear in c. Point or line sources only.
    double fwi_misfit(const RealField& c, const Dataset& data,
                      const FwiConfig& config);

    // Adjoint-state gradient of the discrete misfit with respect to nodal c.
    // Zero outside the inversion window. Matches central finite differences
    // to ~1e-5 relative (the discrete operator's conjugate transpose is used
    // for the adjoint solves).
    RealField fwi_gradient(const RealField& c, const Dataset& data,
                           const FwiConfig& config,
                           double* misfit_out = nullptr);

    struct FwiReport
    {
        std::vector<double> misfit_history;
        std::vector<int> frequency_blocks;     // global iteration count per omega
        std::vector<std::string> notes;        // line-search failures etc.
        bool completed = true;
        std::string to_json() const;
    };

    struct FwiResult
    {
        RealField speed;
        RealField potential;   // f at the reference frequency
        FwiReport report;
    };

    // Algorithm: for each frequency (low to high), run iters_per_frequency
    // NLCG iterations (Polak-Ribiere+ with restarts, Armijo backtracking).
    // A line-search failure truncates the frequency block; partial results
    // are still returned.
    FwiResult fwi_run(const FwiConfig& config, const Dataset& data,
                      const std::function<void(int, double)>& progress = {});

    // Exposed for testing: one PR+ direction update.
    struct NlcgState
    {
        std::vector<double> prev_gradient;
        std::vector<double> prev_direction;
        bool fresh = true;
    };
    std::vector<double> nlcg_direction(NlcgState& state,
                                       const std::vector<double>& gradient);
}

#endif
