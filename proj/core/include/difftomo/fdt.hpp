#ifndef DIFFTOMO_FDT_HPP
#define DIFFTOMO_FDT_HPP

#include <filesystem>
#include <vector>

#include "difftomo/acquisition.hpp"
#include "difftomo/field.hpp"

namespace dt
{
    // kappa(k1) = sqrt(k0^2 - k1^2); throws for |k1| > k0 (evanescent).
    double kappa(double k1, double k0);

    struct Spectrum
    {
        std::vector<double> k1;    // (pi/l_M) * I_m
        std::vector<cplx> values;
    };

    // F_{1,m} u(k1) = (2pi)^{-1/2} (2 l_M / m) sum u(x1) e^{-i x1 k1} on the
    // DFT grid k1 in (pi/l_M) I_m. FFT with index shifts; agrees with the
    // direct sum to 1e-12 relative. Requires uniform receivers, even m.
    Spectrum trace_dft(const Trace& trace, double l_M);

    struct KSpaceSample
    {
        point2 y;          // spatial frequency
        cplx value;        // F f_1 (y), i.e. k0^2 F f / k0^2
        int angle_index = 0;
        double k0 = 0.0;
        int k1_index = 0;
    };

    struct CoverageSet
    {
        std::vector<KSpaceSample> samples;

        std::size_t size() const { return samples.size(); }
        double max_norm() const;
        void write_csv(const std::filesystem::path& path) const;
    };

    // Bins with |k1| >= k0 (1 - eps) are dropped; near-zero kappa samples
    // amplify noise through the kappa e^{-i kappa r_M} inversion.
    inline constexpr double evanescent_cutoff = 1e-6;

    // Applies -i sqrt(2/pi) kappa e^{-i kappa r_M} F_{1,m} u / k0^2 per
    // (angle, k0) and maps bins to R_alpha (k1, kappa - k0)^T. The dataset
    // must hold born-equivalent (or scattered-under-Born) traces.
    CoverageSet fdt_samples(const Dataset& dataset);

    // Sample points only, for the given angle/wavenumber sets.
    CoverageSet coverage_geometry(const std::vector<double>& wavenumbers,
                                  const std::vector<double>& angles,
                                  int m, double l_M);

    // Membership test for the k-space coverage of a wavenumber interval
    // [kmin, kmax] under all rotations of angle 0 (no rotation), i.e. the
    // union of semicircles (k1, kappa - k0).
    bool interval_coverage_contains(point2 y, double kmin, double kmax);

    // Sequential 1D phase unwrapping: whenever a successive difference
    // leaves (-pi, pi], shift the tail by 2 pi.
    std::vector<double> unwrap_1d(const std::vector<double>& phases);

    // u^inc (i unwrap(arg(u^Rytov/u^inc + 1)) + ln|u^Rytov/u^inc + 1|)
    // with u^Rytov = total - incident. Throws when the log argument
    // vanishes or the incident trace has a zero.
    Trace rytov_to_born(const Trace& total, const Trace& incident);
}

#endif
