#ifndef DIFFTOMO_FIELD_HPP
#define DIFFTOMO_FIELD_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "difftomo/grid.hpp"

namespace dt
{
    using cplx = std::complex<double>;
    using point2 = std::array<double, 2>;

    struct RealField
    {
        Grid grid;
        std::vector<double> values;

        RealField() = default;
        explicit RealField(const Grid& g, double fill = 0.0)
            : grid(g), values(g.size(), fill) {}

        double& at(int i, int j) { return values[grid.index(i, j)]; }
        double at(int i, int j) const { return values[grid.index(i, j)]; }
    };

    struct ComplexField
    {
        Grid grid;
        std::vector<cplx> values;

        ComplexField() = default;
        explicit ComplexField(const Grid& g, cplx fill = {})
            : grid(g), values(g.size(), fill) {}

        cplx& at(int i, int j) { return values[grid.index(i, j)]; }
        cplx at(int i, int j) const { return values[grid.index(i, j)]; }
    };

    // Complex samples on the measurement line x2 = r_M.
    struct Trace
    {
        std::vector<double> receiver_x;   // strictly increasing
        double height = 0.0;              // r_M
        std::vector<cplx> values;
    };

    // Receivers on the uniform grid (2 l_M / m) * I_m.
    std::vector<double> uniform_receivers(double l_M, int m);

    // 10 log10(max|f|^2 / MSE). `window` is the side length of a centered
    // square evaluation window in length units; absent means the whole grid.
    // Throws on grid mismatch, empty fields, or zero MSE.
    double psnr(const RealField& reference, const RealField& candidate,
                std::optional<double> window = std::nullopt);

    // Complex circular Gaussian noise with per-trace power
    // signal_power * 10^(-snr_db/10). Deterministic given the seed
    // (mt19937_64 + Box-Muller, fixed draw order). Throws on all-zero traces.
    Trace add_noise(const Trace& trace, double snr_db, std::uint64_t seed);
}

#endif
