#include "difftomo/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dt
{
    std::vector<double> uniform_receivers(double l_M, int m)
    {
        if (!(l_M > 0.0) || m < 1)
            throw std::invalid_argument("uniform_receivers: need l_M > 0, m >= 1");
        std::vector<double> x(m);
        const double h = 2.0 * l_M / m;
        for (int j = 0; j < m; ++j)
            x[j] = (j - m / 2) * h;
        return x;
    }

    double psnr(const RealField& reference, const RealField& candidate,
                std::optional<double> window)
    {
        if (reference.grid != candidate.grid)
            throw std::invalid_argument("psnr: grid mismatch");
        if (reference.values.empty())
            throw std::invalid_argument("psnr: empty field");

        const Grid& g = reference.grid;
        double half = window ? *window / 2.0 : g.half_width + 1.0;

        double peak = 0.0, sse = 0.0;
        std::size_t count = 0;
        for (int j = 0; j < g.n; ++j)
        {
            if (std::abs(g.coord(j)) > half) continue;
            for (int i = 0; i < g.n; ++i)
            {
                if (std::abs(g.coord(i)) > half) continue;
                const double f = reference.at(i, j);
                const double e = f - candidate.at(i, j);
                peak = std::max(peak, std::abs(f));
                sse += e * e;
                ++count;
            }
        }
        if (count == 0)
            throw std::invalid_argument("psnr: evaluation window contains no nodes");
        if (sse == 0.0)
            throw std::invalid_argument("psnr: zero MSE");
        return 10.0 * std::log10(peak * peak / (sse / double(count)));
    }

    Trace add_noise(const Trace& trace, double snr_db, std::uint64_t seed)
    {
        if (!std::isfinite(snr_db))
            throw std::invalid_argument("add_noise: snr must be finite");
        if (trace.values.empty())
            throw std::invalid_argument("add_noise: empty trace");

        double signal_power = 0.0;
        for (const cplx& v : trace.values)
            signal_power += std::norm(v);
        signal_power /= double(trace.values.size());
        if (signal_power == 0.0)
            throw std::invalid_argument("add_noise: all-zero trace, SNR undefined");

        const double noise_power = signal_power * std::pow(10.0, -snr_db / 10.0);
        const double sigma = std::sqrt(noise_power / 2.0); // per component

        // mt19937_64 + Box-Muller on explicit uniforms keeps the stream
        // identical across standard libraries.
        std::mt19937_64 rng(seed);
        auto uniform = [&rng]() {
            // (0, 1]
            return (double(rng() >> 11) + 1.0) * 0x1.0p-53;
        };
        auto gaussian_pair = [&]() {
            const double u1 = uniform();
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            return std::pair{r * std::cos(2.0 * M_PI * u2),
                             r * std::sin(2.0 * M_PI * u2)};
        };

        Trace out = trace;
        for (cplx& v : out.values)
        {
            auto [g1, g2] = gaussian_pair();
            v += cplx(sigma * g1, sigma * g2);
        }
        return out;
    }
}
