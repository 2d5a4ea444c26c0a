#include "difftomo/ndft.hpp"

#include <cmath>
#include <stdexcept>

#include <fftw3.h>

namespace dt
{
    namespace
    {
        double ndft_scale(const Grid& g)
        {
            const double side = 2.0 * g.half_width;
            return side * side / (2.0 * M_PI * double(g.n) * double(g.n));
        }

        // ---- direct path -------------------------------------------------

        // per-point separable phases e^{-i (i - N/2) h y}, built by recurrence
        void phase_column(std::vector<cplx>& out, int n, double step)
        {
            out.resize(n);
            const cplx w{std::cos(step), -std::sin(step)};
            cplx a{std::cos(0.5 * n * step), std::sin(0.5 * n * step)};
            for (int i = 0; i < n; ++i)
            {
                out[i] = a;
                a *= w;
            }
        }

        std::vector<cplx> forward_direct(const ComplexField& f,
                                         std::span<const point2> points)
        {
            const Grid& g = f.grid;
            const double h = g.spacing();
            const double scale = ndft_scale(g);
            std::vector<cplx> out(points.size());
            std::vector<cplx> px, py, row(g.n);
            for (std::size_t p = 0; p < points.size(); ++p)
            {
                phase_column(px, g.n, h * points[p][0]);
                phase_column(py, g.n, h * points[p][1]);
                cplx acc{};
                for (int j = 0; j < g.n; ++j)
                {
                    cplx rsum{};
                    const cplx* fj = f.values.data() + g.index(0, j);
                    for (int i = 0; i < g.n; ++i)
                        rsum += fj[i] * px[i];
                    acc += rsum * py[j];
                }
                out[p] = scale * acc;
            }
            return out;
        }

        ComplexField adjoint_direct(std::span<const cplx> values,
                                    std::span<const point2> points,
                                    const Grid& g)
        {
            const double h = g.spacing();
            const double scale = ndft_scale(g);
            ComplexField out(g);
            std::vector<cplx> px, py;
            for (std::size_t p = 0; p < points.size(); ++p)
            {
                phase_column(px, g.n, h * points[p][0]);
                phase_column(py, g.n, h * points[p][1]);
                const cplx v = scale * values[p];
                for (int j = 0; j < g.n; ++j)
                {
                    const cplx vj = v * std::conj(py[j]);
                    cplx* oj = out.values.data() + g.index(0, j);
                    for (int i = 0; i < g.n; ++i)
                        oj[i] += vj * std::conj(px[i]);
                }
            }
            return out;
        }

        // ---- gridding path ----------------------------------------------
        //
        // Gaussian-kernel gridding (oversampling sigma = 2, half-width
        // Msp = 10, tau = pi Msp / (N^2 sigma (sigma - 0.5))). Forward and
        // adjoint share the spreading weights and deconvolution diagonal, so
        // they are exact transposes of each other.

        constexpr int grid_sigma = 2;
        constexpr int grid_msp = 10;

        struct GriddingPlan
        {
            int n, mr;
            double tau;
            std::vector<double> deconv;     // per-dimension e^{k^2 tau} factor
            std::vector<cplx> buf;
            fftw_plan plan_fwd, plan_bwd;

            explicit GriddingPlan(const Grid& g)
                : n(g.n), mr(grid_sigma * g.n),
                  tau(M_PI * grid_msp /
                      (double(g.n) * g.n * grid_sigma * (grid_sigma - 0.5)))
            {
                deconv.resize(n);
                // per-dimension 1/ghat(k) with ghat(k) = sqrt(tau/pi)
                // e^{-k^2 tau}; the 1/Mr^2 FFT normalization is applied
                // symmetrically at the nonuniform side in both directions
                const double norm = std::sqrt(M_PI / tau);
                for (int i = 0; i < n; ++i)
                {
                    const double k = i - n / 2;
                    deconv[i] = norm * std::exp(k * k * tau);
                }
                buf.resize(std::size_t(mr) * mr);
                plan_fwd = fftw_plan_dft_2d(
                    mr, mr, reinterpret_cast<fftw_complex*>(buf.data()),
                    reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                    FFTW_ESTIMATE);
                plan_bwd = fftw_plan_dft_2d(
                    mr, mr, reinterpret_cast<fftw_complex*>(buf.data()),
                    reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD,
                    FFTW_ESTIMATE);
            }

            ~GriddingPlan()
            {
                fftw_destroy_plan(plan_fwd);
                fftw_destroy_plan(plan_bwd);
            }

            GriddingPlan(const GriddingPlan&) = delete;
            GriddingPlan& operator=(const GriddingPlan&) = delete;

            // scaled frequency z = h y must satisfy |z| < pi
            static void check_range(double z)
            {
                if (!(std::abs(z) < M_PI))
                    throw std::domain_error(
                        "ndft gridding: |y| h must be below pi");
            }

            struct Neighborhood
            {
                int base1, base2;
                double w1[2 * grid_msp + 1];
                double w2[2 * grid_msp + 1];
            };

            Neighborhood neighborhood(point2 z) const
            {
                check_range(z[0]);
                check_range(z[1]);
                Neighborhood nb;
                const double step = 2.0 * M_PI / mr;
                nb.base1 = int(std::lround(z[0] / step));
                nb.base2 = int(std::lround(z[1] / step));
                for (int o = -grid_msp; o <= grid_msp; ++o)
                {
                    const double d1 = z[0] - (nb.base1 + o) * step;
                    const double d2 = z[1] - (nb.base2 + o) * step;
                    nb.w1[o + grid_msp] = std::exp(-d1 * d1 / (4.0 * tau));
                    nb.w2[o + grid_msp] = std::exp(-d2 * d2 / (4.0 * tau));
                }
                return nb;
            }

            std::size_t wrap(int m1, int m2) const
            {
                return std::size_t((m2 % mr + mr) % mr) * mr +
                       std::size_t((m1 % mr + mr) % mr);
            }
        };

        std::vector<cplx> forward_gridding(const ComplexField& f,
                                           std::span<const point2> points)
        {
            const Grid& g = f.grid;
            const double h = g.spacing();
            const double scale = ndft_scale(g);
            GriddingPlan plan(g);

            // deconvolved coefficients at wrapped FFT indices; e^{-i k z}
            // with k = i - N/2 lands on FFTW index (k mod Mr)
            std::fill(plan.buf.begin(), plan.buf.end(), cplx{});
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i)
                    plan.buf[plan.wrap(i - g.n / 2, j - g.n / 2)] =
                        f.at(i, j) * plan.deconv[i] * plan.deconv[j];
            fftw_execute(plan.plan_fwd);
            const double inv_mr2 = 1.0 / (double(plan.mr) * plan.mr);

            std::vector<cplx> out(points.size());
            for (std::size_t p = 0; p < points.size(); ++p)
            {
                const auto nb =
                    plan.neighborhood({h * points[p][0], h * points[p][1]});
                cplx acc{};
                for (int o2 = -grid_msp; o2 <= grid_msp; ++o2)
                {
                    cplx rsum{};
                    for (int o1 = -grid_msp; o1 <= grid_msp; ++o1)
                        rsum += nb.w1[o1 + grid_msp] *
                                plan.buf[plan.wrap(nb.base1 + o1,
                                                   nb.base2 + o2)];
                    acc += nb.w2[o2 + grid_msp] * rsum;
                }
                out[p] = scale * inv_mr2 * acc;
            }
            return out;
        }

        ComplexField adjoint_gridding(std::span<const cplx> values,
                                      std::span<const point2> points,
                                      const Grid& g)
        {
            const double h = g.spacing();
            const double scale = ndft_scale(g);
            GriddingPlan plan(g);

            std::fill(plan.buf.begin(), plan.buf.end(), cplx{});
            const double inv_mr2 = 1.0 / (double(plan.mr) * plan.mr);
            for (std::size_t p = 0; p < points.size(); ++p)
            {
                const auto nb =
                    plan.neighborhood({h * points[p][0], h * points[p][1]});
                const cplx v = scale * inv_mr2 * values[p];
                for (int o2 = -grid_msp; o2 <= grid_msp; ++o2)
                {
                    const cplx v2 = v * nb.w2[o2 + grid_msp];
                    for (int o1 = -grid_msp; o1 <= grid_msp; ++o1)
                        plan.buf[plan.wrap(nb.base1 + o1, nb.base2 + o2)] +=
                            v2 * nb.w1[o1 + grid_msp];
                }
            }
            fftw_execute(plan.plan_bwd);

            ComplexField out(g);
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i)
                    out.at(i, j) =
                        plan.buf[plan.wrap(i - g.n / 2, j - g.n / 2)] *
                        plan.deconv[i] * plan.deconv[j];
            return out;
        }
    }

    std::vector<cplx> ndft_forward(const ComplexField& f,
                                   std::span<const point2> points,
                                   NdftMethod method)
    {
        if (f.grid.n < 2)
            throw std::invalid_argument("ndft_forward: empty grid");
        if (method == NdftMethod::direct)
            return forward_direct(f, points);
        return forward_gridding(f, points);
    }

    ComplexField ndft_adjoint(std::span<const cplx> values,
                              std::span<const point2> points, const Grid& grid,
                              NdftMethod method)
    {
        if (values.size() != points.size())
            throw std::invalid_argument("ndft_adjoint: size mismatch");
        if (grid.n < 2)
            throw std::invalid_argument("ndft_adjoint: empty grid");
        if (method == NdftMethod::direct)
            return adjoint_direct(values, points, grid);
        return adjoint_gridding(values, points, grid);
    }
}
