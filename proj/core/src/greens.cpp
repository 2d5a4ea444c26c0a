#include "difftomo/greens.hpp"

#include <cmath>
#include <stdexcept>

#include <fftw3.h>

#include "difftomo/special.hpp"

namespace dt
{
    cplx greens_2d(point2 x, double k0)
    {
        const double r = std::hypot(x[0], x[1]);
        if (r == 0.0)
            throw std::domain_error("greens_2d: singular at x = 0");
        if (!(k0 > 0.0))
            throw std::invalid_argument("greens_2d: k0 must be positive");
        return cplx{0.0, 0.25} * hankel_h0_1(k0 * r);
    }

    cplx greens_cell_average(double k0, double h)
    {
        if (!(k0 > 0.0) || !(h > 0.0))
            throw std::invalid_argument("greens_cell_average: need k0, h > 0");
        // mean of (i/4) H0^(1)(k0 r) over a disk of area h^2
        // (radius rho = h/sqrt(pi)), small-argument expansion of H0^(1):
        // <ln r> over the disk is ln(rho) - 1/2.
        const double rho = h / std::sqrt(M_PI);
        const cplx log_part{std::log(k0 * rho / 2.0) + euler_gamma - 0.5, 0.0};
        return cplx{0.0, 0.25} *
               (1.0 + cplx{0.0, 2.0 / M_PI} * log_part);
    }

    std::vector<cplx> born_convolution(const RealField& f, double k0,
                                       std::span<const point2> eval_points,
                                       const BornOptions& opts)
    {
        if (!(k0 > 0.0))
            throw std::invalid_argument("born_convolution: k0 must be positive");
        const Grid& g = f.grid;
        const double h = g.spacing();
        const double cell_area = h * h;
        const cplx g_cell = greens_cell_average(k0, h);

        // gather support nodes once; the quadrature skips f = 0
        struct SupportNode { double x1, x2; cplx weight; };
        std::vector<SupportNode> support;
        for (int j = 0; j < g.n; ++j)
        {
            const double x2 = g.coord(j);
            const cplx phase{std::cos(k0 * x2), std::sin(k0 * x2)};
            for (int i = 0; i < g.n; ++i)
                if (f.at(i, j) != 0.0)
                    support.push_back({g.coord(i), x2, f.at(i, j) * phase});
        }

        std::vector<cplx> out(eval_points.size());
        for (std::size_t p = 0; p < eval_points.size(); ++p)
        {
            cplx acc{};
            for (const auto& s : support)
            {
                const double r = std::hypot(eval_points[p][0] - s.x1,
                                            eval_points[p][1] - s.x2);
                if (r < 0.5 * h)
                {
                    if (!opts.self_cell_correction)
                        throw std::domain_error(
                            "born_convolution: evaluation point touches the "
                            "singular cell; enable self_cell_correction");
                    acc += g_cell * s.weight;
                }
                else
                {
                    acc += cplx{0.0, 0.25} * hankel_h0_1(k0 * r) * s.weight;
                }
            }
            out[p] = cell_area * acc;
        }
        return out;
    }

    namespace
    {
        // circular convolution on a 2M x 2M padded grid via FFTW; kernel is
        // the sampled Green's function with the self cell replaced by its
        // analytic average
        class GridConvolver
        {
        public:
            GridConvolver(const Grid& g, double k0)
                : n_(g.n), m_(2 * g.n), h_(g.spacing())
            {
                const std::size_t sz = std::size_t(m_) * m_;
                kernel_hat_.resize(sz);
                buf_.resize(sz);

                plan_fwd_ = fftw_plan_dft_2d(
                    m_, m_, reinterpret_cast<fftw_complex*>(buf_.data()),
                    reinterpret_cast<fftw_complex*>(buf_.data()),
                    FFTW_FORWARD, FFTW_ESTIMATE);
                plan_bwd_ = fftw_plan_dft_2d(
                    m_, m_, reinterpret_cast<fftw_complex*>(buf_.data()),
                    reinterpret_cast<fftw_complex*>(buf_.data()),
                    FFTW_BACKWARD, FFTW_ESTIMATE);

                // kernel index wraps displacements -n..n-1 onto 0..2n-1
                for (int dj = -n_; dj < n_; ++dj)
                    for (int di = -n_; di < n_; ++di)
                    {
                        const std::size_t idx =
                            std::size_t((dj + m_) % m_) * m_ + (di + m_) % m_;
                        if (di == 0 && dj == 0)
                            buf_[idx] = greens_cell_average(k0, h_);
                        else
                            buf_[idx] = cplx{0.0, 0.25} *
                                        hankel_h0_1(k0 * h_ *
                                                    std::hypot(di, dj));
                    }
                fftw_execute(plan_fwd_);
                kernel_hat_ = buf_;
            }

            ~GridConvolver()
            {
                fftw_destroy_plan(plan_fwd_);
                fftw_destroy_plan(plan_bwd_);
            }

            GridConvolver(const GridConvolver&) = delete;
            GridConvolver& operator=(const GridConvolver&) = delete;

            // u(x) = h^2 sum_y G(x - y) src(y) on the grid
            void apply(const std::vector<cplx>& src, std::vector<cplx>& out)
            {
                const std::size_t sz = std::size_t(m_) * m_;
                std::fill(buf_.begin(), buf_.end(), cplx{});
                for (int j = 0; j < n_; ++j)
                    for (int i = 0; i < n_; ++i)
                        buf_[std::size_t(j) * m_ + i] =
                            src[std::size_t(j) * n_ + i];
                fftw_execute(plan_fwd_);
                const double scale = h_ * h_ / double(sz);
                for (std::size_t i = 0; i < sz; ++i)
                    buf_[i] *= kernel_hat_[i] * scale;
                fftw_execute(plan_bwd_);
                out.resize(std::size_t(n_) * n_);
                for (int j = 0; j < n_; ++j)
                    for (int i = 0; i < n_; ++i)
                        out[std::size_t(j) * n_ + i] =
                            buf_[std::size_t(j) * m_ + i];
            }

        private:
            int n_, m_;
            double h_;
            std::vector<cplx> kernel_hat_;
            std::vector<cplx> buf_;
            fftw_plan plan_fwd_{}, plan_bwd_{};
        };
    }

    ComplexField born_iterate(const RealField& f, double k0, int order)
    {
        if (order < 1)
            throw std::invalid_argument("born_iterate: order must be >= 1");
        if (!(k0 > 0.0))
            throw std::invalid_argument("born_iterate: k0 must be positive");

        const Grid& g = f.grid;
        GridConvolver conv(g, k0);

        std::vector<cplx> u_inc(g.size());
        for (int j = 0; j < g.n; ++j)
        {
            const double x2 = g.coord(j);
            const cplx e{std::cos(k0 * x2), std::sin(k0 * x2)};
            for (int i = 0; i < g.n; ++i)
                u_inc[g.index(i, j)] = e;
        }

        ComplexField u(g);
        std::vector<cplx> src(g.size());
        for (int q = 0; q < order; ++q)
        {
            for (std::size_t i = 0; i < g.size(); ++i)
                src[i] = f.values[i] * (u_inc[i] + u.values[i]);
            conv.apply(src, u.values);
        }
        return u;
    }
}
