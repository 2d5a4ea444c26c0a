#include "difftomo/ndft.hpp"

#include <cmath>
#include <stdexcept>

namespace dt
{
    namespace
    {
        double norm2(const std::vector<cplx>& a)
        {
            double s = 0.0;
            for (const cplx& v : a) s += std::norm(v);
            return s;
        }
    }

    CgneResult cgne_invert(const CoverageSet& samples, const Grid& grid,
                           int iters, NdftMethod method)
    {
        if (iters < 0)
            throw std::invalid_argument("cgne_invert: iters must be >= 0");
        if (samples.samples.empty())
            throw std::invalid_argument("cgne_invert: empty sample set");

        std::vector<point2> points;
        std::vector<cplx> b;
        points.reserve(samples.size());
        b.reserve(samples.size());
        for (const auto& s : samples.samples)
        {
            points.push_back(s.y);
            b.push_back(s.value);
        }

        auto apply = [&](const ComplexField& f) {
            return ndft_forward(f, points, method);
        };
        auto apply_adj = [&](const std::vector<cplx>& v) {
            return ndft_adjoint(v, points, grid, method);
        };

        CgneResult result;
        result.iterate = ComplexField(grid);
        std::vector<cplx> r = b;                       // b - A*0
        result.residual_norms.push_back(std::sqrt(norm2(r)));

        ComplexField s = apply_adj(r);
        ComplexField p = s;
        double gamma = norm2(s.values);

        for (int it = 0; it < iters; ++it)
        {
            const std::vector<cplx> q = apply(p);
            const double qn = norm2(q);
            if (qn == 0.0) break;  // stagnation: direction in the null space
            const double alpha = gamma / qn;
            for (std::size_t i = 0; i < result.iterate.values.size(); ++i)
                result.iterate.values[i] += alpha * p.values[i];
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] -= alpha * q[i];
            s = apply_adj(r);
            const double gamma_next = norm2(s.values);
            if (!std::isfinite(gamma_next))
                throw std::runtime_error("cgne_invert: iteration diverged");
            const double beta = gamma_next / gamma;
            gamma = gamma_next;
            for (std::size_t i = 0; i < p.values.size(); ++i)
                p.values[i] = s.values[i] + beta * p.values[i];
            result.residual_norms.push_back(std::sqrt(norm2(r)));
        }

        result.reconstruction = RealField(grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            result.reconstruction.values[i] =
                std::real(result.iterate.values[i]);
        return result;
    }
}
