#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "difftomo/ndft.hpp"

using namespace dt;

namespace
{
    ComplexField random_field(const Grid& g, std::mt19937_64& rng)
    {
        std::normal_distribution<double> nd;
        ComplexField f(g);
        for (cplx& v : f.values) v = cplx{nd(rng), nd(rng)};
        return f;
    }

    std::vector<point2> random_points(int M, double kmax,
                                      std::mt19937_64& rng)
    {
        std::uniform_real_distribution<double> ud(-kmax, kmax);
        std::vector<point2> pts(M);
        for (auto& p : pts) p = {ud(rng), ud(rng)};
        return pts;
    }
}

TEST_SUITE("ndft")
{
    TEST_CASE("forward matches the definition on a tiny grid")
    {
        const Grid g = make_grid(1.5, 4);
        std::mt19937_64 rng(11);
        const ComplexField f = random_field(g, rng);
        const std::vector<point2> pts{{0.0, 0.0}, {1.1, -0.4}, {-2.0, 0.9}};
        const std::vector<cplx> v = ndft_forward(f, pts);
        const double w = (2.0 * g.half_width) * (2.0 * g.half_width) /
                         (double(g.n) * g.n) / (2.0 * M_PI);
        for (std::size_t q = 0; q < pts.size(); ++q)
        {
            cplx direct{};
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i)
                    direct += f.at(i, j) *
                              std::exp(cplx{0.0, -(g.coord(i) * pts[q][0] +
                                                   g.coord(j) * pts[q][1])});
            direct *= w;
            CHECK(std::abs(v[q] - direct) < 1e-12);
        }
        // zero frequency gives the plain weighted sum
        cplx s{};
        for (const cplx& x : f.values) s += x;
        CHECK(std::abs(v[0] - w * s) < 1e-12);
    }

    TEST_CASE("direct adjointness")
    {
        const Grid g = make_grid(1.0, 16);
        std::mt19937_64 rng(5);
        std::normal_distribution<double> nd;
        for (int trial = 0; trial < 20; ++trial)
        {
            const ComplexField x = random_field(g, rng);
            const auto pts = random_points(50, 0.9 * M_PI / g.spacing(), rng);
            std::vector<cplx> y(pts.size());
            for (cplx& v : y) v = cplx{nd(rng), nd(rng)};

            const std::vector<cplx> ax = ndft_forward(x, pts);
            const ComplexField aty = ndft_adjoint(y, pts, g);
            cplx lhs{}, rhs{};
            double nx = 0.0, ny = 0.0;
            for (std::size_t q = 0; q < y.size(); ++q)
            {
                lhs += ax[q] * std::conj(y[q]);
                ny += std::norm(y[q]);
            }
            for (std::size_t p = 0; p < x.values.size(); ++p)
            {
                rhs += x.values[p] * std::conj(aty.values[p]);
                nx += std::norm(x.values[p]);
            }
            CHECK(std::abs(lhs - rhs) <=
                  1e-10 * std::sqrt(nx) * std::sqrt(ny));
        }
    }

    TEST_CASE("gridding matches direct within 1e-6")
    {
        const Grid g = make_grid(2.0, 32);
        std::mt19937_64 rng(7);
        const ComplexField f = random_field(g, rng);
        const auto pts = random_points(200, 0.9 * M_PI / g.spacing(), rng);

        const std::vector<cplx> vd = ndft_forward(f, pts, NdftMethod::direct);
        const std::vector<cplx> vg = ndft_forward(f, pts, NdftMethod::gridding);
        double num = 0.0, den = 0.0;
        for (std::size_t q = 0; q < pts.size(); ++q)
        {
            num += std::norm(vd[q] - vg[q]);
            den += std::norm(vd[q]);
        }
        CHECK(std::sqrt(num / den) < 1e-6);

        std::vector<cplx> y(pts.size());
        std::normal_distribution<double> nd;
        for (cplx& v : y) v = cplx{nd(rng), nd(rng)};
        const ComplexField ad = ndft_adjoint(y, pts, g, NdftMethod::direct);
        const ComplexField ag = ndft_adjoint(y, pts, g, NdftMethod::gridding);
        num = den = 0.0;
        for (std::size_t p = 0; p < ad.values.size(); ++p)
        {
            num += std::norm(ad.values[p] - ag.values[p]);
            den += std::norm(ad.values[p]);
        }
        CHECK(std::sqrt(num / den) < 1e-6);
    }

    TEST_CASE("gridding rejects out-of-range frequencies")
    {
        const Grid g = make_grid(2.0, 16);
        const ComplexField f(g);
        const std::vector<point2> far{{1.2 * M_PI / g.spacing(), 0.0}};
        CHECK_THROWS(ndft_forward(f, far, NdftMethod::gridding));
        CHECK_NOTHROW(ndft_forward(f, far, NdftMethod::direct));
    }

    TEST_CASE("cgne recovers a consistent synthetic system")
    {
        const Grid g = make_grid(1.0, 16);
        std::mt19937_64 rng(21);
        std::normal_distribution<double> nd;
        ComplexField f_true(g);
        for (cplx& v : f_true.values) v = cplx{nd(rng), 0.0};  // real model

        const auto pts = random_points(400, 0.9 * M_PI / g.spacing(), rng);
        const std::vector<cplx> b = ndft_forward(f_true, pts);

        CoverageSet set;
        for (std::size_t q = 0; q < pts.size(); ++q)
        {
            KSpaceSample s;
            s.y = pts[q];
            s.value = b[q];
            set.samples.push_back(s);
        }
        // 800 iterations exceed the 512 real degrees of freedom, so CG
        // terminates on the exact solution of the consistent system
        const CgneResult r = cgne_invert(set, g, 800);
        double num = 0.0, den = 0.0;
        for (std::size_t p = 0; p < f_true.values.size(); ++p)
        {
            num += std::norm(r.iterate.values[p] - f_true.values[p]);
            den += std::norm(f_true.values[p]);
        }
        CHECK(std::sqrt(num / den) <= 1e-8);

        // residual norms are monotonically non-increasing
        REQUIRE(r.residual_norms.size() >= 2);
        for (std::size_t j = 1; j < r.residual_norms.size(); ++j)
            CHECK(r.residual_norms[j] <= r.residual_norms[j - 1] + 1e-12);
        CHECK(r.reconstruction.values.size() == g.size());
    }
}
