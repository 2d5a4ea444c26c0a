#include <doctest.h>

#include <cmath>

#include "difftomo/special.hpp"

using namespace dt;

namespace
{
    // Frozen oracle values from an arbitrary-precision series evaluation
    // (30 significant digits, truncated to double).
    struct Oracle { double x, j0, j1, y0, y1; };
    constexpr Oracle oracle[] = {
        {0.5,    0.9384698072408129,    0.24226845767487389,
                 -0.44451873350670656,  -1.4714723926702431},
        {3.7,    -0.39923020337119111,  0.053833987745461864,
                 0.10607431532035418,   0.41667437268380749},
        {12.9,   0.19884243713633095,   -0.091248252249939444,
                 -0.098870370241498478, -0.20281697432366466},
        {13.1,   0.21288819752206038,   -0.048852473334223707,
                 -0.056925256781293759, -0.21521150600500223},
        {55.0,   -0.074548302648236823, -0.078250038308684659,
                 -0.077569178730412649, 0.073846265432577888},
        {120.7,  0.062549034919434445,  0.037164305256068831,
                 0.036904883578851896,  -0.062396695608925504},
        {1000.0, 0.024786686152420175,  0.0047283119070895239,
                 0.0047159179776228134, -0.024784331292351779},
    };
}

TEST_SUITE("special")
{
    TEST_CASE("bessel values against the precision oracle")
    {
        // the table straddles the series/asymptotic switchover at x = 13
        for (const Oracle& o : oracle)
        {
            CHECK(bessel_j0(o.x) == doctest::Approx(o.j0).epsilon(1e-10));
            CHECK(bessel_j1(o.x) == doctest::Approx(o.j1).epsilon(1e-10));
            CHECK(bessel_y0(o.x) == doctest::Approx(o.y0).epsilon(1e-10));
            CHECK(bessel_y1(o.x) == doctest::Approx(o.y1).epsilon(1e-10));
        }
    }

    TEST_CASE("hankel frozen value at 1")
    {
        const std::complex<double> h = hankel_h0_1(1.0);
        CHECK(std::abs(h - std::complex<double>{0.7651976866, 0.0882569642}) <
              1e-9);
        const std::complex<double> h1 = hankel_h1_1(1.0);
        CHECK(h1.real() == doctest::Approx(bessel_j1(1.0)).epsilon(1e-12));
        CHECK(h1.imag() == doctest::Approx(bessel_y1(1.0)).epsilon(1e-12));
    }

    TEST_CASE("wronskian identity")
    {
        // J1(x) Y0(x) - J0(x) Y1(x) = 2 / (pi x)
        for (int s = 0; s < 100; ++s)
        {
            const double x =
                0.1 * std::pow(1000.0, double(s) / 99.0);  // [0.1, 100]
            const double w = bessel_j1(x) * bessel_y0(x) -
                             bessel_j0(x) * bessel_y1(x);
            const double exact = 2.0 / (M_PI * x);
            CHECK(std::abs(w - exact) <= 1e-8 * exact);
        }
    }

    TEST_CASE("small-argument limits")
    {
        CHECK(bessel_j0(0.0) == doctest::Approx(1.0));
        CHECK(bessel_j1(0.0) == doctest::Approx(0.0));
        CHECK(bessel_y0(1e-8) < -3.0);  // logarithmic singularity
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS(bessel_y0(0.0));
        CHECK_THROWS(bessel_y0(-1.0));
        CHECK_THROWS(bessel_y1(0.0));
        CHECK_THROWS(hankel_h0_1(0.0));
        CHECK_THROWS(hankel_h0_1(-2.0));
    }
}
