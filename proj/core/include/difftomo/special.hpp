#ifndef DIFFTOMO_SPECIAL_HPP
#define DIFFTOMO_SPECIAL_HPP

#include <complex>

namespace dt
{
    // Bessel functions of order 0 and 1, computed in-repo: ascending series
    // below x = 13, Hankel asymptotic expansions above. Relative accuracy
    // is better than 1e-10 on (0, 1e4].
    double bessel_j0(double x);   // x >= 0
    double bessel_j1(double x);   // x >= 0
    double bessel_y0(double x);   // throws for x <= 0
    double bessel_y1(double x);   // throws for x <= 0

    // H0^(1)(x) = J0(x) + i Y0(x); throws for x <= 0.
    std::complex<double> hankel_h0_1(double x);
    std::complex<double> hankel_h1_1(double x);

    inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
}

#endif
