#include "difftomo/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dt
{
    // Ascending series below x = 13 (long double keeps the alternating-sum
    // cancellation under control: the largest term there is ~(x^2/4)^k/k!^2
    // ~ 4e4, so ~1e-15 relative noise in the double result). Above 13 the
    // Hankel asymptotic expansion truncated at its smallest term is accurate
    // to ~e^(-2x) < 1e-11.
    namespace
    {
        constexpr double series_cut = 13.0;
        constexpr long double gamma_l = 0.5772156649015328606065120900824024L;
        constexpr long double pi_l = 3.1415926535897932384626433832795029L;

        long double j0_series(long double x)
        {
            const long double q = x * x / 4.0L;
            long double term = 1.0L, sum = 1.0L;
            for (int k = 1; k <= 60; ++k)
            {
                term *= -q / (long double)(k) / (long double)(k);
                sum += term;
                if (std::abs(term) < 1e-24L * std::abs(sum) + 1e-30L) break;
            }
            return sum;
        }

        long double j1_series(long double x)
        {
            const long double q = x * x / 4.0L;
            long double term = x / 2.0L, sum = term;
            for (int k = 1; k <= 60; ++k)
            {
                term *= -q / (long double)(k) / (long double)(k + 1);
                sum += term;
                if (std::abs(term) < 1e-24L * std::abs(sum) + 1e-30L) break;
            }
            return sum;
        }

        long double y0_series(long double x)
        {
            // (2/pi)[(ln(x/2)+gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2]
            const long double q = x * x / 4.0L;
            long double term = 1.0L, harmonic = 0.0L, sum = 0.0L;
            for (int k = 1; k <= 60; ++k)
            {
                term *= -q / (long double)(k) / (long double)(k);
                harmonic += 1.0L / k;
                const long double add = -term * harmonic;
                sum += add;
                if (std::abs(add) < 1e-24L * (std::abs(sum) + 1.0L)) break;
            }
            return 2.0L / pi_l *
                   ((std::log(x / 2.0L) + gamma_l) * j0_series(x) + sum);
        }

        long double y1_series(long double x)
        {
            // (2/pi) ln(x/2) J1 - 2/(pi x)
            //   - (1/pi) sum_{k>=0} (-1)^k (H_k + H_{k+1} - 2 gamma)
            //            (x/2)^{2k+1} / (k! (k+1)!)
            const long double q = x * x / 4.0L;
            long double pow_term = x / 2.0L;            // (x/2)^{2k+1}/(k!(k+1)!)
            long double hk = 0.0L, hk1 = 1.0L;          // H_k, H_{k+1}
            long double sum = pow_term * (hk + hk1 - 2.0L * gamma_l);
            for (int k = 1; k <= 60; ++k)
            {
                pow_term *= -q / (long double)(k) / (long double)(k + 1);
                hk += 1.0L / k;
                hk1 += 1.0L / (k + 1);
                const long double add = pow_term * (hk + hk1 - 2.0L * gamma_l);
                sum += add;
                if (std::abs(add) < 1e-24L * (std::abs(sum) + 1.0L)) break;
            }
            return 2.0L / pi_l * std::log(x / 2.0L) * j1_series(x) -
                   2.0L / (pi_l * x) - sum / pi_l;
        }

        // H_nu^(1)(x) ~ sqrt(2/(pi x)) e^{i(x - nu pi/2 - pi/4)}
        //              sum_m i^m a_m(nu) / x^m,
        // a_m(nu) = prod_{j=1..m} (4 nu^2 - (2j-1)^2) / (m! 8^m),
        // truncated at the smallest term.
        std::complex<long double> hankel_asymptotic(long double x, int nu)
        {
            const long double nu4 = 4.0L * nu * nu;
            std::complex<long double> sum = 1.0L;
            std::complex<long double> ipow = {0.0L, 1.0L};  // i^m
            long double a = 1.0L, prev = 1.0L;
            for (int m = 1; m <= 64; ++m)
            {
                const long double odd = 2.0L * m - 1.0L;
                a *= (nu4 - odd * odd) / (8.0L * m);
                const long double mag = std::abs(a) / std::pow(x, (long double)m);
                if (mag > prev) break;  // asymptotic tail starts growing
                sum += ipow * (a / std::pow(x, (long double)m));
                ipow *= std::complex<long double>{0.0L, 1.0L};
                prev = mag;
                if (mag < 1e-20L) break;
            }
            const long double phase = x - nu * pi_l / 2.0L - pi_l / 4.0L;
            const std::complex<long double> rot = {std::cos(phase),
                                                   std::sin(phase)};
            return std::sqrt(2.0L / (pi_l * x)) * rot * sum;
        }

        void require_positive(double x, const char* who)
        {
            if (!(x > 0.0))
                throw std::domain_error(std::string(who) +
                                        ": argument must be positive");
        }
    }

    double bessel_j0(double x)
    {
        x = std::abs(x);
        if (x < series_cut) return double(j0_series(x));
        return double(hankel_asymptotic(x, 0).real());
    }

    double bessel_j1(double x)
    {
        const double s = x < 0.0 ? -1.0 : 1.0;
        x = std::abs(x);
        if (x < series_cut) return s * double(j1_series(x));
        return s * double(hankel_asymptotic(x, 1).real());
    }

    double bessel_y0(double x)
    {
        require_positive(x, "bessel_y0");
        if (x < series_cut) return double(y0_series(x));
        return double(hankel_asymptotic(x, 0).imag());
    }

    double bessel_y1(double x)
    {
        require_positive(x, "bessel_y1");
        if (x < series_cut) return double(y1_series(x));
        return double(hankel_asymptotic(x, 1).imag());
    }

    std::complex<double> hankel_h0_1(double x)
    {
        require_positive(x, "hankel_h0_1");
        if (x < series_cut) return {double(j0_series(x)), double(y0_series(x))};
        const auto h = hankel_asymptotic(x, 0);
        return {double(h.real()), double(h.imag())};
    }

    std::complex<double> hankel_h1_1(double x)
    {
        require_positive(x, "hankel_h1_1");
        if (x < series_cut) return {double(j1_series(x)), double(y1_series(x))};
        const auto h = hankel_asymptotic(x, 1);
        return {double(h.real()), double(h.imag())};
    }
}
