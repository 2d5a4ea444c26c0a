#ifndef DIFFTOMO_NDFT_HPP
#define DIFFTOMO_NDFT_HPP

#include <span>
#include <vector>

#include "difftomo/fdt.hpp"
#include "difftomo/field.hpp"

namespace dt
{
    // v(y) = (2pi)^{-1} (2 r_s)^2 / N^2  sum_{x in R_N} f(x) e^{-i x.y}.
    // The default path is direct summation with per-point phase recurrences;
    // the gridding path (oversampled FFT + Gaussian spreading) matches it to
    // 1e-6 relative and requires |y| h < pi.
    enum class NdftMethod { direct, gridding };

    std::vector<cplx> ndft_forward(const ComplexField& f,
                                   std::span<const point2> points,
                                   NdftMethod method = NdftMethod::direct);

    // Exact adjoint of ndft_forward with respect to the standard complex
    // inner products (the gridding path is the transpose of the gridding
    // forward, accurate to the same 1e-6).
    ComplexField ndft_adjoint(std::span<const cplx> values,
                              std::span<const point2> points, const Grid& grid,
                              NdftMethod method = NdftMethod::direct);

    struct CgneResult
    {
        RealField reconstruction;          // real part of the final iterate
        ComplexField iterate;              // complex iterate
        std::vector<double> residual_norms; // ||b - A f_j||, j = 0..iters
    };

    // Conjugate gradient on the normal equations A^H A f = A^H b from a zero
    // initial guess, run for exactly `iters` iterations. Throws on NaN.
    CgneResult cgne_invert(const CoverageSet& samples, const Grid& grid,
                           int iters, NdftMethod method = NdftMethod::direct);
}

#endif
