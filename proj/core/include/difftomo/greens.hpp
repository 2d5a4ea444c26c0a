#ifndef DIFFTOMO_GREENS_HPP
#define DIFFTOMO_GREENS_HPP

#include <span>
#include <vector>

#include "difftomo/field.hpp"

namespace dt
{
    // Outgoing 2D Helmholtz Green's function (i/4) H0^(1)(k0 |x|).
    // Throws for x = 0.
    cplx greens_2d(point2 x, double k0);

    struct BornOptions
    {
        // Replace the singular sample by the analytic mean of G over a disk
        // of area h^2 whenever an evaluation point falls within h/2 of a
        // source node. Required when evaluating on the support grid itself.
        bool self_cell_correction = false;
    };

    // Quadrature Born field u(x) = h^2 sum_y G(x-y) f(y) e^{i k0 y2} over
    // the nodes of f's grid. Without self-cell correction, throws when an
    // evaluation point comes within h/2 of a node where f != 0.
    std::vector<cplx> born_convolution(const RealField& f, double k0,
                                       std::span<const point2> eval_points,
                                       const BornOptions& opts = {});

    // Analytic cell-average of G near the singularity (small-argument
    // expansion of H0^(1), disk of area h^2).
    cplx greens_cell_average(double k0, double h);

    // Higher-order Born recursion on the support grid: order 1 is
    // born_convolution at the grid nodes, order q feeds e^{i k0 y2} + u
    // back into the convolution q-1 times. Throws for order < 1.
    ComplexField born_iterate(const RealField& f, double k0, int order);
}

#endif
