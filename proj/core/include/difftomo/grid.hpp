#ifndef DIFFTOMO_GRID_HPP
#define DIFFTOMO_GRID_HPP

#include <cstddef>

namespace dt
{
    // Square uniform grid on [-r_s, r_s)^2 with N nodes per side.
    // Node (i,j) sits at ((-N/2+i)h, (-N/2+j)h), h = 2 r_s / N, so the
    // origin is the node (N/2, N/2). Fields stored row-major with x2
    // (the j index) as the slow axis.
    struct Grid
    {
        double half_width = 0.0;
        int n = 0;

        double spacing() const { return 2.0 * half_width / n; }
        std::size_t size() const { return std::size_t(n) * n; }

        double coord(int i) const { return (i - n / 2) * spacing(); }

        // flat index of node (i, j); i along x1, j along x2
        std::size_t index(int i, int j) const { return std::size_t(j) * n + i; }

        bool operator==(const Grid&) const = default;
    };

    // Throws std::invalid_argument for odd or nonpositive N, nonpositive r_s.
    Grid make_grid(double r_s, int N);
}

#endif
