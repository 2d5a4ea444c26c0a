#include "difftomo/grid.hpp"

#include <stdexcept>
#include <string>

namespace dt
{
    Grid make_grid(double r_s, int N)
    {
        if (!(r_s > 0.0))
            throw std::invalid_argument("make_grid: half width must be positive");
        if (N < 2 || N % 2 != 0)
            throw std::invalid_argument("make_grid: N must be even and >= 2, got " +
                                        std::to_string(N));
        return Grid{r_s, N};
    }
}
