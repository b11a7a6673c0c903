#include "vortlab/grid.hpp"

#include "vortlab/errors.hpp"

#include <cmath>
#include <string>

namespace vortlab {

Grid::Grid(int dim, int n, double box_length) : dim_(dim), n_(n), box_length_(box_length)
{
    if (dim != 2 && dim != 3) {
        throw PreconditionError("dim must be 2 or 3");
    }
    if (n < 8 || n % 2 != 0) {
        throw PreconditionError("n must be even and ≥ 8");
    }
    if (!(box_length > 0.0) || !std::isfinite(box_length)) {
        throw PreconditionError("box_length must be positive and finite");
    }
}

double Grid::cell_volume() const
{
    return std::pow(h(), dim_);
}

double Grid::volume() const
{
    return std::pow(box_length_, dim_);
}

std::size_t Grid::size() const
{
    std::size_t s = 1;
    for (int d = 0; d < dim_; ++d) {
        s *= static_cast<std::size_t>(n_);
    }
    return s;
}

std::size_t Grid::spectral_size() const
{
    return size() / static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ / 2 + 1);
}

void require_same_grid(const Grid& a, const Grid& b, const char* where)
{
    if (!(a == b)) {
        throw PreconditionError(std::string(where) + ": fields live on different grids");
    }
}

} // namespace vortlab
