#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace vortlab {

/// Uniform isotropic periodic lattice in 2 or 3 dimensions.
///
/// Lattice point (i0, i1[, i2]) sits at x = (i0 h, i1 h[, i2 h]) with h = L / n.
/// Samples are stored row-major, last axis fastest.
class Grid {
public:
    Grid(int dim, int n, double box_length);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double box_length() const { return box_length_; }
    double h() const { return box_length_ / n_; }
    double cell_volume() const;
    double volume() const;
    std::size_t size() const;

    /// Physical coordinate of lattice index i along any axis.
    double coordinate(int i) const { return i * h(); }

    /// Signed integer wavenumber for spectral index i in [0, n).
    int signed_mode(int i) const { return i <= n_ / 2 ? i : i - n_; }

    /// Fundamental wavenumber 2 pi / L.
    double k0() const { return 2.0 * std::numbers::pi / box_length_; }

    /// Number of entries of the half spectrum (last axis truncated to n/2 + 1).
    std::size_t spectral_size() const;

    bool operator==(const Grid& other) const = default;

private:
    int dim_;
    int n_;
    double box_length_;
};

/// Throws PreconditionError if the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

} // namespace vortlab
