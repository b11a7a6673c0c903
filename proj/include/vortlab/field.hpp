#pragma once

#include "vortlab/grid.hpp"

#include <functional>
#include <span>
#include <vector>

namespace vortlab {

/// Real samples of a periodic function on a Grid. Value type; immutable by convention
/// once handed to an operation.
class ScalarField {
public:
    explicit ScalarField(Grid grid);
    ScalarField(Grid grid, std::vector<double> samples);

    /// Samples f(x) at every lattice point.
    static ScalarField from_function(const Grid& grid,
                                     const std::function<double(std::span<const double>)>& f);

    const Grid& grid() const { return grid_; }
    std::span<const double> samples() const { return samples_; }
    std::span<double> samples() { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double operator[](std::size_t i) const { return samples_[i]; }
    double& operator[](std::size_t i) { return samples_[i]; }

    double mean() const;
    double max_abs() const;
    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double c);

private:
    Grid grid_;
    std::vector<double> samples_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// `dim` scalar components on one grid.
class VectorField {
public:
    explicit VectorField(Grid grid);
    explicit VectorField(std::vector<ScalarField> components);

    const Grid& grid() const { return grid_; }
    int dim() const { return static_cast<int>(components_.size()); }
    const ScalarField& operator[](int i) const { return components_[i]; }
    ScalarField& operator[](int i) { return components_[i]; }
    std::span<const ScalarField> components() const { return components_; }

    double max_abs() const;
    bool all_finite() const;

    VectorField& operator+=(const VectorField& other);
    VectorField& operator-=(const VectorField& other);
    VectorField& operator*=(double c);

private:
    Grid grid_;
    std::vector<ScalarField> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double c, VectorField a);

/// Components of a gradient tensor, ordered (i, j) -> d_j v_i at index i * dim + j.
using TensorField = std::vector<ScalarField>;

} // namespace vortlab
