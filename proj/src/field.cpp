#include "vortlab/field.hpp"

#include "vortlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vortlab {

ScalarField::ScalarField(Grid grid) : grid_(grid), samples_(grid.size(), 0.0) {}

ScalarField::ScalarField(Grid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples))
{
    if (samples_.size() != grid_.size()) {
        throw PreconditionError("sample count does not match grid");
    }
}

ScalarField ScalarField::from_function(const Grid& grid,
                                       const std::function<double(std::span<const double>)>& f)
{
    ScalarField out(grid);
    const int n = grid.n();
    std::array<double, 3> x{};
    std::size_t idx = 0;
    if (grid.dim() == 2) {
        for (int i = 0; i < n; ++i) {
            x[0] = grid.coordinate(i);
            for (int j = 0; j < n; ++j) {
                x[1] = grid.coordinate(j);
                out.samples_[idx++] = f(std::span<const double>(x.data(), 2));
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            x[0] = grid.coordinate(i);
            for (int j = 0; j < n; ++j) {
                x[1] = grid.coordinate(j);
                for (int l = 0; l < n; ++l) {
                    x[2] = grid.coordinate(l);
                    out.samples_[idx++] = f(std::span<const double>(x.data(), 3));
                }
            }
        }
    }
    return out;
}

double ScalarField::mean() const
{
    return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(size());
}

double ScalarField::max_abs() const
{
    double m = 0.0;
    for (double v : samples_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool ScalarField::all_finite() const
{
    return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other)
{
    require_same_grid(grid_, other.grid_, "ScalarField +=");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        samples_[i] += other.samples_[i];
    }
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other)
{
    require_same_grid(grid_, other.grid_, "ScalarField -=");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        samples_[i] -= other.samples_[i];
    }
    return *this;
}

ScalarField& ScalarField::operator*=(double c)
{
    for (double& v : samples_) {
        v *= c;
    }
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b)
{
    a += b;
    return a;
}

ScalarField operator-(ScalarField a, const ScalarField& b)
{
    a -= b;
    return a;
}

ScalarField operator*(double c, ScalarField a)
{
    a *= c;
    return a;
}

ScalarField hadamard(const ScalarField& a, const ScalarField& b)
{
    require_same_grid(a.grid(), b.grid(), "hadamard");
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] * b[i];
    }
    return out;
}

VectorField::VectorField(Grid grid) : grid_(grid)
{
    components_.assign(static_cast<std::size_t>(grid.dim()), ScalarField(grid));
}

VectorField::VectorField(std::vector<ScalarField> components)
    : grid_(components.empty() ? throw PreconditionError("vector field needs components")
                               : components.front().grid()),
      components_(std::move(components))
{
    for (const auto& c : components_) {
        require_same_grid(grid_, c.grid(), "VectorField");
    }
}

double VectorField::max_abs() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        double s = 0.0;
        for (const auto& c : components_) {
            s += c[i] * c[i];
        }
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

bool VectorField::all_finite() const
{
    return std::all_of(components_.begin(), components_.end(),
                       [](const ScalarField& c) { return c.all_finite(); });
}

VectorField& VectorField::operator+=(const VectorField& other)
{
    for (int i = 0; i < dim(); ++i) {
        components_[i] += other.components_[i];
    }
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& other)
{
    for (int i = 0; i < dim(); ++i) {
        components_[i] -= other.components_[i];
    }
    return *this;
}

VectorField& VectorField::operator*=(double c)
{
    for (auto& comp : components_) {
        comp *= c;
    }
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b)
{
    a += b;
    return a;
}

VectorField operator-(VectorField a, const VectorField& b)
{
    a -= b;
    return a;
}

VectorField operator*(double c, VectorField a)
{
    a *= c;
    return a;
}

} // namespace vortlab
