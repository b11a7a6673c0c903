#pragma once

#include "vortlab/field.hpp"
#include "vortlab/spectral.hpp"
#include "vortlab/trajectory.hpp"

#include <limits>
#include <map>
#include <span>
#include <string>

namespace vortlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (sum |f|^p h^dim)^(1/p), or max |f| for p = inf. Requires p >= 1.
double lp_norm(const ScalarField& f, double p);
/// Uses the pointwise Euclidean magnitude of the components.
double lp_norm(const VectorField& f, double p);
/// Pointwise Euclidean (Frobenius) magnitude over an arbitrary component list.
double lp_norm(std::span<const ScalarField> components, double p);

/// ||w||_1 + || |grad w| ||_1 for a 2D scalar field.
double w11_norm(const ScalarField& w);

/// Homogeneous Sobolev norm (sum_k |k|^{2s} |c_k|^2 L^dim)^{1/2}; hs_norm(f, 0) is the
/// L2 norm. The zero mode is dropped for s != 0, and s < 0 needs a vanishing mean.
double hs_norm(const ScalarField& f, double s);
double hs_norm(const VectorField& f, double s);
/// Spectral-input variant; the mean check compares |c_0| against the L2 size of the spectrum.
double hs_norm(std::span<const Spectrum> components, double s);

/// L^q in time (composite trapezoid) of the L^r norm in space; sup over samples for q = inf.
double mixed_norm(const ScalarTrajectory& traj, double q, double r);
double mixed_norm(const VectorTrajectory& traj, double q, double r);
/// Same rule applied to precomputed per-sample spatial norms on a uniform lattice.
double mixed_norm_from_samples(std::span<const double> times, std::span<const double> spatial_norms,
                               double q);

/// Named nonnegative norms of one field.
class NormReport {
public:
    void set(const std::string& label, double value);
    double at(const std::string& label) const;
    bool contains(const std::string& label) const { return values_.contains(label); }
    const std::map<std::string, double>& values() const { return values_; }

private:
    std::map<std::string, double> values_;
};

} // namespace vortlab
