#pragma once

#include "vortlab/field.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

namespace vortlab {

/// Seeded band-limited random fields with |c_k| = (1 + |k|^2)^{-beta/2} and uniform
/// random phases for integer modes 0 < max_j |m_j| <= band. Coefficients are drawn in a
/// fixed mode order that does not depend on n, so one seed gives the same trigonometric
/// polynomial at every resolution with n > 3 * band.
struct RandomFieldSpec {
    std::uint64_t seed = 1;
    double beta = 2.0;
    int dim = 2;
    int n = 64;
    double box_length = 6.283185307179586;
    int count = 1;
    int band = 8;

    void validate() const;
};

/// Sample i of the family uses seed + i, so families with nested counts share samples.
std::vector<ScalarField> random_family_2d(const RandomFieldSpec& spec);
/// Leray-projected per-component random fields, mean removed.
std::vector<VectorField> random_family_3d(const RandomFieldSpec& spec);
ScalarField random_scalar_field(const Grid& grid, std::uint64_t seed, double beta, int band);
VectorField random_vector_field(const Grid& grid, std::uint64_t seed, double beta, int band);

struct Ratio {
    double numerator = 0.0;
    double denominator = 0.0;
    double value = 0.0;
};

/// (||v||_inf + ||grad v||_2) / ||grad w||_1 with v the 2D Biot-Savart velocity.
Ratio bb_ratio_2d(const ScalarField& w);
/// (||v||_3 + ||grad v||_{3/2}) / ||curl w||_1 with v the 3D Biot-Savart velocity.
Ratio bb_ratio_3d(const VectorField& w);
/// ||w||_2 / ||grad w||_1.
Ratio gn_ratio(const ScalarField& w);

enum class RatioKind { bb2d, bb3d, gn };

struct RatioSample {
    std::uint64_t seed = 0;
    int n = 0;
    double beta = 0.0;
    Ratio ratio;
};

struct RatioReport {
    std::vector<RatioSample> samples;
    /// Samples dropped for a vanishing denominator.
    int discarded = 0;
    /// Family maximum and mean per resolution.
    std::map<int, double> family_max;
    std::map<int, double> family_mean;
    /// Largest relative change of the family max between consecutive resolutions.
    double refinement_change = 0.0;
};

/// Runs the family described by `spec` at every resolution in n_list (spec.n ignored).
RatioReport ratio_family(RatioKind kind, const RandomFieldSpec& spec, const std::vector<int>& n_list);

/// CSV columns seed,n,beta,numerator,denominator,ratio.
void write_ratio_csv(std::ostream& out, const RatioReport& report);

} // namespace vortlab
