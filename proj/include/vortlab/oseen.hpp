#pragma once

#include "vortlab/field.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace vortlab {

/// Lamb-Oseen vortex of total circulation alpha centred at `center`, at time t > 0.
struct OseenParams {
    double alpha = 1.0;
    std::array<double, 2> center{0.0, 0.0};
    double t = 1.0;
};

/// sqrt(pi) / 2: ||grad w||_1 sqrt(t) / alpha on the plane.
double oseen_gradient_l1_coefficient();
/// max_u (1 - e^{-u}) / sqrt(u) / (4 pi): ||v||_inf sqrt(t) / alpha on the plane.
double oseen_velocity_peak_coefficient();

/// alpha / (4 pi t) exp(-r^2 / 4t), r the minimum-image distance to the centre.
/// Requires sqrt(4t) <= L/16.
ScalarField oseen_vorticity(const OseenParams& p, const Grid& grid);
/// alpha / (2 pi) (-x2, x1) / r^2 (1 - exp(-r^2 / 4t)); zero at the centre.
VectorField oseen_velocity(const OseenParams& p, const Grid& grid);

/// +alpha vortex at (L/2 - d/2, L/2) and -alpha vortex at (L/2 + d/2, L/2).
/// Requires 4 sqrt(4t) <= d <= L/2.
ScalarField oseen_dipole(double alpha, double separation, const Grid& grid, double t);

struct ScalingRow {
    double t = 0.0;
    double l1 = 0.0;
    double grad_l1 = 0.0;
    double w11 = 0.0;
    double linf_v = 0.0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    double slope_w11 = 0.0;
    double slope_linf_v = 0.0;
    double slope_grad_l1 = 0.0;
};

/// Grid norms of a single Oseen vortex (alpha, box centre) at each t, with log-log slopes.
ScalingReport sharpness_scaling_experiment(const Grid& grid, const std::vector<double>& t_list,
                                           double alpha = 1.0);

/// Largest t allowed by the width precondition on this grid.
double oseen_max_time(const Grid& grid);

/// CSV columns t,L1,grad_L1,W11,Linf_v followed by a "# slope_..." footer.
void write_scaling_csv(std::ostream& out, const ScalingReport& report);

struct BoundedVelocityReport {
    std::vector<double> times;
    std::vector<double> linf_v;
    double sup = 0.0;
    double inf = 0.0;
    /// sup / inf - 1 over t in [t0/100, t0].
    double variation = 0.0;
};

/// Evolves w0 with the reference stepper on 101 samples over [0, t0] and reports
/// ||v(t)||_inf for t >= t0/100.
BoundedVelocityReport bounded_velocity_experiment(const ScalarField& w0, double t0);

} // namespace vortlab
