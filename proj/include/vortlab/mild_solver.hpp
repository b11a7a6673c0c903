#pragma once

#include "vortlab/errors.hpp"
#include "vortlab/field.hpp"
#include "vortlab/norms.hpp"
#include "vortlab/spectral.hpp"
#include "vortlab/trajectory.hpp"

#include <iosfwd>
#include <vector>

namespace vortlab {

/// The Picard iteration stopped contracting; the horizon is too long for the data size.
class ContractionError : public DivergenceError {
public:
    explicit ContractionError(const std::string& what) : DivergenceError(what) {}
};

struct MildSolveConfig {
    /// Horizon; the time lattice is nt uniform samples on [0, t0] including both ends.
    double t0 = 0.0;
    int nt = 32;
    /// Duhamel quadrature nodes per output time.
    int quad_m = 64;
    /// Stop once the sup-in-time W^{1,1} successive difference falls below tol (absolute).
    double tol = 1e-10;
    int max_iter = 100;
    /// Drops v*w from the Duhamel term (linear heat flow).
    bool nonlinear = true;

    void validate() const;
};

struct PicardIteration {
    double iterate_sup_w11 = 0.0;
    double difference_sup_w11 = 0.0;
    /// difference / previous difference; 0 for the first iteration.
    double ratio = 0.0;
};

struct PicardTrace {
    double a0 = 0.0;
    std::vector<PicardIteration> iterations;
    bool converged = false;
    /// sup_t W^{1,1}(w(t)) <= 8 A0.
    bool within_ball = false;
    /// Per stored time: L1, W11, Linf_v, L2_gradv of the returned solution.
    std::vector<NormReport> per_time;
};

struct PicardResult {
    ScalarTrajectory solution;
    PicardTrace trace;
};

/// T w(t) = e^{t Lap} w0 - int_0^t div K_{t-s} * [v w](s) ds, v from the 2D Biot-Savart law,
/// evaluated on cfg's time lattice. Throws CirculationError for nonzero-mean w0 and
/// DivergenceError on non-finite values.
ScalarTrajectory apply_T(const ScalarTrajectory& w, const ScalarField& w0, const MildSolveConfig& cfg);

/// Fixed-point iteration of apply_T started from the heat flow of w0.
PicardResult picard_solve(const ScalarField& w0, const MildSolveConfig& cfg);

/// sup_t W^{1,1}(T^2 h - T h) / sup_t W^{1,1}(T h - h), h the heat flow of w0.
double first_contraction_ratio(const ScalarField& w0, const MildSolveConfig& cfg);

struct HorizonChoice {
    double t0 = 0.0;
    /// t0 = c_lab / A0^2 unless capped by t_max.
    double c_lab = 0.0;
    double first_ratio = 0.0;
    int halvings = 0;
};

/// Halves c_lab from c_initial until the first contraction ratio is <= 1/2; t0 never
/// exceeds t_max. Ignores cfg.t0.
HorizonChoice select_horizon(const ScalarField& w0, MildSolveConfig cfg, double c_initial = 1.0,
                             double t_max = 1.0);

struct StepperOptions {
    /// dt <= cfl * h / max|v|.
    double cfl = 0.25;
    /// Minimum steps per output interval.
    int min_substeps = 4;
    /// Upper bound on steps per output interval before reporting instability.
    int max_substeps = 1 << 16;
};

struct StepperResult {
    ScalarTrajectory solution;
    long total_steps = 0;
    /// Largest per-step relative increase of ||w||_2^2 (0 if never increasing).
    double max_enstrophy_increase = 0.0;
    double max_mean_drift = 0.0;
};

/// Integrating-factor RK4 for w_t - Lap w = -div(v w) with 2/3-rule dealiasing of v w,
/// sampled on nt uniform times over [0, t0].
StepperResult reference_stepper(const ScalarField& w0, double t0, int nt,
                                const StepperOptions& options = {});

/// Per-time norm bundle: L1, W11, Linf_v, L2_gradv.
NormReport vorticity_norms(const ScalarField& w);
double sup_w11(const ScalarTrajectory& traj);
/// sup_t W^{1,1}(a(t) - b(t)) over a shared lattice.
double sup_w11_difference(const ScalarTrajectory& a, const ScalarTrajectory& b);

struct DependenceRow {
    double input_w11 = 0.0;
    double output_sup_w11 = 0.0;
    double ratio = 0.0;
};

struct DependenceReport {
    std::vector<DependenceRow> rows;
    /// Least-squares slope of log(output) against log(input) over rows with input > 0;
    /// NaN with fewer than two such rows.
    double slope = 0.0;
};

DependenceReport continuous_dependence_experiment(const ScalarField& w0,
                                                  const std::vector<ScalarField>& perturbations,
                                                  const MildSolveConfig& cfg);

/// CSV with header "t,L1,W11,Linf_v,L2_gradv".
void write_trace_csv(std::ostream& out, const ScalarTrajectory& traj, const PicardTrace& trace);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

} // namespace vortlab
