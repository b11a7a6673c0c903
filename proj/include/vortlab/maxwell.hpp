#pragma once

#include "vortlab/field.hpp"
#include "vortlab/spectral.hpp"
#include "vortlab/trajectory.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace vortlab {

/// Exponents (q, r, qt, s, k); infinite values use +infinity.
struct StrichartzExponents {
    double q = 4.0;
    double r = 4.0;
    double qt = 4.0;
    double s = 0.5;
    double k = 0.75;
};

struct AdmissibilityVerdict {
    bool admissible = false;
    std::vector<std::string> violations;
};

/// Checks 2 <= q <= inf, 2 < qt <= inf, 2 <= r < inf, 1/q + 1/r <= 1/2 and
/// 1/q + 3/r = 3/2 - s = 1/qt' + 1 - k with 1/qt + 1/qt' = 1. Equalities hold to 1e-12.
AdmissibilityVerdict strichartz_admissible(const StrichartzExponents& e);

/// j(x, t) = sum_m theta_m(t) J_m(x). A sampled current is the special case of
/// piecewise-linear hat functions theta_m.
class CurrentDensity {
public:
    struct Term {
        VectorField spatial;
        std::function<double(double)> temporal;
    };

    CurrentDensity() = default;
    explicit CurrentDensity(std::vector<Term> terms);
    /// Piecewise-linear interpolation of samples on a uniform lattice (constant outside).
    static CurrentDensity sampled(std::vector<double> times, std::vector<VectorField> samples);
    static CurrentDensity separable(VectorField spatial, std::function<double(double)> temporal);

    bool empty() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    VectorField at(double t, const Grid& grid) const;

private:
    std::vector<Term> terms_;
};

struct WaveSolution {
    VectorTrajectory b;
    VectorTrajectory db;
};

struct WaveOptions {
    /// Trapezoid sub-intervals per stored interval for the source integral.
    int substeps = 16;
};

/// Solves B_tt - Lap B = curl j on nt uniform samples over [0, T] with the exact per-mode
/// propagator; the source integral uses the composite trapezoid rule.
WaveSolution solve_wave(const VectorField& b0, const VectorField& b1, const CurrentDensity& j, double T,
                        int nt, const WaveOptions& options = {});

/// ||dB||_2^2 + ||grad B||_2^2 of the state at one time (spectral).
double wave_energy(const VectorField& b, const VectorField& db);

struct StrichartzFixture {
    VectorField b0;
    VectorField b1;
    CurrentDensity j;
    std::uint64_t seed = 0;
};

struct StrichartzSample {
    std::uint64_t seed = 0;
    int n = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct StrichartzTerms {
    double mixed = 0.0;
    double sup_hs = 0.0;
    double sup_hs_dt = 0.0;
    double data_hs = 0.0;
    double data_hs_dt = 0.0;
    double source = 0.0;
    double lhs() const { return mixed + sup_hs + sup_hs_dt; }
    double rhs() const { return data_hs + data_hs_dt + source; }
};

/// Both sides of the Strichartz estimate for one fixture on [0, T].
StrichartzTerms strichartz_terms(const StrichartzExponents& e, const StrichartzFixture& fixture, double T,
                                 int nt, const WaveOptions& options = {});

/// Seeded mean-zero fixture: solenoidal band-limited B0, B1 and j(x,t) = cos(Omega t + phi) J(x).
StrichartzFixture random_strichartz_fixture(const Grid& grid, std::uint64_t seed, double beta, int band);

struct StrichartzReport {
    StrichartzExponents exponents;
    double T = 0.0;
    std::vector<StrichartzSample> samples;
    int discarded = 0;
    std::vector<std::pair<int, double>> family_max;
    double refinement_change = 0.0;
};

/// Runs `count` seeded fixtures (seed + i) at every resolution of n_list on [0, T].
/// Throws PreconditionError for inadmissible exponents.
StrichartzReport strichartz_ratio_experiment(const StrichartzExponents& e, std::uint64_t seed, int count,
                                             double beta, int band, double box_length,
                                             const std::vector<int>& n_list, double T, int nt,
                                             const WaveOptions& options = {});

/// CSV columns q,r,qt,s,k,seed,n,LHS,RHS,ratio.
void write_strichartz_csv(std::ostream& out, const StrichartzReport& report);

} // namespace vortlab
