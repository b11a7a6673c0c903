#pragma once

#include "vortlab/field.hpp"
#include "vortlab/spectral.hpp"

#include <functional>
#include <vector>

namespace vortlab {

/// e^{t Lap} with unit viscosity: multiplier exp(-|k|^2 t). Requires t >= 0.
ScalarField heat_evolve(const ScalarField& f, double t);
VectorField heat_evolve(const VectorField& f, double t);
Spectrum heat_evolve(const Spectrum& f, double t);

/// Midpoint rule for int_0^t F(s) ds after the substitution s = t - tau^2,
/// which absorbs the (t - s)^{-1/2} behaviour of the derivative heat kernel:
/// int_0^t F(s) ds = int_0^{sqrt t} 2 tau F(t - tau^2) dtau.
struct DuhamelQuadrature {
    DuhamelQuadrature(double t, int m);

    double t;
    int m;
    /// Midpoints tau_i = (i + 1/2) sqrt(t) / m, ascending.
    std::vector<double> tau;
    /// s_i = t - tau_i^2, strictly inside (0, t).
    std::vector<double> nodes;
    /// 2 tau_i sqrt(t) / m.
    std::vector<double> weights;
};

/// Two-component spectra of g on a uniform time lattice, interpolated piecewise
/// linearly in time.
class SampledVectorSpectra {
public:
    SampledVectorSpectra(std::vector<double> times, std::vector<VectorSpectrum> samples);

    const Grid& grid() const { return samples_.front().front().grid(); }
    std::size_t components() const { return samples_.front().size(); }
    /// Writes the interpolated component `c` at time s into `out`.
    void interpolate(double s, std::size_t c, std::span<Complex> out) const;
    void interpolate(double s, VectorSpectrum& out) const;

private:
    std::vector<double> times_;
    std::vector<VectorSpectrum> samples_;
};

/// int_0^t div( K_{t-s} * g(s) ) ds evaluated per mode as
/// sum_i w_i exp(-|k|^2 tau_i^2) (i kd . g^(s_i)). Requires t > 0.
Spectrum duhamel_derivative_term(const SampledVectorSpectra& g, const DuhamelQuadrature& quad);
/// Same with g supplied as a function of time returning its spectra.
Spectrum duhamel_derivative_term(const std::function<VectorSpectrum(double)>& g,
                                 const DuhamelQuadrature& quad);
ScalarField duhamel_derivative_term(const std::function<VectorField(double)>& g, double t, int m);

} // namespace vortlab
