#pragma once

#include "vortlab/field.hpp"
#include "vortlab/spectral.hpp"

namespace vortlab {

/// A vector field whose relative L2 divergence is at most 1e-8, checked on construction.
class SolenoidalVectorField {
public:
    explicit SolenoidalVectorField(VectorField field);
    /// Divergence measured against max(||field||_2, scale), for outputs that may cancel to roundoff.
    SolenoidalVectorField(VectorField field, double scale);

    const VectorField& field() const { return field_; }
    operator const VectorField&() const { return field_; }
    const ScalarField& operator[](int i) const { return field_[i]; }
    int dim() const { return field_.dim(); }
    const Grid& grid() const { return field_.grid(); }

private:
    VectorField field_;
};

/// lp_norm(div u, 2) / lp_norm(u, 2), zero for a zero field.
double relative_divergence(const VectorField& u);

/// v = (-Lap)^{-1} (d2 w, -d1 w). Throws CirculationError for nonzero-mean w.
SolenoidalVectorField velocity_from_vorticity_2d(const ScalarField& w);
/// v = (-Lap)^{-1} curl w. Throws CirculationError if any component has nonzero mean.
SolenoidalVectorField velocity_from_vorticity_3d(const VectorField& w);
/// Divergence-free part of u (zero mode kept as is).
SolenoidalVectorField leray_project(const VectorField& u);

// Spectral kernels shared with the solvers. Inputs are not admissibility-checked.
VectorSpectrum velocity_spectrum_2d(const Spectrum& w);
VectorSpectrum velocity_spectrum_3d(const VectorSpectrum& w);
VectorSpectrum leray_project(const VectorSpectrum& u);

/// |mean| <= 1e-10 * max|w|.
bool has_zero_mean(const ScalarField& w);

} // namespace vortlab
