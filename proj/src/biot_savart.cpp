#include "vortlab/biot_savart.hpp"

#include "vortlab/errors.hpp"
#include "vortlab/norms.hpp"

#include <cmath>
#include <string>

namespace vortlab {

namespace {
constexpr double kSolenoidalTolerance = 1e-8;
const Complex kI(0.0, 1.0);
} // namespace

double relative_divergence(const VectorField& u)
{
    const double size = lp_norm(u, 2.0);
    if (size == 0.0) {
        return 0.0;
    }
    return lp_norm(divergence(u), 2.0) / size;
}

SolenoidalVectorField::SolenoidalVectorField(VectorField field) : SolenoidalVectorField(std::move(field), 0.0) {}

SolenoidalVectorField::SolenoidalVectorField(VectorField field, double scale) : field_(std::move(field))
{
    const double size = std::max(lp_norm(field_, 2.0), scale);
    const double rel = size == 0.0 ? 0.0 : lp_norm(divergence(field_), 2.0) / size;
    if (!(rel <= kSolenoidalTolerance)) {
        throw PreconditionError("field is not solenoidal (relative divergence " +
                                std::to_string(rel) + ")");
    }
}

bool has_zero_mean(const ScalarField& w)
{
    return std::abs(w.mean()) <= 1e-10 * w.max_abs();
}

VectorSpectrum velocity_spectrum_2d(const Spectrum& w)
{
    const Grid& g = w.grid();
    const auto table = mode_table(g);
    VectorSpectrum v(2, Spectrum(g));
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double kd2 = table->kd2[i];
        if (kd2 == 0.0) {
            continue;
        }
        const Complex c = w[i] / kd2;
        v[0][i] = kI * table->kd[i][1] * c;
        v[1][i] = -kI * table->kd[i][0] * c;
    }
    return v;
}

VectorSpectrum velocity_spectrum_3d(const VectorSpectrum& w)
{
    VectorSpectrum v = curl3d(w);
    const auto table = mode_table(w[0].grid());
    for (auto& comp : v) {
        for (std::size_t i = 0; i < comp.size(); ++i) {
            const double kd2 = table->kd2[i];
            comp[i] = kd2 == 0.0 ? Complex(0.0, 0.0) : comp[i] / kd2;
        }
    }
    return v;
}

VectorSpectrum leray_project(const VectorSpectrum& u)
{
    const Grid& g = u[0].grid();
    const auto table = mode_table(g);
    VectorSpectrum out = u;
    const std::size_t dim = u.size();
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        const double kd2 = table->kd2[i];
        if (kd2 == 0.0) {
            continue;
        }
        Complex dot(0.0, 0.0);
        for (std::size_t a = 0; a < dim; ++a) {
            dot += table->kd[i][a] * u[a][i];
        }
        for (std::size_t a = 0; a < dim; ++a) {
            out[a][i] -= table->kd[i][a] * dot / kd2;
        }
    }
    return out;
}

SolenoidalVectorField velocity_from_vorticity_2d(const ScalarField& w)
{
    if (w.grid().dim() != 2) {
        throw PreconditionError("velocity_from_vorticity_2d needs a 2D field");
    }
    if (!has_zero_mean(w)) {
        throw CirculationError("vorticity mean " + std::to_string(w.mean()) + " is not zero");
    }
    return SolenoidalVectorField(inverse_transform(velocity_spectrum_2d(transform(w))));
}

SolenoidalVectorField velocity_from_vorticity_3d(const VectorField& w)
{
    if (w.grid().dim() != 3 || w.dim() != 3) {
        throw PreconditionError("velocity_from_vorticity_3d needs a 3D vector field");
    }
    const double scale = w.max_abs();
    for (const auto& c : w.components()) {
        if (std::abs(c.mean()) > 1e-10 * scale) {
            throw CirculationError("vorticity component mean " + std::to_string(c.mean()) +
                                   " is not zero");
        }
    }
    return SolenoidalVectorField(inverse_transform(velocity_spectrum_3d(transform(w))));
}

SolenoidalVectorField leray_project(const VectorField& u)
{
    return SolenoidalVectorField(inverse_transform(leray_project(transform(u))), lp_norm(u, 2.0));
}

} // namespace vortlab
