#pragma once

#include "vortlab/field.hpp"

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace vortlab {

using Complex = std::complex<double>;

/// Fourier-series coefficients of a real field on the half spectrum (last axis
/// keeps indices 0..n/2). Normalization: f(x) = sum_k c_k exp(i k.x), so c_0 is
/// the mean of f and a unit cosine mode has coefficient 1/2 at +k and -k.
class Spectrum {
public:
    explicit Spectrum(Grid grid);
    Spectrum(Grid grid, std::vector<Complex> coeffs);

    const Grid& grid() const { return grid_; }
    std::span<const Complex> coeffs() const { return coeffs_; }
    std::span<Complex> coeffs() { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }
    Complex operator[](std::size_t i) const { return coeffs_[i]; }
    Complex& operator[](std::size_t i) { return coeffs_[i]; }

    double mean() const { return coeffs_[0].real(); }

    Spectrum& operator+=(const Spectrum& other);
    Spectrum& operator-=(const Spectrum& other);
    Spectrum& operator*=(double c);
    /// this += c * other
    void axpy(double c, const Spectrum& other);

private:
    Grid grid_;
    std::vector<Complex> coeffs_;
};

using VectorSpectrum = std::vector<Spectrum>;

/// Per-grid wavenumber tables for the half spectrum, shared and immutable.
struct ModeTable {
    explicit ModeTable(const Grid& grid);

    Grid grid;
    /// Signed integer mode per axis.
    std::vector<std::array<int, 3>> mode;
    /// Physical wavevector 2 pi m / L.
    std::vector<std::array<double, 3>> k;
    /// Wavevector used for differentiation: Nyquist components set to zero.
    std::vector<std::array<double, 3>> kd;
    std::vector<double> k2;
    std::vector<double> kd2;
    /// Hermitian multiplicity of the stored coefficient (1 or 2).
    std::vector<double> weight;
    /// 1 where every |m_j| < n/3 (2/3-rule retained band).
    std::vector<unsigned char> dealias;
};

/// Cached mode table for a grid (thread-safe).
std::shared_ptr<const ModeTable> mode_table(const Grid& grid);

Spectrum transform(const ScalarField& f);
ScalarField inverse_transform(const Spectrum& s);
VectorSpectrum transform(const VectorField& f);
VectorField inverse_transform(const VectorSpectrum& s);

/// Zeroes every mode outside the 2/3-rule band.
void dealias(Spectrum& s);

// Spectral calculus. Derivatives multiply by i kd (Nyquist derivative is zero).
Spectrum derivative(const Spectrum& f, int axis);
ScalarField derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
/// d1 u2 - d2 u1.
ScalarField curl2d(const VectorField& u);
VectorField curl3d(const VectorField& u);
VectorSpectrum curl3d(const VectorSpectrum& u);
/// Full gradient tensor, entry (i, j) = d_j u_i at index i * dim + j.
TensorField gradient_tensor(const VectorField& u);

} // namespace vortlab
