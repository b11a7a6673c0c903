#include "vortlab/spectral.hpp"

#include "vortlab/errors.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace vortlab {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per (dim, n) with FFTW_ESTIMATE | FFTW_UNALIGNED so the
// chosen algorithm does not depend on buffer alignment, which keeps results
// bitwise reproducible.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}

const PlanPair& plans_for(int dim, int n)
{
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find({dim, n});
    if (it != cache.end()) {
        return it->second;
    }
    Grid g(dim, n, 1.0);
    std::vector<double> real(g.size());
    std::vector<Complex> cplx(g.spectral_size());
    auto* out = reinterpret_cast<fftw_complex*>(cplx.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    if (dim == 2) {
        p.forward = fftw_plan_dft_r2c_2d(n, n, real.data(), out, flags);
        p.backward = fftw_plan_dft_c2r_2d(n, n, out, real.data(), flags);
    } else {
        p.forward = fftw_plan_dft_r2c_3d(n, n, n, real.data(), out, flags);
        p.backward = fftw_plan_dft_c2r_3d(n, n, n, out, real.data(), flags);
    }
    return cache.emplace(std::make_pair(dim, n), p).first->second;
}

} // namespace

Spectrum::Spectrum(Grid grid) : grid_(grid), coeffs_(grid.spectral_size(), Complex(0.0, 0.0)) {}

Spectrum::Spectrum(Grid grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs))
{
    if (coeffs_.size() != grid_.spectral_size()) {
        throw PreconditionError("coefficient count does not match grid");
    }
}

Spectrum& Spectrum::operator+=(const Spectrum& other)
{
    require_same_grid(grid_, other.grid_, "Spectrum +=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += other.coeffs_[i];
    }
    return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& other)
{
    require_same_grid(grid_, other.grid_, "Spectrum -=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= other.coeffs_[i];
    }
    return *this;
}

Spectrum& Spectrum::operator*=(double c)
{
    for (auto& v : coeffs_) {
        v *= c;
    }
    return *this;
}

void Spectrum::axpy(double c, const Spectrum& other)
{
    require_same_grid(grid_, other.grid_, "Spectrum axpy");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += c * other.coeffs_[i];
    }
}

ModeTable::ModeTable(const Grid& g) : grid(g)
{
    const std::size_t size = g.spectral_size();
    mode.resize(size);
    k.resize(size);
    kd.resize(size);
    k2.resize(size);
    kd2.resize(size);
    weight.resize(size);
    dealias.resize(size);

    const int n = g.n();
    const int half = n / 2;
    const int last = half + 1;
    const double k0 = g.k0();
    auto fill = [&](std::size_t idx, std::array<int, 3> idx_axes) {
        std::array<int, 3> m{0, 0, 0};
        std::array<double, 3> kk{0, 0, 0};
        std::array<double, 3> kdd{0, 0, 0};
        bool keep = true;
        for (int a = 0; a < g.dim(); ++a) {
            m[a] = g.signed_mode(idx_axes[a]);
            kk[a] = k0 * m[a];
            kdd[a] = idx_axes[a] == half ? 0.0 : kk[a];
            keep = keep && 3 * std::abs(m[a]) < n;
        }
        mode[idx] = m;
        k[idx] = kk;
        kd[idx] = kdd;
        k2[idx] = kk[0] * kk[0] + kk[1] * kk[1] + kk[2] * kk[2];
        kd2[idx] = kdd[0] * kdd[0] + kdd[1] * kdd[1] + kdd[2] * kdd[2];
        const int lastIdx = idx_axes[g.dim() - 1];
        weight[idx] = (lastIdx == 0 || lastIdx == half) ? 1.0 : 2.0;
        dealias[idx] = keep ? 1 : 0;
    };
    std::size_t idx = 0;
    if (g.dim() == 2) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < last; ++j) {
                fill(idx++, {i, j, 0});
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int l = 0; l < last; ++l) {
                    fill(idx++, {i, j, l});
                }
            }
        }
    }
}

std::shared_ptr<const ModeTable> mode_table(const Grid& grid)
{
    static std::mutex m;
    static std::map<std::tuple<int, int, double>, std::shared_ptr<const ModeTable>> cache;
    std::lock_guard lock(m);
    auto key = std::make_tuple(grid.dim(), grid.n(), grid.box_length());
    auto it = cache.find(key);
    if (it != cache.end()) {
        return it->second;
    }
    auto table = std::make_shared<const ModeTable>(grid);
    cache.emplace(key, table);
    return table;
}

Spectrum transform(const ScalarField& f)
{
    const Grid& g = f.grid();
    const PlanPair& p = plans_for(g.dim(), g.n());
    Spectrum out(g);
    // r2c leaves its input untouched.
    fftw_execute_dft_r2c(p.forward, const_cast<double*>(f.samples().data()),
                         reinterpret_cast<fftw_complex*>(out.coeffs().data()));
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& c : out.coeffs()) {
        c *= scale;
    }
    return out;
}

ScalarField inverse_transform(const Spectrum& s)
{
    const Grid& g = s.grid();
    const PlanPair& p = plans_for(g.dim(), g.n());
    // c2r overwrites its input.
    std::vector<Complex> scratch(s.coeffs().begin(), s.coeffs().end());
    ScalarField out(g);
    fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(scratch.data()),
                         out.samples().data());
    return out;
}

VectorSpectrum transform(const VectorField& f)
{
    VectorSpectrum out;
    out.reserve(static_cast<std::size_t>(f.dim()));
    for (const auto& c : f.components()) {
        out.push_back(transform(c));
    }
    return out;
}

VectorField inverse_transform(const VectorSpectrum& s)
{
    std::vector<ScalarField> comps;
    comps.reserve(s.size());
    for (const auto& c : s) {
        comps.push_back(inverse_transform(c));
    }
    return VectorField(std::move(comps));
}

void dealias(Spectrum& s)
{
    const auto table = mode_table(s.grid());
    auto c = s.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!table->dealias[i]) {
            c[i] = 0.0;
        }
    }
}

Spectrum derivative(const Spectrum& f, int axis)
{
    if (axis < 0 || axis >= f.grid().dim()) {
        throw PreconditionError("derivative axis out of range");
    }
    const auto table = mode_table(f.grid());
    Spectrum out(f.grid());
    auto src = f.coeffs();
    auto dst = out.coeffs();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = Complex(0.0, table->kd[i][axis]) * src[i];
    }
    return out;
}

ScalarField derivative(const ScalarField& f, int axis)
{
    return inverse_transform(derivative(transform(f), axis));
}

VectorField gradient(const ScalarField& f)
{
    const Spectrum s = transform(f);
    std::vector<ScalarField> comps;
    for (int a = 0; a < f.grid().dim(); ++a) {
        comps.push_back(inverse_transform(derivative(s, a)));
    }
    return VectorField(std::move(comps));
}

ScalarField divergence(const VectorField& u)
{
    const auto table = mode_table(u.grid());
    Spectrum acc(u.grid());
    for (int a = 0; a < u.dim(); ++a) {
        const Spectrum s = transform(u[a]);
        for (std::size_t i = 0; i < s.size(); ++i) {
            acc[i] += Complex(0.0, table->kd[i][a]) * s[i];
        }
    }
    return inverse_transform(acc);
}

ScalarField curl2d(const VectorField& u)
{
    if (u.dim() != 2) {
        throw PreconditionError("curl2d needs a 2D vector field");
    }
    const auto table = mode_table(u.grid());
    const Spectrum s0 = transform(u[0]);
    const Spectrum s1 = transform(u[1]);
    Spectrum out(u.grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = Complex(0.0, table->kd[i][0]) * s1[i] - Complex(0.0, table->kd[i][1]) * s0[i];
    }
    return inverse_transform(out);
}

VectorSpectrum curl3d(const VectorSpectrum& u)
{
    if (u.size() != 3 || u[0].grid().dim() != 3) {
        throw PreconditionError("curl3d needs a 3D vector field");
    }
    const Grid& g = u[0].grid();
    const auto table = mode_table(g);
    VectorSpectrum out(3, Spectrum(g));
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        const auto& kd = table->kd[i];
        const Complex a = u[0][i], b = u[1][i], c = u[2][i];
        out[0][i] = Complex(0.0, 1.0) * (kd[1] * c - kd[2] * b);
        out[1][i] = Complex(0.0, 1.0) * (kd[2] * a - kd[0] * c);
        out[2][i] = Complex(0.0, 1.0) * (kd[0] * b - kd[1] * a);
    }
    return out;
}

VectorField curl3d(const VectorField& u)
{
    return inverse_transform(curl3d(transform(u)));
}

TensorField gradient_tensor(const VectorField& u)
{
    TensorField out;
    const int d = u.dim();
    out.reserve(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i) {
        const Spectrum s = transform(u[i]);
        for (int j = 0; j < d; ++j) {
            out.push_back(inverse_transform(derivative(s, j)));
        }
    }
    return out;
}

} // namespace vortlab
