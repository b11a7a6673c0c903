#include "vortlab/heat.hpp"

#include "vortlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace vortlab {

namespace {

void check_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw PreconditionError("heat_evolve needs t >= 0");
    }
}

// acc += w * exp(-|k|^2 tau^2) * (i kd . g)
void accumulate_node(const ModeTable& table, double weight, double tau, const VectorSpectrum& g,
                     std::span<Complex> acc)
{
    const std::size_t dim = g.size();
    const double tau2 = tau * tau;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        Complex div(0.0, 0.0);
        for (std::size_t a = 0; a < dim; ++a) {
            div += table.kd[i][a] * g[a][i];
        }
        if (div == Complex(0.0, 0.0)) {
            continue;
        }
        const double decay = weight * std::exp(-table.k2[i] * tau2);
        acc[i] += Complex(-div.imag(), div.real()) * decay;
    }
}

} // namespace

Spectrum heat_evolve(const Spectrum& f, double t)
{
    check_time(t);
    if (t == 0.0) {
        return f;
    }
    const auto table = mode_table(f.grid());
    Spectrum out = f;
    auto c = out.coeffs();
    for (std::size_t i = 1; i < c.size(); ++i) {
        c[i] *= std::exp(-table->k2[i] * t);
    }
    return out;
}

ScalarField heat_evolve(const ScalarField& f, double t)
{
    check_time(t);
    if (t == 0.0) {
        return f;
    }
    return inverse_transform(heat_evolve(transform(f), t));
}

VectorField heat_evolve(const VectorField& f, double t)
{
    std::vector<ScalarField> comps;
    for (const auto& c : f.components()) {
        comps.push_back(heat_evolve(c, t));
    }
    return VectorField(std::move(comps));
}

DuhamelQuadrature::DuhamelQuadrature(double t_, int m_) : t(t_), m(m_)
{
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw PreconditionError("Duhamel quadrature needs t > 0");
    }
    if (m < 4) {
        throw PreconditionError("Duhamel quadrature needs m >= 4");
    }
    const double h = std::sqrt(t) / m;
    tau.resize(static_cast<std::size_t>(m));
    nodes.resize(tau.size());
    weights.resize(tau.size());
    for (int i = 0; i < m; ++i) {
        tau[i] = (i + 0.5) * h;
        nodes[i] = t - tau[i] * tau[i];
        weights[i] = 2.0 * tau[i] * h;
    }
}

SampledVectorSpectra::SampledVectorSpectra(std::vector<double> times,
                                           std::vector<VectorSpectrum> samples)
    : times_(std::move(times)), samples_(std::move(samples))
{
    if (times_.size() < 2 || times_.size() != samples_.size()) {
        throw PreconditionError("sampled spectra need at least two time samples");
    }
}

void SampledVectorSpectra::interpolate(double s, std::size_t c, std::span<Complex> out) const
{
    const double dt = times_[1] - times_[0];
    const double pos = (s - times_.front()) / dt;
    auto j = static_cast<std::ptrdiff_t>(std::floor(pos));
    j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(times_.size()) - 2);
    const double theta = pos - static_cast<double>(j);
    const auto a = samples_[static_cast<std::size_t>(j)][c].coeffs();
    const auto b = samples_[static_cast<std::size_t>(j) + 1][c].coeffs();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (1.0 - theta) * a[i] + theta * b[i];
    }
}

void SampledVectorSpectra::interpolate(double s, VectorSpectrum& out) const
{
    if (out.size() != components()) {
        out.assign(components(), Spectrum(grid()));
    }
    for (std::size_t c = 0; c < components(); ++c) {
        interpolate(s, c, out[c].coeffs());
    }
}

Spectrum duhamel_derivative_term(const SampledVectorSpectra& g, const DuhamelQuadrature& quad)
{
    const auto table = mode_table(g.grid());
    Spectrum acc(g.grid());
    VectorSpectrum node;
    for (std::size_t i = 0; i < quad.tau.size(); ++i) {
        g.interpolate(quad.nodes[i], node);
        accumulate_node(*table, quad.weights[i], quad.tau[i], node, acc.coeffs());
    }
    return acc;
}

Spectrum duhamel_derivative_term(const std::function<VectorSpectrum(double)>& g,
                                 const DuhamelQuadrature& quad)
{
    Spectrum* acc_ptr = nullptr;
    std::optional<Spectrum> acc;
    std::shared_ptr<const ModeTable> table;
    for (std::size_t i = 0; i < quad.tau.size(); ++i) {
        const VectorSpectrum node = g(quad.nodes[i]);
        if (!acc) {
            acc.emplace(node.front().grid());
            acc_ptr = &*acc;
            table = mode_table(node.front().grid());
        }
        accumulate_node(*table, quad.weights[i], quad.tau[i], node, acc_ptr->coeffs());
    }
    return *acc;
}

ScalarField duhamel_derivative_term(const std::function<VectorField(double)>& g, double t, int m)
{
    const DuhamelQuadrature quad(t, m);
    return inverse_transform(
        duhamel_derivative_term([&](double s) { return transform(g(s)); }, quad));
}

} // namespace vortlab
