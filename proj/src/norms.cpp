#include "vortlab/norms.hpp"

#include "vortlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vortlab {

namespace {

void check_p(double p)
{
    if (!(p >= 1.0)) {
        throw PreconditionError("Lp norm needs p >= 1");
    }
}

// Reduces the pointwise magnitudes |f(x_i)| in lattice order.
template <class Magnitude>
double reduce_lp(const Grid& g, double p, Magnitude&& magnitude)
{
    check_p(p);
    const std::size_t size = g.size();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            m = std::max(m, magnitude(i));
        }
        return m;
    }
    double acc = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < size; ++i) {
            acc += magnitude(i);
        }
        return acc * g.cell_volume();
    }
    if (p == 2.0) {
        for (std::size_t i = 0; i < size; ++i) {
            const double m = magnitude(i);
            acc += m * m;
        }
        return std::sqrt(acc * g.cell_volume());
    }
    if (p == 3.0 || p == 4.0 || p == 1.5) {
        for (std::size_t i = 0; i < size; ++i) {
            const double m = magnitude(i);
            acc += p == 3.0 ? m * m * m : p == 4.0 ? (m * m) * (m * m) : m * std::sqrt(m);
        }
    } else {
        for (std::size_t i = 0; i < size; ++i) {
            acc += std::pow(magnitude(i), p);
        }
    }
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

} // namespace

double lp_norm(const ScalarField& f, double p)
{
    const auto s = f.samples();
    return reduce_lp(f.grid(), p, [&](std::size_t i) { return std::abs(s[i]); });
}

double lp_norm(std::span<const ScalarField> components, double p)
{
    if (components.empty()) {
        throw PreconditionError("Lp norm of an empty component list");
    }
    const Grid& g = components.front().grid();
    for (const auto& c : components) {
        require_same_grid(g, c.grid(), "lp_norm");
    }
    if (components.size() == 1) {
        return lp_norm(components.front(), p);
    }
    return reduce_lp(g, p, [&](std::size_t i) {
        double s = 0.0;
        for (const auto& c : components) {
            s += c[i] * c[i];
        }
        return std::sqrt(s);
    });
}

double lp_norm(const VectorField& f, double p)
{
    return lp_norm(f.components(), p);
}

double w11_norm(const ScalarField& w)
{
    if (w.grid().dim() != 2) {
        throw PreconditionError("w11_norm needs a 2D field");
    }
    return lp_norm(w, 1.0) + lp_norm(gradient(w), 1.0);
}

namespace {

double hs_unchecked(std::span<const Spectrum> components, double s)
{
    const Grid& g = components.front().grid();
    for (const auto& c : components) {
        require_same_grid(g, c.grid(), "hs_norm");
    }
    const auto table = mode_table(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        const double k2 = table->k2[i];
        if (s != 0.0 && k2 == 0.0) {
            continue;
        }
        double power = 0.0;
        for (const auto& c : components) {
            power += std::norm(c[i]);
        }
        if (power == 0.0) {
            continue;
        }
        const double factor = s == 0.0 ? 1.0 : s == 0.5 ? std::sqrt(k2) : s == -0.5 ? 1.0 / std::sqrt(k2) : std::pow(k2, s);
        acc += table->weight[i] * factor * power;
    }
    return std::sqrt(acc * g.volume());
}

void mean_undefined()
{
    throw PreconditionError("homogeneous norm undefined: field has nonvanishing mean");
}

} // namespace

double hs_norm(std::span<const Spectrum> components, double s)
{
    if (components.empty()) {
        throw PreconditionError("hs_norm of an empty component list");
    }
    if (s < 0.0) {
        const auto table = mode_table(components.front().grid());
        for (const auto& c : components) {
            double l2 = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                l2 += table->weight[i] * std::norm(c[i]);
            }
            if (std::abs(c[0]) > 1e-10 * std::sqrt(l2)) {
                mean_undefined();
            }
        }
    }
    return hs_unchecked(components, s);
}

double hs_norm(const ScalarField& f, double s)
{
    if (s < 0.0 && std::abs(f.mean()) > 1e-10 * f.max_abs()) {
        mean_undefined();
    }
    const Spectrum spec = transform(f);
    return hs_unchecked(std::span<const Spectrum>(&spec, 1), s);
}

double hs_norm(const VectorField& f, double s)
{
    if (s < 0.0) {
        const double scale = f.max_abs();
        for (const auto& c : f.components()) {
            if (std::abs(c.mean()) > 1e-10 * scale) {
                mean_undefined();
            }
        }
    }
    const VectorSpectrum spec = transform(f);
    return hs_unchecked(spec, s);
}

double mixed_norm_from_samples(std::span<const double> times, std::span<const double> spatial_norms,
                               double q)
{
    if (times.size() < 2 || times.size() != spatial_norms.size()) {
        throw PreconditionError("mixed norm needs at least two time samples");
    }
    check_p(q);
    if (std::isinf(q)) {
        return *std::max_element(spatial_norms.begin(), spatial_norms.end());
    }
    const double dt = times[1] - times[0];
    double acc = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double w = (j == 0 || j + 1 == times.size()) ? 0.5 * dt : dt;
        acc += w * std::pow(spatial_norms[j], q);
    }
    return std::pow(acc, 1.0 / q);
}

namespace {

template <class Field>
double mixed_norm_impl(const Trajectory<Field>& traj, double q, double r)
{
    if (traj.size() < 2) {
        throw PreconditionError("mixed norm needs at least two time samples");
    }
    traj.validate();
    std::vector<double> norms;
    norms.reserve(traj.size());
    for (const auto& f : traj.fields) {
        norms.push_back(lp_norm(f, r));
    }
    return mixed_norm_from_samples(traj.times, norms, q);
}

} // namespace

double mixed_norm(const ScalarTrajectory& traj, double q, double r)
{
    return mixed_norm_impl(traj, q, r);
}

double mixed_norm(const VectorTrajectory& traj, double q, double r)
{
    return mixed_norm_impl(traj, q, r);
}

void NormReport::set(const std::string& label, double value)
{
    if (!std::isfinite(value) || value < 0.0) {
        throw PreconditionError("norm '" + label + "' must be finite and nonnegative");
    }
    values_[label] = value;
}

double NormReport::at(const std::string& label) const
{
    auto it = values_.find(label);
    if (it == values_.end()) {
        throw PreconditionError("norm '" + label + "' not in report");
    }
    return it->second;
}

std::vector<double> uniform_times(double t_end, int count)
{
    if (count < 2 || !(t_end > 0.0)) {
        throw PreconditionError("time lattice needs t_end > 0 and at least two samples");
    }
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        t[j] = t_end * j / (count - 1);
    }
    return t;
}

} // namespace vortlab
