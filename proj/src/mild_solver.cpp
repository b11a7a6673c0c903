#include "vortlab/mild_solver.hpp"

#include "vortlab/biot_savart.hpp"
#include "vortlab/field_io.hpp"
#include "vortlab/heat.hpp"
#include "vortlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

namespace vortlab {

namespace {

using SpectralPath = std::vector<Spectrum>;

bool finite(const Spectrum& s)
{
    return std::all_of(s.coeffs().begin(), s.coeffs().end(),
                       [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

// 2/3-rule dealiased spectrum of the product v w.
VectorSpectrum flux_spectrum(const Spectrum& w)
{
    const VectorSpectrum v = velocity_spectrum_2d(w);
    const ScalarField wp = inverse_transform(w);
    VectorSpectrum out;
    out.reserve(2);
    for (int a = 0; a < 2; ++a) {
        Spectrum s = transform(hadamard(inverse_transform(v[a]), wp));
        dealias(s);
        out.push_back(std::move(s));
    }
    return out;
}

double w11_spectral(const Spectrum& s)
{
    const ScalarField f = inverse_transform(s);
    const VectorField grad({inverse_transform(derivative(s, 0)), inverse_transform(derivative(s, 1))});
    return lp_norm(f, 1.0) + lp_norm(grad, 1.0);
}

double sup_over(std::size_t count, const std::function<double(std::size_t)>& value)
{
    std::vector<double> values(count, 0.0);
    parallel_for(count, [&](std::size_t j) { values[j] = value(j); });
    double m = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw DivergenceError("non-finite norm in the Picard iteration");
        }
        m = std::max(m, v);
    }
    return m;
}

double sup_difference(const SpectralPath& a, const SpectralPath& b)
{
    return sup_over(a.size(), [&](std::size_t j) {
        Spectrum d = a[j];
        d -= b[j];
        return w11_spectral(d);
    });
}

double sup_norm(const SpectralPath& a)
{
    return sup_over(a.size(), [&](std::size_t j) { return w11_spectral(a[j]); });
}

SpectralPath apply_T_spectral(const SpectralPath& w, const Spectrum& w0, const std::vector<double>& times,
                              const MildSolveConfig& cfg)
{
    const std::size_t nt = times.size();
    SpectralPath out(nt, Spectrum(w0.grid()));
    std::optional<SampledVectorSpectra> flux;
    if (cfg.nonlinear) {
        std::vector<VectorSpectrum> samples(nt);
        parallel_for(nt, [&](std::size_t j) { samples[j] = flux_spectrum(w[j]); });
        flux.emplace(times, std::move(samples));
    }
    parallel_for(nt, [&](std::size_t j) {
        if (j == 0) {
            out[0] = w0;
            return;
        }
        out[j] = heat_evolve(w0, times[j]);
        if (flux) {
            out[j] -= duhamel_derivative_term(*flux, DuhamelQuadrature(times[j], cfg.quad_m));
        }
    });
    for (const auto& s : out) {
        if (!finite(s)) {
            throw DivergenceError("non-finite values in T w");
        }
    }
    return out;
}

void check_initial(const ScalarField& w0)
{
    if (w0.grid().dim() != 2) {
        throw PreconditionError("the vorticity solver needs a 2D field");
    }
    if (!w0.all_finite()) {
        throw PreconditionError("initial vorticity has non-finite samples");
    }
    if (!has_zero_mean(w0)) {
        throw CirculationError("initial vorticity mean " + std::to_string(w0.mean()) + " is not zero");
    }
}

SpectralPath heat_path(const Spectrum& w0, const std::vector<double>& times)
{
    SpectralPath out(times.size(), Spectrum(w0.grid()));
    parallel_for(times.size(), [&](std::size_t j) { out[j] = heat_evolve(w0, times[j]); });
    return out;
}

ScalarTrajectory to_trajectory(const SpectralPath& path, const std::vector<double>& times)
{
    ScalarTrajectory traj;
    traj.times = times;
    traj.fields.assign(path.size(), ScalarField(path.front().grid()));
    parallel_for(path.size(), [&](std::size_t j) { traj.fields[j] = inverse_transform(path[j]); });
    return traj;
}

SpectralPath to_spectra(const ScalarTrajectory& traj)
{
    SpectralPath out(traj.size(), Spectrum(traj.fields.front().grid()));
    parallel_for(traj.size(), [&](std::size_t j) { out[j] = transform(traj.fields[j]); });
    return out;
}

double enstrophy(const Spectrum& s, const ModeTable& table)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        acc += table.weight[i] * std::norm(s[i]);
    }
    return acc * s.grid().volume();
}

} // namespace

void MildSolveConfig::validate() const
{
    if (!(t0 > 0.0) || !std::isfinite(t0)) {
        throw PreconditionError("t0 must be positive");
    }
    if (nt < 8) {
        throw PreconditionError("nt must be >= 8");
    }
    if (quad_m < 4) {
        throw PreconditionError("quad_m must be >= 4");
    }
    if (!(tol > 0.0)) {
        throw PreconditionError("tol must be positive");
    }
    if (max_iter < 1) {
        throw PreconditionError("max_iter must be >= 1");
    }
}

ScalarTrajectory apply_T(const ScalarTrajectory& w, const ScalarField& w0, const MildSolveConfig& cfg)
{
    cfg.validate();
    check_initial(w0);
    w.validate();
    const auto times = uniform_times(cfg.t0, cfg.nt);
    if (w.size() != times.size() || std::abs(w.times.back() - cfg.t0) > 1e-12 * cfg.t0) {
        throw PreconditionError("trajectory is not on the configured time lattice");
    }
    for (const auto& f : w.fields) {
        require_same_grid(w0.grid(), f.grid(), "apply_T");
    }
    return to_trajectory(apply_T_spectral(to_spectra(w), transform(w0), times, cfg), times);
}

NormReport vorticity_norms(const ScalarField& w)
{
    NormReport r;
    const double l1 = lp_norm(w, 1.0);
    r.set("L1", l1);
    r.set("W11", l1 + lp_norm(gradient(w), 1.0));
    const auto v = velocity_from_vorticity_2d(w);
    r.set("Linf_v", lp_norm(v.field(), kInf));
    const TensorField grad_v = gradient_tensor(v.field());
    r.set("L2_gradv", lp_norm(grad_v, 2.0));
    return r;
}

double sup_w11(const ScalarTrajectory& traj)
{
    return sup_over(traj.size(), [&](std::size_t j) { return w11_norm(traj.fields[j]); });
}

double sup_w11_difference(const ScalarTrajectory& a, const ScalarTrajectory& b)
{
    if (a.size() != b.size()) {
        throw PreconditionError("trajectories have different lengths");
    }
    return sup_over(a.size(), [&](std::size_t j) { return w11_norm(a.fields[j] - b.fields[j]); });
}

PicardResult picard_solve(const ScalarField& w0, const MildSolveConfig& cfg)
{
    cfg.validate();
    check_initial(w0);
    const auto times = uniform_times(cfg.t0, cfg.nt);
    const Spectrum w0_hat = transform(w0);

    PicardResult result;
    PicardTrace& trace = result.trace;
    trace.a0 = w11_norm(w0);

    SpectralPath current = heat_path(w0_hat, times);
    double previous = 0.0;
    int growing = 0;
    for (int it = 0; it < cfg.max_iter; ++it) {
        SpectralPath next = apply_T_spectral(current, w0_hat, times, cfg);
        PicardIteration rec;
        rec.difference_sup_w11 = sup_difference(next, current);
        rec.iterate_sup_w11 = sup_norm(next);
        rec.ratio = previous > 0.0 ? rec.difference_sup_w11 / previous : 0.0;
        trace.iterations.push_back(rec);
        current = std::move(next);
        if (rec.difference_sup_w11 < cfg.tol) {
            trace.converged = true;
            break;
        }
        growing = (it > 0 && rec.ratio >= 1.0) ? growing + 1 : 0;
        if (growing >= 3) {
            throw ContractionError("t0 too large for A0: the Picard map is not contracting; "
                                   "reduce t0 (t0 = C / A0^2)");
        }
        previous = rec.difference_sup_w11;
    }

    result.solution = to_trajectory(current, times);
    trace.per_time.assign(times.size(), NormReport{});
    parallel_for(times.size(),
                 [&](std::size_t j) { trace.per_time[j] = vorticity_norms(result.solution.fields[j]); });
    double sup = 0.0;
    for (const auto& r : trace.per_time) {
        sup = std::max(sup, r.at("W11"));
    }
    trace.within_ball = sup <= 8.0 * trace.a0;
    return result;
}

double first_contraction_ratio(const ScalarField& w0, const MildSolveConfig& cfg)
{
    cfg.validate();
    check_initial(w0);
    const auto times = uniform_times(cfg.t0, cfg.nt);
    const Spectrum w0_hat = transform(w0);
    const SpectralPath h = heat_path(w0_hat, times);
    const SpectralPath t1 = apply_T_spectral(h, w0_hat, times, cfg);
    const SpectralPath t2 = apply_T_spectral(t1, w0_hat, times, cfg);
    const double d1 = sup_difference(t1, h);
    const double d2 = sup_difference(t2, t1);
    return d1 > 0.0 ? d2 / d1 : 0.0;
}

HorizonChoice select_horizon(const ScalarField& w0, MildSolveConfig cfg, double c_initial, double t_max)
{
    if (!(c_initial > 0.0) || !(t_max > 0.0)) {
        throw PreconditionError("horizon selection needs c_initial > 0 and t_max > 0");
    }
    check_initial(w0);
    const double a0 = w11_norm(w0);
    HorizonChoice choice;
    choice.c_lab = c_initial;
    for (int halving = 0; halving < 40; ++halving) {
        const double t0 = a0 > 0.0 ? std::min(choice.c_lab / (a0 * a0), t_max) : t_max;
        cfg.t0 = t0;
        const double ratio = first_contraction_ratio(w0, cfg);
        if (ratio <= 0.5) {
            choice.t0 = t0;
            choice.first_ratio = ratio;
            choice.halvings = halving;
            return choice;
        }
        choice.c_lab *= 0.5;
    }
    throw ContractionError("no contracting horizon found after 40 halvings");
}

StepperResult reference_stepper(const ScalarField& w0, double t0, int nt, const StepperOptions& options)
{
    check_initial(w0);
    if (!(t0 > 0.0) || nt < 2) {
        throw PreconditionError("reference_stepper needs t0 > 0 and nt >= 2");
    }
    const Grid& g = w0.grid();
    const auto table = mode_table(g);
    const auto times = uniform_times(t0, nt);
    const double interval = times[1] - times[0];
    const std::size_t size = g.spectral_size();

    StepperResult result;
    result.solution.times = times;
    result.solution.fields.push_back(w0);

    Spectrum w = transform(w0);
    const Complex mean0 = w[0];

    auto rhs = [&](const Spectrum& s) {
        const VectorSpectrum flux = flux_spectrum(s);
        Spectrum out(g);
        for (std::size_t i = 0; i < size; ++i) {
            const Complex div = table->kd[i][0] * flux[0][i] + table->kd[i][1] * flux[1][i];
            out[i] = -Complex(-div.imag(), div.real());
        }
        return out;
    };

    std::vector<double> e_half(size);
    double e_dt = -1.0;
    double ens = enstrophy(w, *table);

    for (int j = 1; j < nt; ++j) {
        const VectorField v = inverse_transform(velocity_spectrum_2d(w));
        const double vmax = v.max_abs();
        if (!std::isfinite(vmax)) {
            throw DivergenceError("reference_stepper: non-finite velocity");
        }
        const double dt_cfl = vmax > 0.0 ? options.cfl * g.h() / vmax : interval;
        const auto steps = std::max<long>(options.min_substeps, static_cast<long>(std::ceil(interval / dt_cfl)));
        if (steps > options.max_substeps) {
            throw DivergenceError("reference_stepper: CFL restriction needs more than max_substeps steps");
        }
        const double dt = interval / static_cast<double>(steps);
        if (dt != e_dt) {
            for (std::size_t i = 0; i < size; ++i) {
                e_half[i] = std::exp(-table->k2[i] * 0.5 * dt);
            }
            e_dt = dt;
        }
        for (long step = 0; step < steps; ++step) {
            const Spectrum a = rhs(w);
            Spectrum stage(g);
            for (std::size_t i = 0; i < size; ++i) {
                stage[i] = e_half[i] * (w[i] + 0.5 * dt * a[i]);
            }
            const Spectrum b = rhs(stage);
            for (std::size_t i = 0; i < size; ++i) {
                stage[i] = e_half[i] * w[i] + 0.5 * dt * b[i];
            }
            const Spectrum c = rhs(stage);
            for (std::size_t i = 0; i < size; ++i) {
                stage[i] = e_half[i] * e_half[i] * w[i] + dt * e_half[i] * c[i];
            }
            const Spectrum d = rhs(stage);
            for (std::size_t i = 0; i < size; ++i) {
                const double e1 = e_half[i];
                const double e2 = e1 * e1;
                w[i] = e2 * w[i] + dt / 6.0 * (e2 * a[i] + 2.0 * e1 * (b[i] + c[i]) + d[i]);
            }
            if (!finite(w)) {
                throw DivergenceError("reference_stepper: non-finite vorticity");
            }
            const double next_ens = enstrophy(w, *table);
            if (ens > 0.0 && next_ens > ens) {
                result.max_enstrophy_increase = std::max(result.max_enstrophy_increase, (next_ens - ens) / ens);
            }
            ens = next_ens;
            ++result.total_steps;
        }
        result.max_mean_drift = std::max(result.max_mean_drift, std::abs(w[0] - mean0));
        result.solution.fields.push_back(inverse_transform(w));
    }
    return result;
}

double fit_slope(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

DependenceReport continuous_dependence_experiment(const ScalarField& w0,
                                                  const std::vector<ScalarField>& perturbations,
                                                  const MildSolveConfig& cfg)
{
    const PicardResult base = picard_solve(w0, cfg);
    DependenceReport report;
    report.rows.resize(perturbations.size());
    for (std::size_t i = 0; i < perturbations.size(); ++i) {
        const ScalarField& delta = perturbations[i];
        require_same_grid(w0.grid(), delta.grid(), "continuous_dependence_experiment");
        const PicardResult perturbed = picard_solve(w0 + delta, cfg);
        DependenceRow& row = report.rows[i];
        row.input_w11 = w11_norm(delta);
        row.output_sup_w11 = sup_w11_difference(perturbed.solution, base.solution);
        row.ratio = row.input_w11 > 0.0 ? row.output_sup_w11 / row.input_w11 : 0.0;
    }
    std::vector<double> lx, ly;
    for (const auto& row : report.rows) {
        if (row.input_w11 > 0.0 && row.output_sup_w11 > 0.0) {
            lx.push_back(std::log(row.input_w11));
            ly.push_back(std::log(row.output_sup_w11));
        }
    }
    report.slope = fit_slope(lx, ly);
    return report;
}

void write_trace_csv(std::ostream& out, const ScalarTrajectory& traj, const PicardTrace& trace)
{
    out << "t,L1,W11,Linf_v,L2_gradv\n";
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const NormReport& r = trace.per_time.at(j);
        out << format_double(traj.times[j]) << ',' << format_double(r.at("L1")) << ','
            << format_double(r.at("W11")) << ',' << format_double(r.at("Linf_v")) << ','
            << format_double(r.at("L2_gradv")) << '\n';
    }
}

} // namespace vortlab
