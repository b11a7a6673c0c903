#include "vortlab/maxwell.hpp"

#include "vortlab/bb_lab.hpp"
#include "vortlab/errors.hpp"
#include "vortlab/field_io.hpp"
#include "vortlab/norms.hpp"
#include "vortlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace vortlab {

namespace {

constexpr double kEqualityTolerance = 1e-12;

// Exact per-mode propagator. Modes are grouped into shells of equal |k|^2; the source
// response of every separable term is a scalar per shell, integrated once by the trapezoid
// recursion, so each stored time is assembled independently.
class WavePropagator {
public:
    WavePropagator(const VectorField& b0, const VectorField& b1, const CurrentDensity& j, double T, int nt,
                   const WaveOptions& options)
        : grid_(b0.grid())
    {
        const Grid& g = grid_;
        if (g.dim() != 3 || b0.dim() != 3 || b1.dim() != 3) {
            throw PreconditionError("solve_wave needs 3D vector fields");
        }
        require_same_grid(g, b1.grid(), "solve_wave");
        if (!(T > 0.0) || nt < 2 || options.substeps < 1) {
            throw PreconditionError("solve_wave needs T > 0, nt >= 2 and substeps >= 1");
        }
        for (const auto& term : j.terms()) {
            if (term.spatial.dim() != 3) {
                throw PreconditionError("current density must be a 3D vector field");
            }
            require_same_grid(g, term.spatial.grid(), "solve_wave current");
            curls_.push_back(curl3d(transform(term.spatial)));
        }
        b0_ = transform(b0);
        b1_ = transform(b1);
        times_ = uniform_times(T, nt);

        const auto table = mode_table(g);
        const double k0sq = g.k0() * g.k0();
        shell_.resize(g.spectral_size());
        int shells = 0;
        for (std::size_t i = 0; i < shell_.size(); ++i) {
            shell_[i] = static_cast<int>(std::lround(table->k2[i] / k0sq));
            shells = std::max(shells, shell_[i] + 1);
        }
        std::vector<double> k(static_cast<std::size_t>(shells));
        for (int s = 0; s < shells; ++s) {
            k[static_cast<std::size_t>(s)] = g.k0() * std::sqrt(static_cast<double>(s));
        }

        const std::size_t ns = k.size();
        const std::size_t nts = times_.size();
        hom_.assign(3, std::vector<double>(nts * ns));
        for (std::size_t jt = 0; jt < nts; ++jt) {
            for (std::size_t s = 0; s < ns; ++s) {
                const double kt = k[s] * times_[jt];
                hom_[0][jt * ns + s] = std::cos(kt);
                hom_[1][jt * ns + s] = k[s] > 0.0 ? std::sin(kt) / k[s] : times_[jt];
                hom_[2][jt * ns + s] = -k[s] * std::sin(kt);
            }
        }

        const double delta = (times_[1] - times_[0]) / options.substeps;
        const double half = 0.5 * delta;
        std::vector<double> cos_k(ns), sinc_k(ns), ksin_k(ns);
        for (std::size_t s = 0; s < ns; ++s) {
            cos_k[s] = std::cos(k[s] * delta);
            sinc_k[s] = k[s] > 0.0 ? std::sin(k[s] * delta) / k[s] : delta;
            ksin_k[s] = k[s] * std::sin(k[s] * delta);
        }
        const auto& terms = j.terms();
        response_.assign(terms.size(), {std::vector<double>(nts * ns, 0.0), std::vector<double>(nts * ns, 0.0)});
        parallel_for(terms.size(), [&](std::size_t m) {
            auto& [p, q] = response_[m];
            std::vector<double> pc(ns, 0.0), qc(ns, 0.0);
            for (std::size_t jt = 1; jt < nts; ++jt) {
                for (int sub = 0; sub < options.substeps; ++sub) {
                    const double s0 = times_[jt - 1] + sub * delta;
                    const double fa = terms[m].temporal(s0);
                    const double fb = terms[m].temporal(s0 + delta);
                    for (std::size_t s = 0; s < ns; ++s) {
                        const double pn = cos_k[s] * pc[s] + sinc_k[s] * qc[s] + half * sinc_k[s] * fa;
                        const double qn = -ksin_k[s] * pc[s] + cos_k[s] * qc[s] + half * (cos_k[s] * fa + fb);
                        pc[s] = pn;
                        qc[s] = qn;
                    }
                }
                std::copy(pc.begin(), pc.end(), p.begin() + static_cast<std::ptrdiff_t>(jt * ns));
                std::copy(qc.begin(), qc.end(), q.begin() + static_cast<std::ptrdiff_t>(jt * ns));
            }
        });
        shells_ = ns;
    }

    const std::vector<double>& times() const { return times_; }
    const Grid& grid() const { return grid_; }

    /// Spectra of B and dB/dt at stored time index jt.
    void state(std::size_t jt, VectorSpectrum& b, VectorSpectrum& d) const
    {
        b.assign(3, Spectrum(grid_));
        d.assign(3, Spectrum(grid_));
        const std::size_t off = jt * shells_;
        const double* c = hom_[0].data() + off;
        const double* sn = hom_[1].data() + off;
        const double* ks = hom_[2].data() + off;
        for (int a = 0; a < 3; ++a) {
            const auto x0 = b0_[a].coeffs();
            const auto x1 = b1_[a].coeffs();
            auto bc = b[a].coeffs();
            auto dc = d[a].coeffs();
            for (std::size_t i = 0; i < shell_.size(); ++i) {
                const int s = shell_[i];
                bc[i] = c[s] * x0[i] + sn[s] * x1[i];
                dc[i] = ks[s] * x0[i] + c[s] * x1[i];
            }
            for (std::size_t m = 0; m < curls_.size(); ++m) {
                const double* p = response_[m].first.data() + off;
                const double* q = response_[m].second.data() + off;
                const auto src = curls_[m][a].coeffs();
                for (std::size_t i = 0; i < shell_.size(); ++i) {
                    const int s = shell_[i];
                    bc[i] += p[s] * src[i];
                    dc[i] += q[s] * src[i];
                }
            }
        }
    }

private:
    Grid grid_;
    VectorSpectrum b0_, b1_;
    std::vector<VectorSpectrum> curls_;
    std::vector<double> times_;
    std::vector<int> shell_;
    std::size_t shells_ = 0;
    std::vector<std::vector<double>> hom_;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> response_;
};

// (-Lap)^{k/2} grad of one current term: 9 spectra, entry (a, c) = |k|^k i kd_c J_a.
std::vector<Spectrum> fractional_gradient(const VectorField& j, double k_exp)
{
    const Grid& g = j.grid();
    const auto table = mode_table(g);
    std::vector<Spectrum> out;
    for (int a = 0; a < 3; ++a) {
        const Spectrum ja = transform(j[a]);
        for (int c = 0; c < 3; ++c) {
            Spectrum s(g);
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double k2 = table->k2[i];
                if (k2 == 0.0) {
                    continue;
                }
                s[i] = Complex(0.0, table->kd[i][c]) * ja[i] * std::pow(k2, 0.5 * k_exp);
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

double frobenius_l1(const std::vector<Spectrum>& comps)
{
    std::vector<ScalarField> fields;
    for (const auto& c : comps) {
        fields.push_back(inverse_transform(c));
    }
    return lp_norm(fields, 1.0);
}

} // namespace

AdmissibilityVerdict strichartz_admissible(const StrichartzExponents& e)
{
    AdmissibilityVerdict v;
    const double inf = kInf;
    if (!(e.q >= 2.0 && e.q <= inf)) {
        v.violations.push_back("range 2 <= q <= inf violated");
    }
    if (!(e.qt > 2.0 && e.qt <= inf)) {
        v.violations.push_back("range 2 < qt <= inf violated");
    }
    if (!(e.r >= 2.0 && e.r < inf)) {
        v.violations.push_back("range 2 <= r < inf violated");
    }
    const double iq = 1.0 / e.q;
    const double ir = 1.0 / e.r;
    const double iqt_dual = 1.0 - 1.0 / e.qt;
    if (!(iq + ir <= 0.5 + kEqualityTolerance)) {
        v.violations.push_back("wave compatibility 1/q + 1/r <= 1/2 violated");
    }
    const double scale = iq + 3.0 * ir;
    if (!(std::abs(scale - (1.5 - e.s)) <= kEqualityTolerance)) {
        v.violations.push_back("scale invariance 1/q + 3/r = 3/2 - s violated");
    }
    if (!(std::abs(scale - (iqt_dual + 1.0 - e.k)) <= kEqualityTolerance)) {
        v.violations.push_back("scale invariance 1/q + 3/r = 1/qt' + 1 - k violated");
    }
    v.admissible = v.violations.empty();
    return v;
}

CurrentDensity::CurrentDensity(std::vector<Term> terms) : terms_(std::move(terms)) {}

CurrentDensity CurrentDensity::separable(VectorField spatial, std::function<double(double)> temporal)
{
    std::vector<Term> terms;
    terms.push_back({std::move(spatial), std::move(temporal)});
    return CurrentDensity(std::move(terms));
}

CurrentDensity CurrentDensity::sampled(std::vector<double> times, std::vector<VectorField> samples)
{
    if (times.size() < 2 || times.size() != samples.size()) {
        throw PreconditionError("sampled current needs at least two samples");
    }
    const double dt = times[1] - times[0];
    std::vector<Term> terms;
    const std::size_t last = times.size() - 1;
    for (std::size_t m = 0; m < times.size(); ++m) {
        const double tm = times[m];
        terms.push_back({std::move(samples[m]), [tm, dt, m, last, t0 = times.front(), t1 = times.back()](double t) {
                             if (m == 0 && t <= t0) {
                                 return 1.0;
                             }
                             if (m == last && t >= t1) {
                                 return 1.0;
                             }
                             return std::max(0.0, 1.0 - std::abs(t - tm) / dt);
                         }});
    }
    return CurrentDensity(std::move(terms));
}

VectorField CurrentDensity::at(double t, const Grid& grid) const
{
    VectorField out(grid);
    for (const auto& term : terms_) {
        const double theta = term.temporal(t);
        if (theta != 0.0) {
            VectorField scaled = term.spatial;
            scaled *= theta;
            out += scaled;
        }
    }
    return out;
}

WaveSolution solve_wave(const VectorField& b0, const VectorField& b1, const CurrentDensity& j, double T, int nt,
                        const WaveOptions& options)
{
    const WavePropagator wave(b0, b1, j, T, nt, options);
    WaveSolution out;
    out.b.times = wave.times();
    out.db.times = wave.times();
    out.b.fields.assign(wave.times().size(), VectorField(b0.grid()));
    out.db.fields.assign(wave.times().size(), VectorField(b0.grid()));
    parallel_for(wave.times().size(), [&](std::size_t i) {
        VectorSpectrum b, d;
        wave.state(i, b, d);
        out.b.fields[i] = inverse_transform(b);
        out.db.fields[i] = inverse_transform(d);
    });
    return out;
}

double wave_energy(const VectorField& b, const VectorField& db)
{
    require_same_grid(b.grid(), db.grid(), "wave_energy");
    const auto table = mode_table(b.grid());
    const VectorSpectrum bs = transform(b);
    const VectorSpectrum ds = transform(db);
    double acc = 0.0;
    for (std::size_t a = 0; a < bs.size(); ++a) {
        for (std::size_t i = 0; i < bs[a].size(); ++i) {
            acc += table->weight[i] * (std::norm(ds[a][i]) + table->k2[i] * std::norm(bs[a][i]));
        }
    }
    return acc * b.grid().volume();
}

StrichartzTerms strichartz_terms(const StrichartzExponents& e, const StrichartzFixture& fixture, double T, int nt,
                                 const WaveOptions& options)
{
    const WavePropagator wave(fixture.b0, fixture.b1, fixture.j, T, nt, options);
    const std::vector<double>& times = wave.times();
    const std::size_t count = times.size();
    std::vector<double> lr(count), hs(count), hs_dt(count);
    parallel_for(count, [&](std::size_t i) {
        VectorSpectrum b, d;
        wave.state(i, b, d);
        lr[i] = lp_norm(inverse_transform(b), e.r);
        hs[i] = hs_norm(std::span<const Spectrum>(b), e.s);
        hs_dt[i] = hs_norm(std::span<const Spectrum>(d), e.s - 1.0);
    });
    StrichartzTerms terms;
    terms.mixed = mixed_norm_from_samples(times, lr, e.q);
    terms.sup_hs = *std::max_element(hs.begin(), hs.end());
    terms.sup_hs_dt = *std::max_element(hs_dt.begin(), hs_dt.end());
    terms.data_hs = hs_norm(std::span<const Spectrum>(transform(fixture.b0)), e.s);
    terms.data_hs_dt = hs_norm(std::span<const Spectrum>(transform(fixture.b1)), e.s - 1.0);

    const auto& source_terms = fixture.j.terms();
    if (!source_terms.empty()) {
        std::vector<std::vector<Spectrum>> grads;
        std::vector<double> single_l1;
        for (const auto& term : source_terms) {
            grads.push_back(fractional_gradient(term.spatial, e.k));
            single_l1.push_back(frobenius_l1(grads.back()));
        }
        std::vector<double> l1(count, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<std::size_t> active;
            std::vector<double> theta;
            for (std::size_t m = 0; m < source_terms.size(); ++m) {
                const double th = source_terms[m].temporal(times[i]);
                if (th != 0.0) {
                    active.push_back(m);
                    theta.push_back(th);
                }
            }
            if (active.size() == 1) {
                l1[i] = std::abs(theta[0]) * single_l1[active[0]];
            } else if (active.size() > 1) {
                std::vector<Spectrum> acc(9, Spectrum(fixture.b0.grid()));
                for (std::size_t a = 0; a < active.size(); ++a) {
                    for (std::size_t c = 0; c < 9; ++c) {
                        acc[c].axpy(theta[a], grads[active[a]][c]);
                    }
                }
                l1[i] = frobenius_l1(acc);
            }
        }
        const double qt_dual = std::isinf(e.qt) ? 1.0 : e.qt / (e.qt - 1.0);
        terms.source = mixed_norm_from_samples(times, l1, qt_dual);
    }
    return terms;
}

StrichartzFixture random_strichartz_fixture(const Grid& grid, std::uint64_t seed, double beta, int band)
{
    std::mt19937_64 rng(seed);
    const std::uint64_t s0 = rng();
    const std::uint64_t s1 = rng();
    const std::uint64_t s2 = rng();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double omega = grid.k0() * (0.5 + 1.5 * unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    StrichartzFixture f{random_vector_field(grid, s0, beta, band), random_vector_field(grid, s1, beta, band),
                        CurrentDensity::separable(random_vector_field(grid, s2, beta, band),
                                                  [omega, phi](double t) { return std::cos(omega * t + phi); }),
                        seed};
    return f;
}

StrichartzReport strichartz_ratio_experiment(const StrichartzExponents& e, std::uint64_t seed, int count,
                                             double beta, int band, double box_length,
                                             const std::vector<int>& n_list, double T, int nt,
                                             const WaveOptions& options)
{
    const AdmissibilityVerdict verdict = strichartz_admissible(e);
    if (!verdict.admissible) {
        std::string msg = "inadmissible exponents:";
        for (const auto& v : verdict.violations) {
            msg += " " + v + ";";
        }
        throw PreconditionError(msg);
    }
    if (!(T > 0.0) || T > box_length / 4.0 * (1.0 + 1e-12)) {
        throw PreconditionError("T must satisfy 0 < T <= L/4 (light cone must not wrap around the torus)");
    }
    if (count < 1 || n_list.empty()) {
        throw PreconditionError("strichartz experiment needs count >= 1 and at least one resolution");
    }
    StrichartzReport report;
    report.exponents = e;
    report.T = T;
    double previous = -1.0;
    for (int n : n_list) {
        const Grid g(3, n, box_length);
        std::vector<StrichartzSample> samples(static_cast<std::size_t>(count));
        parallel_for(samples.size(), [&](std::size_t i) {
            const StrichartzFixture fixture = random_strichartz_fixture(g, seed + i, beta, band);
            const StrichartzTerms terms = strichartz_terms(e, fixture, T, nt, options);
            samples[i] = {seed + i, n, terms.lhs(), terms.rhs(), 0.0};
        });
        double max = 0.0;
        for (auto& s : samples) {
            if (!(s.rhs >= 1e-12)) {
                ++report.discarded;
                continue;
            }
            s.ratio = s.lhs / s.rhs;
            max = std::max(max, s.ratio);
            report.samples.push_back(s);
        }
        report.family_max.emplace_back(n, max);
        if (previous > 0.0) {
            report.refinement_change = std::max(report.refinement_change, std::abs(max - previous) / previous);
        }
        previous = max;
    }
    return report;
}

void write_strichartz_csv(std::ostream& out, const StrichartzReport& report)
{
    const auto& e = report.exponents;
    out << "q,r,qt,s,k,seed,n,LHS,RHS,ratio\n";
    for (const auto& s : report.samples) {
        out << format_double(e.q) << ',' << format_double(e.r) << ',' << format_double(e.qt) << ','
            << format_double(e.s) << ',' << format_double(e.k) << ',' << s.seed << ',' << s.n << ','
            << format_double(s.lhs) << ',' << format_double(s.rhs) << ',' << format_double(s.ratio) << '\n';
    }
}

} // namespace vortlab
