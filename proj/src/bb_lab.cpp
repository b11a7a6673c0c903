#include "vortlab/bb_lab.hpp"

#include "vortlab/biot_savart.hpp"
#include "vortlab/errors.hpp"
#include "vortlab/field_io.hpp"
#include "vortlab/norms.hpp"
#include "vortlab/parallel.hpp"
#include "vortlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

namespace vortlab {

namespace {

// Denominators below this fraction of the field scale count as zero.
constexpr double kDegenerate = 1e-12;

// Visits the integer modes of the band in a resolution-independent order, one
// representative per +-m pair (the first nonzero component is positive).
template <class Visit>
void for_each_band_mode(int dim, int band, Visit&& visit)
{
    std::array<int, 3> m{0, 0, 0};
    auto representative = [&] {
        for (int a = 0; a < dim; ++a) {
            if (m[a] != 0) {
                return m[a] > 0;
            }
        }
        return false;
    };
    for (m[0] = -band; m[0] <= band; ++m[0]) {
        for (m[1] = -band; m[1] <= band; ++m[1]) {
            if (dim == 2) {
                if (representative()) {
                    visit(m);
                }
                continue;
            }
            for (m[2] = -band; m[2] <= band; ++m[2]) {
                if (representative()) {
                    visit(m);
                }
            }
        }
    }
}

std::size_t spectral_index(const Grid& g, std::array<int, 3> m)
{
    const int n = g.n();
    auto wrap = [n](int v) { return static_cast<std::size_t>(v < 0 ? v + n : v); };
    const std::size_t last = static_cast<std::size_t>(n / 2 + 1);
    if (g.dim() == 2) {
        return wrap(m[0]) * last + static_cast<std::size_t>(m[1]);
    }
    return (wrap(m[0]) * static_cast<std::size_t>(n) + wrap(m[1])) * last + static_cast<std::size_t>(m[2]);
}

// Writes coefficient c for mode m and its conjugate for -m into the half spectrum.
void place(Spectrum& s, std::array<int, 3> m, Complex c)
{
    const Grid& g = s.grid();
    const int last_axis = g.dim() - 1;
    if (m[last_axis] < 0) {
        for (int a = 0; a < g.dim(); ++a) {
            m[a] = -m[a];
        }
        c = std::conj(c);
    }
    s[spectral_index(g, m)] = c;
    if (m[last_axis] == 0) {
        std::array<int, 3> neg{-m[0], -m[1], -m[2]};
        s[spectral_index(g, neg)] = std::conj(c);
    }
}

Spectrum random_spectrum(const Grid& g, std::mt19937_64& rng, double beta, int band)
{
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    Spectrum s(g);
    const double k0 = g.k0();
    for_each_band_mode(g.dim(), band, [&](const std::array<int, 3>& m) {
        const double k2 = k0 * k0 * (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
        const double amp = 0.5 * std::pow(1.0 + k2, -0.5 * beta);
        const double phi = phase(rng);
        place(s, m, std::polar(amp, phi));
    });
    return s;
}

void check_band(const Grid& g, int band)
{
    if (band < 1 || 3 * band >= g.n()) {
        throw PreconditionError("band must satisfy 1 <= band < n/3");
    }
}

Ratio make_ratio(double numerator, double denominator, double scale)
{
    if (!(denominator > kDegenerate * scale)) {
        throw PreconditionError("ratio denominator vanishes (constant field)");
    }
    return {numerator, denominator, numerator / denominator};
}

} // namespace

void RandomFieldSpec::validate() const
{
    if (!(beta > 0.0)) {
        throw PreconditionError("beta must be positive");
    }
    if (count < 1) {
        throw PreconditionError("count must be >= 1");
    }
    check_band(Grid(dim, n, box_length), band);
}

ScalarField random_scalar_field(const Grid& grid, std::uint64_t seed, double beta, int band)
{
    check_band(grid, band);
    std::mt19937_64 rng(seed);
    return inverse_transform(random_spectrum(grid, rng, beta, band));
}

VectorField random_vector_field(const Grid& grid, std::uint64_t seed, double beta, int band)
{
    check_band(grid, band);
    std::mt19937_64 rng(seed);
    VectorSpectrum comps;
    for (int a = 0; a < grid.dim(); ++a) {
        comps.push_back(random_spectrum(grid, rng, beta, band));
    }
    for (auto& c : comps) {
        c[0] = 0.0;
    }
    return inverse_transform(leray_project(comps));
}

std::vector<ScalarField> random_family_2d(const RandomFieldSpec& spec)
{
    if (spec.dim != 2) {
        throw PreconditionError("random_family_2d needs dim = 2");
    }
    spec.validate();
    const Grid g(2, spec.n, spec.box_length);
    std::vector<ScalarField> out(static_cast<std::size_t>(spec.count), ScalarField(g));
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = random_scalar_field(g, spec.seed + i, spec.beta, spec.band);
    });
    return out;
}

std::vector<VectorField> random_family_3d(const RandomFieldSpec& spec)
{
    if (spec.dim != 3) {
        throw PreconditionError("random_family_3d needs dim = 3");
    }
    spec.validate();
    const Grid g(3, spec.n, spec.box_length);
    std::vector<VectorField> out(static_cast<std::size_t>(spec.count), VectorField(g));
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = random_vector_field(g, spec.seed + i, spec.beta, spec.band);
    });
    return out;
}

Ratio bb_ratio_2d(const ScalarField& w)
{
    const auto v = velocity_from_vorticity_2d(w);
    const double numerator = lp_norm(v.field(), kInf) + lp_norm(gradient_tensor(v.field()), 2.0);
    return make_ratio(numerator, lp_norm(gradient(w), 1.0), w.max_abs() * w.grid().volume() / w.grid().box_length());
}

Ratio bb_ratio_3d(const VectorField& w)
{
    const auto v = velocity_from_vorticity_3d(w);
    const double numerator = lp_norm(v.field(), 3.0) + lp_norm(gradient_tensor(v.field()), 1.5);
    return make_ratio(numerator, lp_norm(curl3d(w), 1.0), w.max_abs() * w.grid().volume() / w.grid().box_length());
}

Ratio gn_ratio(const ScalarField& w)
{
    if (!has_zero_mean(w)) {
        throw PreconditionError("gn_ratio needs a mean-zero field");
    }
    return make_ratio(lp_norm(w, 2.0), lp_norm(gradient(w), 1.0), w.max_abs() * w.grid().volume() / w.grid().box_length());
}

RatioReport ratio_family(RatioKind kind, const RandomFieldSpec& spec, const std::vector<int>& n_list)
{
    if (n_list.empty()) {
        throw PreconditionError("ratio_family needs at least one resolution");
    }
    const int dim = kind == RatioKind::bb3d ? 3 : 2;
    if (spec.dim != dim) {
        throw PreconditionError("random field dimension does not match the ratio kind");
    }
    RatioReport report;
    for (int n : n_list) {
        RandomFieldSpec at = spec;
        at.n = n;
        at.validate();
        const Grid g(dim, n, spec.box_length);
        std::vector<std::optional<Ratio>> ratios(static_cast<std::size_t>(spec.count));
        parallel_for(ratios.size(), [&](std::size_t i) {
            const std::uint64_t seed = spec.seed + i;
            try {
                if (kind == RatioKind::bb3d) {
                    ratios[i] = bb_ratio_3d(random_vector_field(g, seed, spec.beta, spec.band));
                } else {
                    const ScalarField w = random_scalar_field(g, seed, spec.beta, spec.band);
                    ratios[i] = kind == RatioKind::bb2d ? bb_ratio_2d(w) : gn_ratio(w);
                }
            } catch (const PreconditionError&) {
                ratios[i].reset();
            }
        });
        double max = 0.0, sum = 0.0;
        int kept = 0;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            if (!ratios[i]) {
                ++report.discarded;
                continue;
            }
            report.samples.push_back({spec.seed + i, n, spec.beta, *ratios[i]});
            max = std::max(max, ratios[i]->value);
            sum += ratios[i]->value;
            ++kept;
        }
        report.family_max[n] = max;
        report.family_mean[n] = kept > 0 ? sum / kept : 0.0;
    }
    double previous = -1.0;
    for (int n : n_list) {
        const double m = report.family_max[n];
        if (previous > 0.0) {
            report.refinement_change = std::max(report.refinement_change, std::abs(m - previous) / previous);
        }
        previous = m;
    }
    return report;
}

void write_ratio_csv(std::ostream& out, const RatioReport& report)
{
    out << "seed,n,beta,numerator,denominator,ratio\n";
    for (const auto& s : report.samples) {
        out << s.seed << ',' << s.n << ',' << format_double(s.beta) << ',' << format_double(s.ratio.numerator)
            << ',' << format_double(s.ratio.denominator) << ',' << format_double(s.ratio.value) << '\n';
    }
}

} // namespace vortlab
