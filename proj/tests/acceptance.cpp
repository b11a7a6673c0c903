#include "oracles.hpp"

#include "vortlab/bb_lab.hpp"
#include "vortlab/biot_savart.hpp"
#include "vortlab/config.hpp"
#include "vortlab/grid.hpp"
#include "vortlab/maxwell.hpp"
#include "vortlab/mild_solver.hpp"
#include "vortlab/norms.hpp"
#include "vortlab/oseen.hpp"
#include "vortlab/parallel.hpp"
#include "vortlab/runner.hpp"
#include "vortlab/spectral.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace vortlab;
using nlohmann::json;
namespace fs = std::filesystem;
using oracle::pi;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

struct Run {
    json summary;
    fs::path csv;
    double seconds = 0.0;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs a shipped config into out/<tag>/<stem> and keeps the CSV for the determinism check.
class Runner {
public:
    Runner(fs::path configs, fs::path out) : configs_(std::move(configs)), out_(std::move(out)) {}

    const Run& run(const std::string& stem)
    {
        auto it = runs_.find(stem);
        if (it != runs_.end()) {
            return it->second;
        }
        ExperimentConfig cfg = load_config((configs_ / (stem + ".cfg")).string());
        cfg.set_out_dir((out_ / "first" / stem).string());
        const auto t0 = std::chrono::steady_clock::now();
        const RunOutcome o = run_experiment(cfg);
        Run r;
        r.seconds = seconds_since(t0);
        r.summary = json::parse(slurp(o.json)).at("results");
        r.csv = o.csv;
        return runs_.emplace(stem, std::move(r)).first->second;
    }

    const std::map<std::string, Run>& runs() const { return runs_; }

    fs::path rerun(const std::string& stem) const
    {
        ExperimentConfig cfg = load_config((configs_ / (stem + ".cfg")).string());
        cfg.set_out_dir((out_ / "second" / stem).string());
        return run_experiment(cfg).csv;
    }

private:
    fs::path configs_;
    fs::path out_;
    std::map<std::string, Run> runs_;
};

double rel(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

void c1(Runner& runner, Verdict& v)
{
    const Run& r = runner.run("oseen-scaling");
    const json& s = r.summary;
    const double grad = oracle::oseen_gradient_l1();
    const double peak = oracle::oseen_velocity_peak();
    const double sw = s.at("slope_W11"), sv = s.at("slope_Linf_v");
    v.detail << "slope W11 " << sw << ", slope Linf_v " << sv;
    v.require(std::abs(sw + 0.5) <= 0.03, "W11 slope");
    v.require(std::abs(sv + 0.5) <= 0.03, "Linf_v slope");
    double worst_grad = 0.0, worst_v = 0.0;
    double worst_grad_t = 0.0;
    for (const auto& row : s.at("prefactors")) {
        const double eg = rel(row.at("grad_l1_prefactor"), grad);
        if (eg > worst_grad) {
            worst_grad = eg;
            worst_grad_t = row.at("t");
        }
        worst_v = std::max(worst_v, rel(row.at("linf_v_prefactor"), peak));
    }
    v.detail << "; prefactor errors grad " << worst_grad << " (worst at t=" << worst_grad_t << "), v " << worst_v
             << "; " << r.seconds << " s";
    v.require(worst_grad <= 5e-3, "gradient prefactor within 0.5% at every t");
    v.require(worst_v <= 5e-3, "velocity prefactor within 0.5% at every t");
    v.require(r.seconds < 30.0, "runtime < 30 s");
}

void c2(Runner& runner, Verdict& v)
{
    const Run& r = runner.run("picard");
    const json& ref = r.summary.at("reference");
    const double var = ref.at("Linf_v_variation");
    v.detail << "sup/inf ||v||_inf on [t0/100, t0] = " << ref.at("Linf_v_sup").get<double>() << "/"
             << ref.at("Linf_v_inf").get<double>() << ", variation " << var << "; " << r.seconds << " s";
    v.require(var < 0.10, "variation < 10%");
    v.require(r.seconds < 120.0, "runtime < 2 min");
}

void c3(Runner& runner, Verdict& v)
{
    const Run& dipole = runner.run("picard");
    const Run& modes = runner.run("picard-two-mode");
    const double a = modes.summary.at("reference").at("relative_sup_W11_difference");
    const double b = dipole.summary.at("reference").at("relative_sup_W11_difference");
    const double total = dipole.seconds + modes.seconds;
    v.detail << "relative sup W11 difference two-mode " << a << ", dipole " << b << "; " << total << " s";
    v.require(modes.summary.at("converged").get<bool>() && dipole.summary.at("converged").get<bool>(),
              "Picard converged");
    v.require(a <= 5e-3, "two-mode within 0.5%");
    v.require(b <= 5e-3, "dipole within 0.5%");
    v.require(total < 300.0, "runtime < 5 min");
}

void c4(Runner& runner, Verdict& v)
{
    const Run& r = runner.run("picard-horizon");
    const double t0 = r.summary.at("horizon").at("t0");
    double worst_iter = 0.0;
    for (const auto& it : r.summary.at("iterations")) {
        worst_iter = std::max(worst_iter, it.at("ratio").get<double>());
    }
    v.require(r.summary.at("converged").get<bool>(), "Picard converged at the selected horizon");
    v.require(worst_iter < 1.0, "successive-difference ratios < 1");

    const ExperimentConfig cfg = load_config(std::string(VORTLAB_CONFIG_DIR) + "/picard-horizon.cfg");
    const Grid g(2, cfg.n, cfg.box_length);
    const ScalarField w0 = oseen_dipole(cfg.real("alpha"), cfg.box_length / 4.0, g, cfg.real("t_init"));
    MildSolveConfig solve;
    solve.nt = static_cast<int>(cfg.integer("nt"));
    solve.quad_m = static_cast<int>(cfg.integer("quad_m"));
    std::vector<double> ratios;
    for (int h = 0; h < 4; ++h) {
        solve.t0 = t0 / std::pow(2.0, h);
        ratios.push_back(first_contraction_ratio(w0, solve));
    }
    v.detail << "t0 " << t0 << ", largest iteration ratio " << worst_iter << "; first ratios";
    for (double x : ratios) {
        v.detail << ' ' << x;
    }
    v.detail << "; halving factors";
    const double target = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 1; i < ratios.size(); ++i) {
        const double f = ratios[i] / ratios[i - 1];
        v.detail << ' ' << f;
        v.require(ratios[i] < ratios[i - 1], "ratio decreases when t0 is halved");
        v.require(std::abs(f - target) <= 0.2 * target, "halving factor within 1/sqrt2 +- 20%");
    }
    for (double x : ratios) {
        v.require(x < 1.0, "ratio < 1");
    }
}

void c5(Runner& runner, Verdict& v)
{
    const Run& r = runner.run("continuous-dependence");
    const double slope = r.summary.at("slope");
    v.detail << "log-log slope " << slope << " over eps";
    for (const auto& row : r.summary.at("rows")) {
        v.detail << ' ' << row.at("eps").get<double>();
    }
    v.require(std::abs(slope - 1.0) <= 0.1, "slope 1.0 +- 0.1");
}

double curl_inverse_error_2d(const ScalarField& w)
{
    const VectorField u = velocity_from_vorticity_2d(w);
    return lp_norm(curl2d(u) - w, 2.0) / lp_norm(w, 2.0);
}

double curl_inverse_error_3d(const VectorField& w)
{
    const VectorField u = velocity_from_vorticity_3d(w);
    return lp_norm(curl3d(u) - w, 2.0) / lp_norm(w, 2.0);
}

void c6(Verdict& v)
{
    const auto t0 = std::chrono::steady_clock::now();
    RandomFieldSpec s2;
    s2.seed = 1000;
    s2.count = 100;
    s2.n = 64;
    s2.band = 16;
    double worst2 = 0.0;
    for (const auto& w : random_family_2d(s2)) {
        worst2 = std::max(worst2, curl_inverse_error_2d(w));
    }
    RandomFieldSpec s3 = s2;
    s3.dim = 3;
    s3.n = 32;
    s3.band = 8;
    double worst3 = 0.0;
    for (const auto& w : random_family_3d(s3)) {
        worst3 = std::max(worst3, curl_inverse_error_3d(w));
    }

    const Grid g2(2, 32, 2 * pi);
    const Grid g3(3, 16, 2 * pi);
    auto cosine = [](std::span<const double> x) { return std::cos(x[0]); };
    auto sine = [](std::span<const double> x) { return std::sin(x[0]); };
    const VectorField u2 = velocity_from_vorticity_2d(ScalarField::from_function(g2, cosine));
    VectorField e2(g2);
    e2[1] = ScalarField::from_function(g2, sine);
    VectorField w3(g3);
    w3[2] = ScalarField::from_function(g3, cosine);
    const VectorField u3 = velocity_from_vorticity_3d(w3);
    VectorField e3(g3);
    e3[1] = ScalarField::from_function(g3, sine);
    const double mode2 = lp_norm(u2 - e2, kInf);
    const double mode3 = lp_norm(u3 - e3, kInf);
    const double secs = seconds_since(t0);
    v.detail << "curl(BS w) relative L2 error 2D " << worst2 << ", 3D " << worst3 << " (100 fields each); cos mode "
             << mode2 << " / " << mode3 << "; " << secs << " s";
    v.require(worst2 <= 1e-8 && worst3 <= 1e-8, "curl inverse identity to 1e-8");
    v.require(mode2 <= 1e-10 && mode3 <= 1e-10, "single-mode closed form to 1e-10");
    v.require(secs < 60.0, "runtime < 1 min");
}

void family_check(const Run& r, Verdict& v, const char* name)
{
    const double change = r.summary.at("refinement_change");
    v.detail << name << " family max";
    for (const auto& row : r.summary.at("resolutions")) {
        v.detail << " n=" << row.at("n").get<int>() << ": " << row.at("family_max").get<double>();
    }
    v.detail << " (change " << change << "); ";
    v.require(r.summary.at("discarded").get<int>() == 0, std::string(name) + " no discarded samples");
    v.require(change < 0.10, std::string(name) + " refinement change < 10%");
}

void c7(Runner& runner, Verdict& v)
{
    family_check(runner.run("bb-ratio-2d"), v, "bb2d");
    family_check(runner.run("bb-ratio-3d"), v, "bb3d");
    const Grid g(2, 128, 2 * pi);
    const ScalarField w = ScalarField::from_function(g, [](std::span<const double> x) { return std::cos(x[0]); });
    const double expected =
        (1.0 + std::sqrt(oracle::periodic_abs_power(2.0) * 2 * pi)) / (oracle::periodic_abs_power(1.0) * 2 * pi);
    const double got = bb_ratio_2d(w).value;
    v.detail << "cos fixture " << got << " vs " << expected;
    v.require(rel(got, expected) <= 5e-3, "cos fixture within 0.5%");
}

void c8(Runner& runner, Verdict& v)
{
    family_check(runner.run("gn-ratio"), v, "gn");
    const Grid g(2, 128, 2 * pi);
    const ScalarField w = ScalarField::from_function(g, [](std::span<const double> x) { return std::cos(x[0]); });
    const double expected =
        std::sqrt(oracle::periodic_abs_power(2.0) * 2 * pi) / (oracle::periodic_abs_power(1.0) * 2 * pi);
    const double got = gn_ratio(w).value;
    v.detail << "cos fixture " << got << " vs " << expected;
    v.require(rel(got, expected) <= 5e-3, "cos fixture within 0.5%");
}

void c9(Runner& runner, Verdict& v)
{
    const Run& r = runner.run("wave-fixture");
    const double fixture = r.summary.at("max_fixture_error");
    const double energy = r.summary.at("max_energy_relative_deviation");
    const double div = r.summary.at("max_relative_divergence");
    v.detail << "fixture error " << fixture << ", energy deviation " << energy << ", divergence " << div << " over [0, "
             << r.summary.at("T").get<double>() << "]; " << r.seconds << " s";
    v.require(fixture <= 1e-6, "fixture to 1e-6");
    v.require(energy <= 1e-8, "energy to 1e-8");
    v.require(div <= 1e-10, "divergence to 1e-10");
    v.require(r.seconds < 60.0, "runtime < 1 min");
}

bool direct_admissible(double q, double r, double qt, double s, double k)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const bool ranges = q >= 2 && q <= inf && qt > 2 && qt <= inf && r >= 2 && r < inf;
    if (!ranges) {
        return false;
    }
    const double iq = q == inf ? 0.0 : 1.0 / q;
    const double ir = 1.0 / r;
    const double iqt_dual = qt == inf ? 1.0 : (qt - 1.0) / qt;
    const bool wave = iq + ir <= 0.5 + 1e-12;
    const bool scale_s = std::abs(iq + 3 * ir - (1.5 - s)) <= 1e-12;
    const bool scale_k = std::abs(iq + 3 * ir - (iqt_dual + 1.0 - k)) <= 1e-12;
    return wave && scale_s && scale_k;
}

void c10(Verdict& v)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(20240601);
    const std::vector<double> qs{1, 1.5, 2, 2.5, 3, 4, 5, 6, 8, 10, inf};
    auto pick = [&](const std::vector<double>& xs) { return xs[rng() % xs.size()]; };
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    int disagreements = 0, admissible = 0;
    for (int i = 0; i < 10000; ++i) {
        const double q = pick(qs), r = pick(qs), qt = pick(qs);
        const double iq = q == inf ? 0.0 : 1.0 / q;
        const double ir = r == inf ? 0.0 : 1.0 / r;
        const double iqt_dual = qt == inf ? 1.0 : (qt - 1.0) / qt;
        // Half of the tuples sit exactly on the scaling relations.
        double s = 1.5 - iq - 3 * ir;
        double k = iqt_dual + 1.0 - iq - 3 * ir;
        if (rng() % 2 == 0) {
            s += jitter(rng);
        }
        if (rng() % 2 == 0) {
            k += jitter(rng);
        }
        const bool expected = direct_admissible(q, r, qt, s, k);
        const bool got = strichartz_admissible({q, r, qt, s, k}).admissible;
        disagreements += expected != got ? 1 : 0;
        admissible += expected ? 1 : 0;
    }
    const bool fixture_ok = strichartz_admissible({4, 4, 4, 0.5, 0.75}).admissible;
    const auto qt2 = strichartz_admissible({4, 4, 2, 0.5, 0.5});
    const bool qt2_rejected = !qt2.admissible && !qt2.violations.empty() &&
                              qt2.violations.front() == "range 2 < qt <= inf violated";
    v.detail << disagreements << " disagreements in 10000 tuples (" << admissible
             << " admissible); (4,4,4,1/2,3/4) " << (fixture_ok ? "admissible" : "rejected") << "; qt=2 "
             << (qt2_rejected ? "rejected" : "accepted");
    v.require(disagreements == 0, "predicate agrees with direct substitution");
    v.require(admissible > 0, "sample hits admissible tuples");
    v.require(fixture_ok, "fixture tuple admissible");
    v.require(qt2_rejected, "qt = 2 rejected");
}

void c11(Runner& runner, Verdict& v)
{
    const Run& r = runner.run("maxwell-strichartz");
    family_check(r, v, "LHS/RHS");
    v.detail << "T " << r.summary.at("T").get<double>() << "; " << r.seconds << " s";
    v.require(r.seconds < 300.0, "runtime < 5 min");
}

void c12(Runner& runner, Verdict& v)
{
    const int first = thread_count();
    const int second = first == 4 ? 1 : 4;
    set_thread_count(second);
    int identical = 0, differing = 0;
    for (const auto& [stem, run] : runner.runs()) {
        const fs::path again = runner.rerun(stem);
        if (slurp(again) == slurp(run.csv)) {
            ++identical;
        } else {
            ++differing;
            v.detail << "differs: " << stem << "; ";
        }
    }
    set_thread_count(first);
    v.detail << identical << " CSVs byte-identical between " << first << " and " << second << " threads";
    v.require(differing == 0 && identical > 0, "byte-identical CSV");
}

} // namespace

int main()
{
    const fs::path out = fs::path(VORTLAB_ACCEPTANCE_OUT);
    fs::remove_all(out);
    Runner runner(VORTLAB_CONFIG_DIR, out);

    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"C1 Lamb-Oseen sharpness", [&](Verdict& v) { c1(runner, v); }},
        {"C2 bounded velocity for BV data", [&](Verdict& v) { c2(runner, v); }},
        {"C3 Picard vs reference stepper", [&](Verdict& v) { c3(runner, v); }},
        {"C4 contraction behaviour", [&](Verdict& v) { c4(runner, v); }},
        {"C5 continuous dependence", [&](Verdict& v) { c5(runner, v); }},
        {"C6 Biot-Savart exactness", [&](Verdict& v) { c6(v); }},
        {"C7 Bourgain-Brezis ratio stability", [&](Verdict& v) { c7(runner, v); }},
        {"C8 Gagliardo-Nirenberg ratio", [&](Verdict& v) { c8(runner, v); }},
        {"C9 Maxwell wave solver", [&](Verdict& v) { c9(runner, v); }},
        {"C10 Strichartz admissibility", [&](Verdict& v) { c10(v); }},
        {"C11 Strichartz ratio suite", [&](Verdict& v) { c11(runner, v); }},
        {"C12 determinism", [&](Verdict& v) { c12(runner, v); }},
    };

    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            check(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        const double secs = seconds_since(t0);
        std::printf("%s %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.str().c_str(), secs);
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
