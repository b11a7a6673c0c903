#include "vortlab/runner.hpp"

#include "vortlab/bb_lab.hpp"
#include "vortlab/biot_savart.hpp"
#include "vortlab/field_io.hpp"
#include "vortlab/grid.hpp"
#include "vortlab/maxwell.hpp"
#include "vortlab/mild_solver.hpp"
#include "vortlab/norms.hpp"
#include "vortlab/oseen.hpp"
#include "vortlab/parallel.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#ifndef VORTLAB_VERSION
#define VORTLAB_VERSION "unknown"
#endif

namespace vortlab {

namespace {

using nlohmann::json;

struct Report {
    std::string csv;
    json summary;
};

// ---------------------------------------------------------------- oseen-scaling

struct OseenPlan {
    Grid grid;
    double alpha;
    std::vector<double> t_list;
};

OseenPlan plan_oseen(const ExperimentConfig& cfg)
{
    const Grid grid(2, cfg.n, cfg.box_length);
    const double alpha = cfg.real("alpha");
    if (!(alpha > 0.0) || std::isinf(alpha)) {
        throw PreconditionError("alpha must be positive and finite");
    }
    const double t_max = cfg.is_auto("t_max") ? oseen_max_time(grid) : cfg.real("t_max");
    if (!(t_max > 0.0) || t_max > oseen_max_time(grid) * (1.0 + 1e-12)) {
        throw PreconditionError("vortex too wide for box: need sqrt(4 t_max) <= L/16");
    }
    const double decades = cfg.real("decades");
    const long count = cfg.integer("t_count");
    if (!(decades > 0.0) || count < 2) {
        throw PreconditionError("oseen-scaling needs decades > 0 and t_count >= 2");
    }
    std::vector<double> t_list;
    for (long i = 0; i < count; ++i) {
        t_list.push_back(t_max * std::pow(10.0, -decades + decades * static_cast<double>(i) / (count - 1)));
    }
    return {grid, alpha, t_list};
}

Report run_oseen(const ExperimentConfig& cfg)
{
    const OseenPlan plan = plan_oseen(cfg);
    const ScalingReport r = sharpness_scaling_experiment(plan.grid, plan.t_list, plan.alpha);
    std::ostringstream csv;
    write_scaling_csv(csv, r);
    json rows = json::array();
    for (const auto& row : r.rows) {
        const double st = std::sqrt(row.t);
        rows.push_back({{"t", row.t},
                        {"grad_l1_prefactor", row.grad_l1 * st / plan.alpha},
                        {"linf_v_prefactor", row.linf_v * st / plan.alpha}});
    }
    json s{{"slope_W11", r.slope_w11},
           {"slope_Linf_v", r.slope_linf_v},
           {"slope_grad_L1", r.slope_grad_l1},
           {"closed_form_grad_l1_prefactor", oseen_gradient_l1_coefficient()},
           {"closed_form_linf_v_prefactor", oseen_velocity_peak_coefficient()},
           {"prefactors", rows}};
    return {csv.str(), s};
}

// ---------------------------------------------------------------- picard family

ScalarField initial_vorticity(const ExperimentConfig& cfg, const Grid& grid)
{
    const std::string& kind = cfg.text("initial");
    if (kind == "dipole") {
        const double t_init = cfg.real("t_init");
        if (!(t_init > 0.0)) {
            throw PreconditionError("t_init must be positive");
        }
        const double d = cfg.is_auto("separation") ? grid.box_length() / 4.0 : cfg.real("separation");
        return oseen_dipole(cfg.real("alpha"), d, grid, t_init);
    }
    if (kind == "two-mode") {
        const double a = cfg.real("amplitude");
        const double k0 = grid.k0();
        return ScalarField::from_function(
            grid, [&](std::span<const double> x) { return a * (std::cos(k0 * x[0]) + std::cos(k0 * x[1])); });
    }
    throw PreconditionError("initial must be 'dipole' or 'two-mode'");
}

struct PicardPlan {
    Grid grid;
    ScalarField w0;
    MildSolveConfig solve;
    double a0;
    double c_initial;
    double t_max;
    bool auto_t0;
};

PicardPlan plan_picard(const ExperimentConfig& cfg)
{
    const Grid grid(2, cfg.n, cfg.box_length);
    ScalarField w0 = initial_vorticity(cfg, grid);
    if (!has_zero_mean(w0)) {
        throw CirculationError("initial vorticity has nonzero mean");
    }
    MildSolveConfig solve;
    solve.nt = static_cast<int>(cfg.integer("nt"));
    solve.quad_m = static_cast<int>(cfg.integer("quad_m"));
    solve.max_iter = static_cast<int>(cfg.integer("max_iter"));
    const double tol_rel = cfg.real("tol_rel");
    if (!(tol_rel > 0.0)) {
        throw PreconditionError("tol_rel must be positive");
    }
    const double a0 = w11_norm(w0);
    solve.tol = a0 > 0.0 ? tol_rel * a0 : tol_rel;
    const double c_initial = cfg.real("c_initial");
    const double t_max = cfg.real("t_max");
    if (!(c_initial > 0.0) || !(t_max > 0.0)) {
        throw PreconditionError("c_initial and t_max must be positive");
    }
    const bool auto_t0 = cfg.is_auto("t0");
    solve.t0 = auto_t0 ? std::min(t_max, a0 > 0.0 ? c_initial / (a0 * a0) : t_max) : cfg.real("t0");
    solve.validate();
    return {grid, std::move(w0), solve, a0, c_initial, t_max, auto_t0};
}

json horizon_json(PicardPlan& plan)
{
    if (!plan.auto_t0) {
        return {{"mode", "fixed"}, {"t0", plan.solve.t0}};
    }
    const HorizonChoice h = select_horizon(plan.w0, plan.solve, plan.c_initial, plan.t_max);
    plan.solve.t0 = h.t0;
    return {{"mode", "contraction"},
            {"t0", h.t0},
            {"c_lab", h.c_lab},
            {"first_ratio", h.first_ratio},
            {"halvings", h.halvings}};
}

Report run_picard(const ExperimentConfig& cfg)
{
    PicardPlan plan = plan_picard(cfg);
    json s;
    s["A0"] = plan.a0;
    s["horizon"] = horizon_json(plan);
    const PicardResult result = picard_solve(plan.w0, plan.solve);
    json iterations = json::array();
    for (const auto& it : result.trace.iterations) {
        iterations.push_back({{"sup_W11", it.iterate_sup_w11},
                              {"difference_sup_W11", it.difference_sup_w11},
                              {"ratio", it.ratio}});
    }
    double sup_v = 0.0, sup_gv = 0.0;
    for (const auto& r : result.trace.per_time) {
        sup_v = std::max(sup_v, r.at("Linf_v"));
        sup_gv = std::max(sup_gv, r.at("L2_gradv"));
    }
    s["iterations"] = iterations;
    s["converged"] = result.trace.converged;
    s["within_ball"] = result.trace.within_ball;
    s["sup_W11"] = sup_w11(result.solution);
    s["sup_Linf_v"] = sup_v;
    s["sup_L2_gradv"] = sup_gv;
    if (cfg.boolean("compare_reference")) {
        const StepperResult ref = reference_stepper(plan.w0, plan.solve.t0, plan.solve.nt);
        const double diff = sup_w11_difference(result.solution, ref.solution);
        const BoundedVelocityReport bv = bounded_velocity_experiment(plan.w0, plan.solve.t0);
        s["reference"] = {{"relative_sup_W11_difference", diff / sup_w11(ref.solution)},
                          {"steps", ref.total_steps},
                          {"max_enstrophy_increase", ref.max_enstrophy_increase},
                          {"max_mean_drift", ref.max_mean_drift},
                          {"Linf_v_sup", bv.sup},
                          {"Linf_v_inf", bv.inf},
                          {"Linf_v_variation", bv.variation}};
    }
    std::ostringstream csv;
    write_trace_csv(csv, result.solution, result.trace);
    return {csv.str(), s};
}

// ---------------------------------------------------------------- continuous-dependence

struct DependencePlan {
    PicardPlan picard;
    std::vector<double> eps;
    ScalarField bump;
};

DependencePlan plan_dependence(const ExperimentConfig& cfg)
{
    PicardPlan picard = plan_picard(cfg);
    const std::vector<double> eps = cfg.real_list("eps_list");
    if (eps.size() < 2) {
        throw PreconditionError("eps_list needs at least two amplitudes");
    }
    for (double e : eps) {
        if (!(e > 0.0) || std::isinf(e)) {
            throw PreconditionError("eps_list entries must be positive and finite");
        }
    }
    const Grid& g = picard.grid;
    const double width = cfg.is_auto("bump_width") ? g.box_length() / 16.0 : cfg.real("bump_width");
    if (!(width > 0.0) || width > g.box_length() / 8.0) {
        throw PreconditionError("bump_width must lie in (0, L/8]");
    }
    const double c = g.box_length() / 2.0;
    ScalarField bump = ScalarField::from_function(g, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double xi : x) {
            r2 += (xi - c) * (xi - c);
        }
        return std::exp(-r2 / (2.0 * width * width));
    });
    const double mean = bump.mean();
    for (double& v : bump.samples()) {
        v -= mean;
    }
    return {std::move(picard), eps, std::move(bump)};
}

Report run_dependence(const ExperimentConfig& cfg)
{
    DependencePlan plan = plan_dependence(cfg);
    json s;
    s["A0"] = plan.picard.a0;
    s["horizon"] = horizon_json(plan.picard);
    std::vector<ScalarField> perturbations;
    for (double e : plan.eps) {
        perturbations.push_back(e * plan.bump);
    }
    const DependenceReport r = continuous_dependence_experiment(plan.picard.w0, perturbations, plan.picard.solve);
    std::ostringstream csv;
    csv << "eps,input_W11,output_sup_W11,ratio\n";
    json rows = json::array();
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        csv << format_double(plan.eps[i]) << ',' << format_double(row.input_w11) << ','
            << format_double(row.output_sup_w11) << ',' << format_double(row.ratio) << '\n';
        rows.push_back({{"eps", plan.eps[i]}, {"input_W11", row.input_w11}, {"output_sup_W11", row.output_sup_w11}});
    }
    csv << "# slope = " << format_double(r.slope) << '\n';
    s["rows"] = rows;
    s["slope"] = r.slope;
    return {csv.str(), s};
}

// ---------------------------------------------------------------- ratio families

std::vector<int> resolutions(const ExperimentConfig& cfg)
{
    std::vector<int> n_list{cfg.n};
    for (int n : cfg.integer_list("refine_n")) {
        n_list.push_back(n);
    }
    return n_list;
}

RandomFieldSpec family_spec(const ExperimentConfig& cfg, int dim)
{
    RandomFieldSpec spec;
    spec.seed = cfg.seed;
    spec.beta = cfg.real("beta");
    spec.dim = dim;
    spec.box_length = cfg.box_length;
    spec.count = static_cast<int>(cfg.integer("count"));
    spec.band = static_cast<int>(cfg.integer("band"));
    for (int n : resolutions(cfg)) {
        spec.n = n;
        spec.validate();
    }
    spec.n = cfg.n;
    return spec;
}

RandomFieldSpec fixture_spec(const ExperimentConfig& cfg)
{
    RandomFieldSpec spec;
    spec.seed = cfg.seed;
    spec.beta = cfg.real("beta");
    spec.dim = 3;
    spec.n = cfg.n;
    spec.box_length = cfg.box_length;
    spec.band = static_cast<int>(cfg.integer("band"));
    spec.validate();
    return spec;
}

Report run_family(const ExperimentConfig& cfg, RatioKind kind)
{
    const RandomFieldSpec spec = family_spec(cfg, kind == RatioKind::bb3d ? 3 : 2);
    const RatioReport r = ratio_family(kind, spec, resolutions(cfg));
    std::ostringstream csv;
    write_ratio_csv(csv, r);
    json per_n = json::array();
    for (const auto& [n, max] : r.family_max) {
        per_n.push_back({{"n", n}, {"family_max", max}, {"family_mean", r.family_mean.at(n)}});
    }
    json s{{"resolutions", per_n},
           {"discarded", r.discarded},
           {"refinement_change", r.refinement_change},
           {"domain", "torus, resolution n"}};
    return {csv.str(), s};
}

// ---------------------------------------------------------------- maxwell

StrichartzExponents exponents(const ExperimentConfig& cfg)
{
    StrichartzExponents e{cfg.real("q"), cfg.real("r"), cfg.real("qt"), cfg.real("s"), cfg.real("k")};
    const AdmissibilityVerdict v = strichartz_admissible(e);
    if (!v.admissible) {
        std::string msg = "inadmissible Strichartz exponents:";
        for (const auto& why : v.violations) {
            msg += " " + why + ";";
        }
        throw PreconditionError(msg);
    }
    return e;
}

double wave_horizon(const ExperimentConfig& cfg)
{
    const double T = cfg.is_auto("T") ? cfg.box_length / 4.0 : cfg.real("T");
    if (!(T > 0.0) || T > cfg.box_length / 4.0 * (1.0 + 1e-12)) {
        throw PreconditionError("T must satisfy 0 < T <= L/4 (light cone must not wrap around the torus)");
    }
    return T;
}

void check_wave_lattice(const ExperimentConfig& cfg)
{
    if (cfg.integer("nt") < 2 || cfg.integer("substeps") < 1) {
        throw PreconditionError("wave solver needs nt >= 2 and substeps >= 1");
    }
}

Report run_strichartz(const ExperimentConfig& cfg)
{
    const StrichartzExponents e = exponents(cfg);
    const double T = wave_horizon(cfg);
    check_wave_lattice(cfg);
    const RandomFieldSpec spec = family_spec(cfg, 3);
    const StrichartzReport r = strichartz_ratio_experiment(
        e, cfg.seed, spec.count, spec.beta, spec.band, cfg.box_length, resolutions(cfg), T,
        static_cast<int>(cfg.integer("nt")), WaveOptions{static_cast<int>(cfg.integer("substeps"))});
    std::ostringstream csv;
    write_strichartz_csv(csv, r);
    json per_n = json::array();
    for (const auto& [n, max] : r.family_max) {
        per_n.push_back({{"n", n}, {"family_max", max}});
    }
    json s{{"exponents", {{"q", e.q}, {"r", e.r}, {"qt", e.qt}, {"s", e.s}, {"k", e.k}}},
           {"T", T},
           {"horizon_restriction", "T <= L/4 on the periodic torus"},
           {"resolutions", per_n},
           {"discarded", r.discarded},
           {"refinement_change", r.refinement_change}};
    return {csv.str(), s};
}

Report run_wave_fixture(const ExperimentConfig& cfg)
{
    const Grid g(3, cfg.n, cfg.box_length);
    const double T = wave_horizon(cfg);
    check_wave_lattice(cfg);
    const int nt = static_cast<int>(cfg.integer("nt"));
    const WaveOptions options{static_cast<int>(cfg.integer("substeps"))};
    const double k0 = g.k0();

    VectorField j(g);
    j[2] = ScalarField::from_function(g, [&](std::span<const double> x) { return std::cos(k0 * x[0]); });
    const VectorField zero(g);
    const WaveSolution forced = solve_wave(zero, zero, CurrentDensity::separable(j, [](double) { return 1.0; }), T, nt,
                                           options);

    const RandomFieldSpec spec = fixture_spec(cfg);
    const StrichartzFixture data = random_strichartz_fixture(g, cfg.seed, spec.beta, spec.band);
    const WaveSolution free = solve_wave(data.b0, data.b1, CurrentDensity(), T, nt, options);
    const double e0 = wave_energy(free.b.fields[0], free.db.fields[0]);

    std::ostringstream csv;
    csv << "t,fixture_max_error,energy_relative_deviation,relative_divergence\n";
    double worst_fixture = 0.0, worst_energy = 0.0, worst_div = 0.0;
    for (std::size_t i = 0; i < forced.b.size(); ++i) {
        const double t = forced.b.times[i];
        const double amp = (1.0 - std::cos(k0 * t)) / k0;
        const auto& b = forced.b.fields[i];
        VectorField expected(g);
        expected[1] = ScalarField::from_function(g, [&](std::span<const double> x) { return amp * std::sin(k0 * x[0]); });
        const double err = lp_norm(b - expected, kInf);
        const double energy = std::abs(wave_energy(free.b.fields[i], free.db.fields[i]) - e0) / e0;
        const double div = lp_norm(free.b.fields[i], 2.0) > 0.0 ? relative_divergence(free.b.fields[i]) : 0.0;
        worst_fixture = std::max(worst_fixture, err);
        worst_energy = std::max(worst_energy, energy);
        worst_div = std::max(worst_div, div);
        csv << format_double(t) << ',' << format_double(err) << ',' << format_double(energy) << ','
            << format_double(div) << '\n';
    }
    json s{{"T", T},
           {"max_fixture_error", worst_fixture},
           {"max_energy_relative_deviation", worst_energy},
           {"max_relative_divergence", worst_div}};
    return {csv.str(), s};
}

Report dispatch(const ExperimentConfig& cfg)
{
    switch (cfg.kind) {
    case ExperimentKind::oseen_scaling:
        return run_oseen(cfg);
    case ExperimentKind::picard:
        return run_picard(cfg);
    case ExperimentKind::continuous_dependence:
        return run_dependence(cfg);
    case ExperimentKind::bb_ratio_2d:
        return run_family(cfg, RatioKind::bb2d);
    case ExperimentKind::bb_ratio_3d:
        return run_family(cfg, RatioKind::bb3d);
    case ExperimentKind::gn_ratio:
        return run_family(cfg, RatioKind::gn);
    case ExperimentKind::maxwell_strichartz:
        return run_strichartz(cfg);
    case ExperimentKind::wave_fixture:
        return run_wave_fixture(cfg);
    }
    throw PreconditionError("unknown experiment kind");
}

json config_json(const ExperimentConfig& cfg)
{
    json out;
    for (const auto& [k, v] : cfg.globals()) {
        out[k] = v;
    }
    json section;
    for (const auto& [k, v] : cfg.section()) {
        section[k] = v;
    }
    out[cfg.kind_name] = section;
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::filesystem::filesystem_error("cannot open report for writing", path,
                                                std::make_error_code(std::errc::io_error));
    }
    out << text;
    if (!out) {
        throw std::filesystem::filesystem_error("cannot write report", path,
                                                std::make_error_code(std::errc::io_error));
    }
}

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

const char* version()
{
    return VORTLAB_VERSION;
}

void validate_config(const ExperimentConfig& cfg)
{
    switch (cfg.kind) {
    case ExperimentKind::oseen_scaling:
        plan_oseen(cfg);
        return;
    case ExperimentKind::picard:
        plan_picard(cfg);
        return;
    case ExperimentKind::continuous_dependence:
        plan_dependence(cfg);
        return;
    case ExperimentKind::bb_ratio_2d:
    case ExperimentKind::gn_ratio:
        family_spec(cfg, 2);
        return;
    case ExperimentKind::bb_ratio_3d:
        family_spec(cfg, 3);
        return;
    case ExperimentKind::maxwell_strichartz:
        exponents(cfg);
        wave_horizon(cfg);
        check_wave_lattice(cfg);
        family_spec(cfg, 3);
        return;
    case ExperimentKind::wave_fixture:
        Grid(3, cfg.n, cfg.box_length);
        wave_horizon(cfg);
        check_wave_lattice(cfg);
        fixture_spec(cfg);
        return;
    }
}

RunOutcome run_experiment(const ExperimentConfig& cfg)
{
    const std::string started = utc_timestamp();
    const auto t0 = std::chrono::steady_clock::now();
    Report report = dispatch(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    const std::string stem = cfg.kind_name + "-" + std::to_string(cfg.seed);
    RunOutcome out{dir / (stem + ".csv"), dir / (stem + ".json"), dir / "manifest.json"};

    json summary{{"experiment", cfg.kind_name},
                 {"seed", cfg.seed},
                 {"n", cfg.n},
                 {"box_length", cfg.box_length},
                 {"results", report.summary}};
    write_file(out.csv, report.csv);
    write_file(out.json, summary.dump(2) + "\n");

    json manifest{{"tool", "vortlab"},
                  {"version", version()},
                  {"config", config_json(cfg)},
                  {"resolved_config", resolved_dump(cfg)},
                  {"threads", thread_count()},
                  {"started_at", started},
                  {"wall_clock_seconds", wall},
                  {"outputs", {out.csv.filename().string(), out.json.filename().string()}}};
    write_file(out.manifest, manifest.dump(2) + "\n");
    return out;
}

std::string error_record(const std::string& kind, const std::string& message, int line)
{
    json j{{"error", kind}, {"message", message}};
    if (line > 0) {
        j["line"] = line;
    }
    return j.dump();
}

} // namespace vortlab
