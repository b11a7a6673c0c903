#include "oracles.hpp"

#include "vortlab/bb_lab.hpp"
#include "vortlab/biot_savart.hpp"
#include "vortlab/errors.hpp"
#include "vortlab/grid.hpp"
#include "vortlab/heat.hpp"
#include "vortlab/mild_solver.hpp"
#include "vortlab/norms.hpp"
#include "vortlab/oseen.hpp"

#include <doctest.h>

#include <sstream>

using namespace vortlab;
using oracle::pi;

namespace {

ScalarField two_mode(const Grid& g, double a)
{
    return ScalarField::from_function(g, [&](std::span<const double> x) {
        return a * (std::cos(g.k0() * x[0]) + std::cos(g.k0() * x[1]));
    });
}

ScalarTrajectory heat_path(const ScalarField& w0, double t0, int nt)
{
    ScalarTrajectory traj;
    traj.times = uniform_times(t0, nt);
    for (double t : traj.times) {
        traj.fields.push_back(heat_evolve(w0, t));
    }
    return traj;
}

MildSolveConfig config(double t0, int nt = 16, int m = 32)
{
    MildSolveConfig cfg;
    cfg.t0 = t0;
    cfg.nt = nt;
    cfg.quad_m = m;
    return cfg;
}

} // namespace

TEST_SUITE("vorticity_mild_solver")
{
    TEST_CASE("config validation")
    {
        CHECK_THROWS_AS(config(0.0).validate(), PreconditionError);
        CHECK_THROWS_AS(config(1.0, 4).validate(), PreconditionError);
        MildSolveConfig bad = config(1.0);
        bad.tol = 0.0;
        CHECK_THROWS_AS(bad.validate(), PreconditionError);
    }

    TEST_CASE("apply_T on zero data")
    {
        const Grid g(2, 16, 2 * pi);
        const ScalarField zero(g);
        const auto cfg = config(0.1, 8, 8);
        const ScalarTrajectory out = apply_T(heat_path(zero, 0.1, 8), zero, cfg);
        for (const auto& f : out.fields) {
            CHECK(f.max_abs() == 0.0);
        }
    }

    TEST_CASE("linear reduction is the heat flow")
    {
        const Grid g(2, 32, 2 * pi);
        const ScalarField w0 = random_scalar_field(g, 4, 2.0, 8);
        auto cfg = config(0.2, 8, 8);
        cfg.nonlinear = false;
        const ScalarTrajectory junk = heat_path(random_scalar_field(g, 5, 2.0, 8), 0.2, 8);
        const ScalarTrajectory out = apply_T(junk, w0, cfg);
        for (std::size_t j = 0; j < out.size(); ++j) {
            CHECK((out.fields[j] - heat_evolve(w0, out.times[j])).max_abs() < 1e-14 * w0.max_abs());
            CHECK(std::abs(out.fields[j].mean()) < 1e-15);
        }
    }

    TEST_CASE("first Picard correction is linear in t0 for a resolved dipole")
    {
        // The product v w is O(1) at s = 0 for a dipole (the partner vortex advects each core), so the
        // first correction int_0^t0 div K * (v w) is O(t0) in W11 while t0 << t_init.
        const Grid g(2, 128, 2 * pi);
        const ScalarField w0 = oseen_dipole(1.0, g.box_length() / 4, g, 0.03);
        std::vector<double> lx, ly;
        for (double t0 : {0.0005, 0.001, 0.002}) {
            const auto cfg = config(t0, 16, 32);
            const ScalarTrajectory in = heat_path(w0, t0, cfg.nt);
            lx.push_back(std::log(t0));
            ly.push_back(std::log(sup_w11_difference(apply_T(in, w0, cfg), in)));
        }
        CHECK(fit_slope(lx, ly) == doctest::Approx(1.0).epsilon(0.1));
    }

    TEST_CASE("picard on zero data")
    {
        const Grid g(2, 16, 2 * pi);
        const PicardResult r = picard_solve(ScalarField(g), config(0.1, 8, 8));
        CHECK(r.trace.converged);
        CHECK(r.trace.iterations.size() == 1u);
        CHECK(sup_w11(r.solution) == 0.0);
    }

    TEST_CASE("picard rejects nonzero circulation")
    {
        const Grid g(2, 16, 2 * pi);
        ScalarField w(g);
        for (double& v : w.samples()) {
            v = 1.0;
        }
        CHECK_THROWS_AS(picard_solve(w, config(0.1, 8, 8)), CirculationError);
    }

    TEST_CASE("picard and the reference stepper agree on small two-mode data")
    {
        const Grid g(2, 32, 2 * pi);
        ScalarField w0 = two_mode(g, 0.05) + 0.02 * random_scalar_field(g, 3, 2.0, 6);
        auto cfg = config(0.5, 16, 64);
        cfg.tol = 1e-12;
        const PicardResult p = picard_solve(w0, cfg);
        REQUIRE(p.trace.converged);
        CHECK(p.trace.within_ball);
        const StepperResult s = reference_stepper(w0, cfg.t0, cfg.nt);
        CHECK(sup_w11_difference(p.solution, s.solution) < 5e-3 * sup_w11(s.solution));
        for (std::size_t i = 2; i < p.trace.iterations.size(); ++i) {
            CHECK(p.trace.iterations[i].difference_sup_w11 < p.trace.iterations[i - 1].difference_sup_w11);
        }
        // Residual of the fixed point.
        CHECK(sup_w11_difference(apply_T(p.solution, w0, cfg), p.solution) <= cfg.tol);
        for (const auto& f : p.solution.fields) {
            CHECK(std::abs(f.mean()) < 1e-12);
        }
    }

    TEST_CASE("large data does not contract")
    {
        const Grid g(2, 32, 2 * pi);
        ScalarField w = random_scalar_field(g, 3, 2.0, 4);
        w *= 100.0 / w.max_abs();
        auto cfg = config(1.0, 16, 16);
        cfg.max_iter = 30;
        CHECK_THROWS_AS(picard_solve(w, cfg), ContractionError);
    }

    TEST_CASE("dipole with the contraction horizon")
    {
        const Grid g(2, 64, 2 * pi);
        const ScalarField w0 = oseen_dipole(1.0, g.box_length() / 4, g, 0.02);
        auto cfg = config(1.0, 16, 32);
        const HorizonChoice h = select_horizon(w0, cfg);
        CHECK(h.first_ratio <= 0.5);
        CHECK(h.t0 == doctest::Approx(h.c_lab / (w11_norm(w0) * w11_norm(w0))));
        cfg.t0 = h.t0;
        cfg.tol = 1e-10 * w11_norm(w0);
        const PicardResult r = picard_solve(w0, cfg);
        CHECK(r.trace.converged);
        CHECK(r.trace.within_ball);
        double sup_v = 0.0;
        for (const auto& report : r.trace.per_time) {
            sup_v = std::max(sup_v, report.at("Linf_v"));
        }
        CHECK(std::isfinite(sup_v));
        CHECK(sup_v > 0.0);

        std::ostringstream csv;
        write_trace_csv(csv, r.solution, r.trace);
        CHECK(csv.str().rfind("t,L1,W11,Linf_v,L2_gradv\n", 0) == 0);
    }

    TEST_CASE("horizon halving and cap")
    {
        const Grid g(2, 32, 2 * pi);
        ScalarField w0 = random_scalar_field(g, 3, 2.0, 4);
        w0 *= 20.0 / w0.max_abs();
        const HorizonChoice big = select_horizon(w0, config(1.0, 16, 16), 64.0, 1.0);
        CHECK(big.first_ratio <= 0.5);
        CHECK(big.t0 <= 1.0);
        const ScalarField tiny = 1e-9 * w0;
        const HorizonChoice capped = select_horizon(tiny, config(1.0, 16, 16), 1.0, 0.25);
        CHECK(capped.t0 == 0.25);
    }

    TEST_CASE("reference stepper linearisation")
    {
        const Grid g(2, 32, 2 * pi);
        const ScalarField w0 = two_mode(g, 1e-3);
        const StepperResult r = reference_stepper(w0, 1.0, 11);
        for (std::size_t j = 0; j < r.solution.size(); ++j) {
            const double decay = std::exp(-r.solution.times[j]);
            CHECK((r.solution.fields[j] - decay * w0).max_abs() < 1e-4 * w0.max_abs());
        }
    }

    TEST_CASE("reference stepper invariants on the dipole")
    {
        const Grid g(2, 64, 2 * pi);
        const ScalarField w0 = oseen_dipole(1.0, g.box_length() / 4, g, 0.02);
        const StepperResult r = reference_stepper(w0, 0.01, 9);
        CHECK(r.max_mean_drift < 1e-12);
        CHECK(r.max_enstrophy_increase <= 1e-10);
        for (const auto& f : r.solution.fields) {
            CHECK(std::abs(f.mean()) < 1e-12);
        }
        for (std::size_t j = 1; j < r.solution.size(); ++j) {
            CHECK(lp_norm(r.solution.fields[j], 2.0) <= lp_norm(r.solution.fields[j - 1], 2.0) * (1 + 1e-10));
        }
    }

    TEST_CASE("reference stepper refinement")
    {
        std::vector<double> sup;
        for (int n : {128, 256}) {
            const Grid g(2, n, 2 * pi);
            const ScalarField w0 = oseen_dipole(1.0, g.box_length() / 4, g, 0.01);
            sup.push_back(sup_w11(reference_stepper(w0, 0.0025, 9).solution));
        }
        CHECK(std::abs(sup[1] - sup[0]) < 2e-3 * sup[1]);
    }

    TEST_CASE("continuous dependence")
    {
        const Grid g(2, 32, 2 * pi);
        const ScalarField w0 = random_scalar_field(g, 3, 2.0, 6);
        const auto cfg = config(0.2, 8, 16);
        const DependenceReport zero = continuous_dependence_experiment(w0, {ScalarField(g)}, cfg);
        CHECK(zero.rows[0].output_sup_w11 == 0.0);

        std::vector<ScalarField> scaled;
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            scaled.push_back(eps * w0);
        }
        const DependenceReport r = continuous_dependence_experiment(w0, scaled, cfg);
        for (const auto& row : r.rows) {
            CHECK(row.ratio > 0.0);
            CHECK(row.ratio < 2.0);
        }
        CHECK(r.slope == doctest::Approx(1.0).epsilon(0.1));
    }

    TEST_CASE("velocity bound against the lab constant")
    {
        const Grid g(2, 128, 2 * pi);
        const ScalarField w0 = oseen_dipole(1.0, g.box_length() / 4, g, 0.01);
        RandomFieldSpec spec;
        spec.count = 16;
        spec.n = 128;
        spec.band = 16;
        const RatioReport family = ratio_family(RatioKind::bb2d, spec, {128});
        const double lab = std::max(family.family_max.at(128), bb_ratio_2d(w0).value);

        auto cfg = config(1.0, 16, 32);
        cfg.t0 = select_horizon(w0, cfg).t0;
        cfg.tol = 1e-10 * w11_norm(w0);
        const PicardResult r = picard_solve(w0, cfg);
        double lhs = 0.0, grad = 0.0;
        for (std::size_t j = 0; j < r.solution.size(); ++j) {
            const auto& rep = r.trace.per_time[j];
            lhs = std::max(lhs, rep.at("Linf_v") + rep.at("L2_gradv"));
            grad = std::max(grad, lp_norm(gradient(r.solution.fields[j]), 1.0));
        }
        CHECK(lhs <= lab * grad * 1.05);
    }

    TEST_CASE("slope fit")
    {
        const std::vector<double> x{0, 1, 2, 3};
        const std::vector<double> y{1, 3, 5, 7};
        CHECK(fit_slope(x, y) == doctest::Approx(2.0));
    }
}
