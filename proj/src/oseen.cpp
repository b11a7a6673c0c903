#include "vortlab/oseen.hpp"

#include "vortlab/biot_savart.hpp"
#include "vortlab/errors.hpp"
#include "vortlab/field_io.hpp"
#include "vortlab/mild_solver.hpp"
#include "vortlab/norms.hpp"
#include "vortlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace vortlab {

namespace {

constexpr double kPi = std::numbers::pi;

double minimum_image(double dx, double box)
{
    return dx - box * std::round(dx / box);
}

void check_params(const OseenParams& p, const Grid& grid)
{
    if (grid.dim() != 2) {
        throw PreconditionError("Oseen vortex needs a 2D grid");
    }
    if (!(p.t > 0.0)) {
        throw PreconditionError("Oseen vortex needs t > 0");
    }
    const double box = grid.box_length();
    for (double c : p.center) {
        if (!(c >= 0.0 && c < box)) {
            throw PreconditionError("Oseen centre must lie inside the box");
        }
    }
    if (std::sqrt(4.0 * p.t) > box / 16.0) {
        throw PreconditionError("vortex too wide for box: need sqrt(4t) <= L/16");
    }
}

} // namespace

double oseen_gradient_l1_coefficient()
{
    return std::sqrt(kPi) / 2.0;
}

double oseen_velocity_peak_coefficient()
{
    // Stationary point of (1 - e^{-u}) / sqrt(u) solves e^u = 1 + 2u.
    double u = 1.25;
    for (int i = 0; i < 50; ++i) {
        const double f = std::exp(u) - 1.0 - 2.0 * u;
        const double df = std::exp(u) - 2.0;
        u -= f / df;
    }
    return (1.0 - std::exp(-u)) / std::sqrt(u) / (4.0 * kPi);
}

double oseen_max_time(const Grid& grid)
{
    const double w = grid.box_length() / 16.0;
    return w * w / 4.0;
}

ScalarField oseen_vorticity(const OseenParams& p, const Grid& grid)
{
    check_params(p, grid);
    const double box = grid.box_length();
    const double amp = p.alpha / (4.0 * kPi * p.t);
    return ScalarField::from_function(grid, [&](std::span<const double> x) {
        const double dx = minimum_image(x[0] - p.center[0], box);
        const double dy = minimum_image(x[1] - p.center[1], box);
        return amp * std::exp(-(dx * dx + dy * dy) / (4.0 * p.t));
    });
}

VectorField oseen_velocity(const OseenParams& p, const Grid& grid)
{
    check_params(p, grid);
    const double box = grid.box_length();
    auto component = [&](int axis) {
        return ScalarField::from_function(grid, [&](std::span<const double> x) {
            const double dx = minimum_image(x[0] - p.center[0], box);
            const double dy = minimum_image(x[1] - p.center[1], box);
            const double r2 = dx * dx + dy * dy;
            if (r2 == 0.0) {
                return 0.0;
            }
            const double s = p.alpha / (2.0 * kPi) * (-std::expm1(-r2 / (4.0 * p.t))) / r2;
            return axis == 0 ? -dy * s : dx * s;
        });
    };
    return VectorField({component(0), component(1)});
}

ScalarField oseen_dipole(double alpha, double separation, const Grid& grid, double t)
{
    if (!(separation >= 4.0 * std::sqrt(4.0 * t)) || separation > grid.box_length() / 2.0) {
        throw PreconditionError("dipole overlap: need 4 sqrt(4t) <= d <= L/2");
    }
    const double mid = grid.box_length() / 2.0;
    const ScalarField plus = oseen_vorticity({alpha, {mid - separation / 2.0, mid}, t}, grid);
    const ScalarField minus = oseen_vorticity({alpha, {mid + separation / 2.0, mid}, t}, grid);
    return plus - minus;
}

ScalingReport sharpness_scaling_experiment(const Grid& grid, const std::vector<double>& t_list, double alpha)
{
    if (t_list.size() < 2) {
        throw PreconditionError("scaling experiment needs at least two times");
    }
    ScalingReport report;
    report.rows.resize(t_list.size());
    const double mid = grid.box_length() / 2.0;
    parallel_for(t_list.size(), [&](std::size_t i) {
        const OseenParams p{alpha, {mid, mid}, t_list[i]};
        const ScalarField w = oseen_vorticity(p, grid);
        ScalingRow& row = report.rows[i];
        row.t = p.t;
        row.l1 = lp_norm(w, 1.0);
        row.grad_l1 = lp_norm(gradient(w), 1.0);
        row.w11 = row.l1 + row.grad_l1;
        row.linf_v = lp_norm(oseen_velocity(p, grid), kInf);
    });
    std::vector<double> lt, lw, lv, lg;
    for (const auto& row : report.rows) {
        lt.push_back(std::log(row.t));
        lw.push_back(std::log(row.w11));
        lv.push_back(std::log(row.linf_v));
        lg.push_back(std::log(row.grad_l1));
    }
    report.slope_w11 = fit_slope(lt, lw);
    report.slope_linf_v = fit_slope(lt, lv);
    report.slope_grad_l1 = fit_slope(lt, lg);
    return report;
}

void write_scaling_csv(std::ostream& out, const ScalingReport& report)
{
    out << "t,L1,grad_L1,W11,Linf_v\n";
    for (const auto& r : report.rows) {
        out << format_double(r.t) << ',' << format_double(r.l1) << ',' << format_double(r.grad_l1) << ','
            << format_double(r.w11) << ',' << format_double(r.linf_v) << '\n';
    }
    out << "# slope_W11 = " << format_double(report.slope_w11) << '\n';
    out << "# slope_Linf_v = " << format_double(report.slope_linf_v) << '\n';
    out << "# slope_grad_L1 = " << format_double(report.slope_grad_l1) << '\n';
}

BoundedVelocityReport bounded_velocity_experiment(const ScalarField& w0, double t0)
{
    const StepperResult run = reference_stepper(w0, t0, 101);
    BoundedVelocityReport report;
    for (std::size_t j = 1; j < run.solution.size(); ++j) {
        report.times.push_back(run.solution.times[j]);
        report.linf_v.push_back(lp_norm(velocity_from_vorticity_2d(run.solution.fields[j]).field(), kInf));
    }
    report.sup = *std::max_element(report.linf_v.begin(), report.linf_v.end());
    report.inf = *std::min_element(report.linf_v.begin(), report.linf_v.end());
    report.variation = report.sup / report.inf - 1.0;
    return report;
}

} // namespace vortlab
