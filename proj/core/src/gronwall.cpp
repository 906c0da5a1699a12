#include "nullctl/gronwall.hpp"

#include <cmath>
#include <string>

#include "nullctl/error.hpp"
#include "nullctl/ode.hpp"
#include "nullctl/quadrature.hpp"

namespace nullctl {

namespace {

constexpr double kQuadTol = 1e-10;
constexpr double kRatioSlack = 1e-8;

void require_signal(const Expression& e, const char* name) {
    if (e.variables().size() != 1)
        throw InvalidArgument(std::string(name) + " must be an expression in the single variable t");
}

// exp(V) [c1 + rho expm1(W / rho)]
double combine(const GronwallInput& in, double v_integral, double w_integral) {
    return std::exp(v_integral) * (in.c1 + in.rho * std::expm1(w_integral / in.rho));
}

} // namespace

void validate(const GronwallInput& input, std::size_t grid_points) {
    if (!(input.c1 > 0.0))
        throw InvalidArgument("c1 must be positive");
    if (!(input.rho > 0.0))
        throw InvalidArgument("rho must be positive");
    if (!(input.horizon > 0.0) || !std::isfinite(input.horizon))
        throw InvalidArgument("horizon must be positive and finite");
    require_signal(input.v1, "v1");
    require_signal(input.w1, "w1");
    if (grid_points < 2)
        grid_points = 2;
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double t = input.horizon * static_cast<double>(k) / static_cast<double>(grid_points - 1);
        if (input.v1.eval(t) < 0.0)
            throw InvalidArgument("v1 is negative at t = " + std::to_string(t));
        if (input.w1.eval(t) < 0.0)
            throw InvalidArgument("w1 is negative at t = " + std::to_string(t));
    }
}

double gronwall_bound(const GronwallInput& input, double t) {
    validate(input);
    if (t < 0.0 || t > input.horizon)
        throw InvalidArgument("t must lie in [0, horizon]");
    const double v = integrate_simpson([&](double s) { return input.v1.eval(s); }, 0.0, t, kQuadTol);
    const double w = integrate_simpson([&](double s) { return input.w1.eval(s); }, 0.0, t, kQuadTol);
    return combine(input, v, w);
}

GronwallReport gronwall_oracle_check(const GronwallInput& input, std::size_t samples) {
    if (samples < 2)
        throw InvalidArgument("oracle check needs at least two samples");
    validate(input);

    GronwallReport report;
    report.samples = samples;
    report.passed = true;

    const OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[0] * input.v1.eval(t) + input.w1.eval(t);
    };
    Dopri5Options opts;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;

    Vector u{input.c1};
    double v_integral = 0.0;
    double w_integral = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = input.horizon * static_cast<double>(k) / static_cast<double>(samples - 1);
        if (t > prev) {
            u = integrate_dopri5(rhs, prev, u, t, opts);
            v_integral += integrate_simpson([&](double s) { return input.v1.eval(s); }, prev, t, kQuadTol);
            w_integral += integrate_simpson([&](double s) { return input.w1.eval(s); }, prev, t, kQuadTol);
            prev = t;
        }
        const double bound = combine(input, v_integral, w_integral);
        const double ratio = u[0] / bound;
        if (ratio > report.worst_ratio || k == 0) {
            report.worst_ratio = ratio;
            report.worst_time = t;
        }
        if (u[0] > bound * (1.0 + kRatioSlack))
            report.passed = false;
    }
    return report;
}

double select_rho(double k1, double T, double omega) {
    if (!(k1 > 0.0) || !(T > 0.0) || !(omega > 0.0))
        throw InvalidArgument("select_rho expects positive arguments");
    double rho = 1.0;
    for (double v : {k1, T, omega})
        if (v > 1.0)
            rho *= v;
    return rho;
}

} // namespace nullctl
