#include "nullctl/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nullctl/error.hpp"

namespace nullctl {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

bool finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

Vector integrate_dopri5(const OdeRhs& rhs, double t0, std::span<const double> y0, double t1,
                        const Dopri5Options& options, const StepObserver& observer) {
    if (!(options.rtol > 0.0) || !(options.atol > 0.0))
        throw InvalidArgument("integrator tolerances must be positive");
    if (!(t1 >= t0))
        throw InvalidArgument("integration interval must satisfy t1 >= t0");

    const std::size_t n = y0.size();
    Vector y(y0.begin(), y0.end());
    Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);

    double t = t0;
    if (observer)
        observer(t, y);
    if (t1 == t0)
        return y;

    rhs(t, y, k1);
    auto err_norm = [&](std::span<const double> a, std::span<const double> b, std::span<const double> err) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = options.atol + options.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
            sum += (err[i] / sc) * (err[i] / sc);
        }
        return n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
    };

    double h = options.initial_step;
    if (h <= 0.0) {
        const double d0 = err_norm(y, y, y);
        const double d1 = err_norm(y, y, k1);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, t1 - t0);
    }
    const double span_len = t1 - t0;
    if (options.max_step > 0.0)
        h = std::min(h, options.max_step);

    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > options.max_steps)
            throw SimulationError(SimulationError::Kind::StepSizeUnderflow, "integrator exceeded the step budget");
        const double min_h = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), span_len);
        if (h < min_h)
            throw SimulationError(SimulationError::Kind::StepSizeUnderflow,
                                  "step size underflow at t = " + std::to_string(t));
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double err = finite(ynew) ? err_norm(y, ynew, tmp) : std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            t = last ? t1 : t + h;
            y.swap(ynew);
            k1.swap(k7);
            if (observer)
                observer(t, y);
            const double factor = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            h *= factor;
        } else {
            const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.1;
            h *= factor;
        }
        if (options.max_step > 0.0)
            h = std::min(h, options.max_step);
    }
    return y;
}

Vector integrate_rk4(const OdeRhs& rhs, double t0, std::span<const double> y0, double t1, std::size_t steps,
                     const StepObserver& observer) {
    if (steps == 0)
        throw InvalidArgument("RK4 needs at least one step");
    const std::size_t n = y0.size();
    Vector y(y0.begin(), y0.end());
    Vector k1(n), k2(n), k3(n), k4(n), tmp(n);
    const double h = (t1 - t0) / static_cast<double>(steps);
    if (observer)
        observer(t0, y);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + h * static_cast<double>(s);
        rhs(t, y, k1);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (observer)
            observer(s + 1 == steps ? t1 : t + h, y);
    }
    return y;
}

} // namespace nullctl
