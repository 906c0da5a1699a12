#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "nullctl/matrix.hpp"

namespace nullctl {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

// Called at the initial point and after every accepted step.
using StepObserver = std::function<void(double t, std::span<const double> y)>;

struct Dopri5Options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double initial_step = 0.0; // 0 selects a step from the initial slope
    double max_step = 0.0;     // 0 means unbounded
    std::size_t max_steps = 2'000'000;
};

// Dormand-Prince 5(4) with standard PI-free step control. Returns y(t1).
// Throws SimulationError(StepSizeUnderflow) if the step collapses.
Vector integrate_dopri5(const OdeRhs& rhs, double t0, std::span<const double> y0, double t1,
                        const Dopri5Options& options = {}, const StepObserver& observer = {});

// Classical fixed-step RK4.
Vector integrate_rk4(const OdeRhs& rhs, double t0, std::span<const double> y0, double t1, std::size_t steps,
                     const StepObserver& observer = {});

} // namespace nullctl
