#pragma once

#include <functional>

namespace nullctl {

// Adaptive Simpson quadrature of f over [a, b]. Throws NumericalError when the
// recursion depth limit is reached before the tolerance is met.
[[nodiscard]] double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                                       double abs_tol = 1e-10, int max_depth = 48);

} // namespace nullctl
