#pragma once

#include <cstddef>

#include "nullctl/expression.hpp"

namespace nullctl {

// u(t) <= c1 + int_0^t (u v1 + w1) implies
// u(t) <= exp(int v1) [c1 + rho (exp(int w1 / rho) - 1)] for any rho > 0.
struct GronwallInput {
    double c1 = 1.0;
    Expression v1; // expressions in the single variable t
    Expression w1;
    double rho = 1.0;
    double horizon = 1.0;
};

// Checks c1 > 0, rho > 0, horizon > 0 and v1, w1 >= 0 on a uniform grid.
void validate(const GronwallInput& input, std::size_t grid_points = 101);

[[nodiscard]] double gronwall_bound(const GronwallInput& input, double t);

struct GronwallReport {
    bool passed = false;
    double worst_ratio = 0.0; // max over samples of u(t) / bound(t)
    double worst_time = 0.0;
    std::size_t samples = 0;
};

// Integrates the equality case u' = u v1 + w1, u(0) = c1 and compares it with
// the bound at evenly spaced sample times.
[[nodiscard]] GronwallReport gronwall_oracle_check(const GronwallInput& input, std::size_t samples);

// Product of those of k1, T, omega that exceed 1 (1 when none do).
[[nodiscard]] double select_rho(double k1, double T, double omega);

} // namespace nullctl
