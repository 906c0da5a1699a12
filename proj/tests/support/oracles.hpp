#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nullctl/matrix.hpp"
#include "nullctl/vector_field.hpp"

namespace oracle {

// Central difference Jacobian of f at x.
inline nullctl::Matrix fd_jacobian(const nullctl::VectorField& f, std::vector<double> x, double h = 1e-5) {
    const std::size_t n = f.dimension();
    nullctl::Matrix j(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const double saved = x[c];
        x[c] = saved + h;
        const auto plus = f.eval(x);
        x[c] = saved - h;
        const auto minus = f.eval(x);
        x[c] = saved;
        for (std::size_t r = 0; r < n; ++r)
            j(r, c) = (plus[r] - minus[r]) / (2.0 * h);
    }
    return j;
}

// Roots of t^3 + a t^2 + b t + c with three real roots (trigonometric form), ascending.
inline std::array<double, 3> real_cubic_roots(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    std::array<double, 3> r{};
    if (std::abs(p) < 1e-300) {
        r.fill(std::cbrt(-q) - a / 3.0);
        return r;
    }
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
        r[static_cast<std::size_t>(k)] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - a / 3.0;
    std::sort(r.begin(), r.end());
    return r;
}

// Eigenvalues of a symmetric 3x3 via its characteristic polynomial.
inline std::array<double, 3> symmetric3_eigenvalues(const nullctl::Matrix& s) {
    const double tr = s(0, 0) + s(1, 1) + s(2, 2);
    const double minors = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0) + s(0, 0) * s(2, 2) - s(0, 2) * s(2, 0) +
                          s(1, 1) * s(2, 2) - s(1, 2) * s(2, 1);
    const double det = s(0, 0) * (s(1, 1) * s(2, 2) - s(1, 2) * s(2, 1)) -
                       s(0, 1) * (s(1, 0) * s(2, 2) - s(1, 2) * s(2, 0)) +
                       s(0, 2) * (s(1, 0) * s(2, 1) - s(1, 1) * s(2, 0));
    return real_cubic_roots(-tr, minors, -det);
}

// Singular values of a real 2x2 in closed form, descending.
inline std::array<double, 2> singular_values_2x2(double a, double b, double c, double d) {
    const double s1 = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, s1 * s1 - 4.0 * det * det));
    const double big = std::sqrt(0.5 * (s1 + disc));
    const double small = big == 0.0 ? 0.0 : std::abs(det) / big;
    return {big, small};
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    return v < 0 ? "(" + s + ")" : s;
}

// Random polynomial of total degree <= max_degree in x1..xn.
inline std::string random_polynomial(std::mt19937_64& g, std::size_t n, int max_degree, int terms) {
    std::string s;
    for (int t = 0; t < terms; ++t) {
        if (t)
            s += " + ";
        s += fmt(uniform(g, -2.0, 2.0));
        int budget = static_cast<int>(std::uniform_int_distribution<int>(0, max_degree)(g));
        while (budget > 0) {
            const auto v = std::uniform_int_distribution<std::size_t>(1, n)(g);
            const int e = std::uniform_int_distribution<int>(1, budget)(g);
            s += "*x" + std::to_string(v) + (e > 1 ? "^" + std::to_string(e) : "");
            budget -= e;
        }
    }
    return s;
}

// Random smooth component mixing polynomials with sin/cos/exp/tanh/sqrt/ln of
// arguments kept inside their domains.
inline std::string random_smooth(std::mt19937_64& g, std::size_t n) {
    auto var = [&] { return "x" + std::to_string(std::uniform_int_distribution<std::size_t>(1, n)(g)); };
    std::string s = random_polynomial(g, n, 3, 2);
    const int extra = std::uniform_int_distribution<int>(1, 3)(g);
    for (int k = 0; k < extra; ++k) {
        const double c = uniform(g, -1.5, 1.5);
        switch (std::uniform_int_distribution<int>(0, 6)(g)) {
        case 0:
            s += " + " + fmt(c) + "*sin(" + fmt(uniform(g, 0.2, 2.0)) + "*" + var() + ")";
            break;
        case 1:
            s += " + " + fmt(c) + "*cos(" + var() + " - " + var() + ")";
            break;
        case 2:
            s += " + " + fmt(c) + "*exp(0.3*" + var() + ")";
            break;
        case 3:
            s += " + " + fmt(c) + "*tanh(" + var() + "*" + var() + ")";
            break;
        case 4:
            s += " + " + fmt(c) + "*sqrt(1 + " + var() + "^2)";
            break;
        case 5:
            s += " + " + fmt(c) + "*ln(2 + sin(" + var() + "))";
            break;
        default:
            s += " + " + fmt(c) + "*" + var() + "/(1 + " + var() + "^2)";
            break;
        }
    }
    return s;
}

inline std::vector<std::string> random_field(std::mt19937_64& g, std::size_t n, bool polynomial_only) {
    std::vector<std::string> comps;
    for (std::size_t i = 0; i < n; ++i)
        comps.push_back(polynomial_only ? random_polynomial(g, n, 3, 4) : random_smooth(g, n));
    return comps;
}

} // namespace oracle
