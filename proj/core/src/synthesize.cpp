#include "nullctl/synthesize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nullctl/error.hpp"

namespace nullctl {

void validate_poles(std::span<const Complex> poles) {
    for (std::size_t i = 0; i < poles.size(); ++i) {
        const Complex p = poles[i];
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
            throw InvalidArgument("poles must be finite");
        if (!(p.real() < 0.0))
            throw InvalidArgument("every pole needs a negative real part");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(p - poles[j]) <= kPoleGap)
                throw InvalidArgument("poles must be pairwise distinct");
        if (p.imag() != 0.0) {
            const bool has_conjugate = std::any_of(poles.begin(), poles.end(), [&](const Complex& q) {
                return std::abs(q - std::conj(p)) <= kPoleGap;
            });
            if (!has_conjugate)
                throw InvalidArgument("complex poles must appear in conjugate pairs");
        }
    }
}

bool is_regular(const Matrix& b) {
    if (!b.square() || b.empty())
        return false;
    const double norm = spectral_norm(b);
    if (norm == 0.0)
        return false;
    return std::abs(determinant(b)) > 1e-12 * std::pow(norm, static_cast<double>(b.rows()));
}

Matrix gain_invertible_B(const Matrix& a, const Matrix& b, std::span<const Complex> poles) {
    const std::size_t n = a.rows();
    if (!a.square() || b.rows() != n || poles.size() != n)
        throw InvalidArgument("gain_invertible_B: dimension mismatch");
    if (!is_regular(b))
        throw SynthesisError("B is singular; the closed-form gain needs an invertible B");
    validate_poles(poles);
    Matrix delta(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (poles[i].imag() != 0.0)
            throw SynthesisError("the invertible-B gain requires real poles");
        delta(i, i) = poles[i].real();
    }
    return solve(b, delta - a);
}

namespace {

// Real coefficients c_0..c_n (c_n = 1) of prod (s - p_i).
std::vector<double> characteristic_coefficients(std::span<const Complex> poles) {
    std::vector<Complex> c{Complex(1.0)};
    for (const Complex& p : poles) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= p * c[k];
        }
        c = std::move(next);
    }
    std::vector<double> real(c.size());
    for (std::size_t k = 0; k < c.size(); ++k)
        real[k] = c[k].real();
    return real;
}

} // namespace

Matrix gain_single_input(const Matrix& a, const Matrix& b, std::span<const Complex> poles) {
    const std::size_t n = a.rows();
    if (!a.square() || b.rows() != n || b.cols() != 1 || poles.size() != n)
        throw InvalidArgument("gain_single_input: dimension mismatch");
    validate_poles(poles);
    const Matrix c = controllability_matrix(a, b);
    if (rank(c) < n)
        throw SynthesisError("(A, b) is not controllable");
    const double cond = condition_number(c);
    if (!(cond <= 1e12))
        throw SynthesisError("controllability matrix is ill-conditioned (cond = " + std::to_string(cond) +
                             "); supply a gain K explicitly");

    // chi(A) by Horner's rule.
    const auto coeff = characteristic_coefficients(poles);
    Matrix chi = Matrix::identity(n);
    for (std::size_t k = n; k-- > 0;)
        chi = a * chi + coeff[k] * Matrix::identity(n);

    // Row e_n^T C^{-1} is the transpose of the solution of C^T y = e_n.
    Matrix en(n, 1);
    en(n - 1, 0) = 1.0;
    const Matrix y = solve(c.transpose(), en);
    Matrix k = y.transpose() * chi;
    k *= -1.0;
    return k;
}

Matrix synthesize_gain(const Matrix& a, const Matrix& b, std::span<const Complex> poles) {
    if (is_regular(b))
        return gain_invertible_B(a, b, poles);
    if (b.cols() == 1)
        return gain_single_input(a, b, poles);
    throw SynthesisError("no built-in pole placement for a non-square or singular multi-input B; supply K");
}

ClosedLoop validate_gain(const Matrix& a, const Matrix& b, const Matrix& k) {
    const std::size_t n = a.rows();
    if (!a.square() || b.rows() != n || k.rows() != b.cols() || k.cols() != n)
        throw InvalidArgument("validate_gain: dimension mismatch (K must be m x n)");
    const Matrix acl = a + b * k;
    ClosedLoop out;
    out.spectrum = eigen(acl);
    double max_re = -std::numeric_limits<double>::infinity();
    for (const Complex& l : out.spectrum.eigenvalues)
        max_re = std::max(max_re, l.real());
    if (!(max_re < 0.0))
        throw SynthesisError("closed loop A + BK is not Hurwitz (max Re = " + std::to_string(max_re) + ")");
    if (!out.spectrum.distinct)
        throw SynthesisError("closed loop A + BK has repeated eigenvalues");
    out.lambda_tilde = -max_re;
    out.k1 = eigvec_condition(out.spectrum);
    return out;
}

} // namespace nullctl
