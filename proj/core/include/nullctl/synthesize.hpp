#pragma once

#include <span>
#include <vector>

#include "nullctl/linalg.hpp"
#include "nullctl/matrix.hpp"

namespace nullctl {

inline constexpr double kPoleGap = 1e-8;

// Throws InvalidArgument unless the poles are pairwise distinct, strictly in
// the left half plane and closed under conjugation.
void validate_poles(std::span<const Complex> poles);

// Square B with |det B| > 1e-12 ||B||^n.
[[nodiscard]] bool is_regular(const Matrix& b);

// K = B^{-1}(diag(poles) - A), so A + BK = diag(poles). Poles must be real.
[[nodiscard]] Matrix gain_invertible_B(const Matrix& a, const Matrix& b, std::span<const Complex> poles);

// Ackermann: K = -e_n^T C^{-1} chi(A), giving eig(A + bK) = poles.
[[nodiscard]] Matrix gain_single_input(const Matrix& a, const Matrix& b, std::span<const Complex> poles);

// Tries the invertible-B formula, then Ackermann; otherwise asks for a user gain.
[[nodiscard]] Matrix synthesize_gain(const Matrix& a, const Matrix& b, std::span<const Complex> poles);

struct ClosedLoop {
    Spectrum spectrum;
    double lambda_tilde = 0.0; // -max Re(eig(A + BK))
    double k1 = 1.0;           // eigenvector-matrix condition number
};

// Throws SynthesisError when A + BK is unstable or has repeated eigenvalues.
[[nodiscard]] ClosedLoop validate_gain(const Matrix& a, const Matrix& b, const Matrix& k);

} // namespace nullctl
