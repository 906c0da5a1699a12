#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nullctl/matrix.hpp"

namespace nullctl {

using Complex = std::complex<double>;

// Eigen-decomposition of a square real matrix. `eigenvectors` holds unit-norm
// columns and is only populated when the eigenvalues are pairwise distinct.
struct Spectrum {
    std::vector<Complex> eigenvalues;
    ComplexMatrix eigenvectors;
    bool distinct = false;
};

// sqrt(lambda_max(A^T A)). Closed form for Gram matrices up to 2x2, cyclic Jacobi above.
[[nodiscard]] double spectral_norm(const Matrix& a);
[[nodiscard]] double spectral_norm(const ComplexMatrix& a);

// Ascending eigenvalues of a symmetric matrix (only the upper triangle is read).
[[nodiscard]] std::vector<double> symmetric_eigenvalues(const Matrix& s);

// Descending singular values (one-sided Jacobi).
[[nodiscard]] std::vector<double> singular_values(const Matrix& a);

// Eigenvalues via balancing, Hessenberg reduction and Francis double-shift QR.
// Complex conjugate pairs are adjacent, positive imaginary part first.
[[nodiscard]] std::vector<Complex> eigenvalues(const Matrix& a);

[[nodiscard]] Spectrum eigen(const Matrix& a);

// [B, AB, ..., A^{n-1}B]
[[nodiscard]] Matrix controllability_matrix(const Matrix& a, const Matrix& b);

inline constexpr double kDefaultRankTolerance = 1e-10;

// Number of singular values above tol_rel * sigma_max * max(rows, cols).
[[nodiscard]] std::size_t rank(const Matrix& m, double tol_rel = kDefaultRankTolerance);

// ||P|| * ||P^{-1}|| for the eigenvector matrix P; throws when the spectrum is not distinct.
[[nodiscard]] double eigvec_condition(const Spectrum& s);

[[nodiscard]] double determinant(const Matrix& a);

// Solves A X = B by LU with partial pivoting; throws NumericalError when A is singular.
[[nodiscard]] Matrix solve(const Matrix& a, const Matrix& b);

[[nodiscard]] ComplexMatrix inverse(const ComplexMatrix& a);

// sigma_max / sigma_min; infinity for rank-deficient input.
[[nodiscard]] double condition_number(const Matrix& a);

} // namespace nullctl
