#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "nullctl/error.hpp"
#include "nullctl/linalg.hpp"
#include "nullctl/synthesize.hpp"
#include "oracles.hpp"

using namespace nullctl;

namespace {

// Smallest total distance over matchings, found by brute force on small sets.
double matching_error(std::vector<Complex> got, const std::vector<Complex>& want) {
    std::sort(got.begin(), got.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    double best = 1e300;
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < got.size(); ++i)
            worst = std::max(worst, std::abs(got[i] - want[i]));
        best = std::min(best, worst);
    } while (std::next_permutation(got.begin(), got.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    }));
    return best;
}

std::vector<Complex> eigen_eigenvalues(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> es(e, false);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

} // namespace

TEST(Synthesis, InvertibleBDiagonalPlacement) {
    const Matrix a{{1, 2}, {-1, 3}};
    const std::vector<Complex> poles{-11.0, -10.0};
    const Matrix k = synthesize_gain(a, Matrix::identity(2), poles);
    EXPECT_EQ(k, (Matrix{{-12, -2}, {1, -13}}));
    const Matrix closed = a + k;
    const Matrix want{{-11, 0}, {0, -10}};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            EXPECT_NEAR(closed(i, j), want(i, j), 1e-10);
    const ClosedLoop cl = validate_gain(a, Matrix::identity(2), k);
    EXPECT_EQ(cl.k1, 1.0);
    EXPECT_NEAR(cl.lambda_tilde, 10.0, 1e-12);
}

TEST(Synthesis, AckermannDoubleIntegrator) {
    const Matrix a{{0, 1}, {0, 0}}, b{{0}, {1}};
    const std::vector<Complex> poles{-2.0, -3.0};
    const Matrix k = gain_single_input(a, b, poles);
    // chi(s) = s^2 + 5 s + 6, so A + bK = [[0, 1], [-6, -5]].
    EXPECT_NEAR(k(0, 0), -6.0, 1e-12);
    EXPECT_NEAR(k(0, 1), -5.0, 1e-12);
    EXPECT_LE(matching_error(eigenvalues(a + b * k), poles), 1e-10);
}

TEST(Synthesis, AckermannComplexPair) {
    const Matrix a{{0, 1}, {0, 0}}, b{{0}, {1}};
    const std::vector<Complex> poles{{-1, 2}, {-1, -2}};
    const Matrix k = synthesize_gain(a, b, poles);
    EXPECT_NEAR(k(0, 0), -5.0, 1e-12);
    EXPECT_NEAR(k(0, 1), -2.0, 1e-12);
}

TEST(Synthesis, RandomSingleInputPlacement) {
    std::mt19937_64 g(99);
    int placed = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 4;
        Matrix a(n, n), b(n, 1);
        for (auto& v : a.data())
            v = oracle::uniform(g, -2, 2);
        for (auto& v : b.data())
            v = oracle::uniform(g, -2, 2);
        std::vector<Complex> poles;
        for (std::size_t i = 0; i < n; ++i)
            poles.emplace_back(-1.0 - static_cast<double>(i) - oracle::uniform(g, 0.0, 0.5));
        if (condition_number(controllability_matrix(a, b)) > 1e6)
            continue;
        const Matrix k = synthesize_gain(a, b, poles);
        const auto got = eigen_eigenvalues(a + b * k);
        EXPECT_LE(matching_error(got, poles), 1e-6) << "n=" << n;
        ++placed;
    }
    EXPECT_GT(placed, 80);
}

TEST(Synthesis, RandomInvertiblePlacement) {
    std::mt19937_64 g(100);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 4;
        Matrix a(n, n), b = Matrix::identity(n);
        for (auto& v : a.data())
            v = oracle::uniform(g, -2, 2);
        for (auto& v : b.data())
            v += oracle::uniform(g, -0.3, 0.3);
        std::vector<Complex> poles;
        for (std::size_t i = 0; i < n; ++i)
            poles.emplace_back(-2.0 - 1.5 * static_cast<double>(i));
        const Matrix k = synthesize_gain(a, b, poles);
        EXPECT_LE(matching_error(eigen_eigenvalues(a + b * k), poles), 1e-9);
        const ClosedLoop cl = validate_gain(a, b, k);
        EXPECT_NEAR(cl.lambda_tilde, 2.0, 1e-9);
        EXPECT_GE(cl.k1, 1.0);
    }
}

TEST(Synthesis, PoleValidation) {
    EXPECT_THROW(validate_poles(std::vector<Complex>{-1.0, 0.5}), InvalidArgument);
    EXPECT_THROW(validate_poles(std::vector<Complex>{-1.0, -1.0}), InvalidArgument);
    EXPECT_THROW(validate_poles(std::vector<Complex>{{-1, 1}, -2.0}), InvalidArgument);
    EXPECT_NO_THROW(validate_poles(std::vector<Complex>{{-1, 1}, {-1, -1}}));
}

TEST(Synthesis, UncontrollableAndUnsupported) {
    const Matrix a{{1, 0}, {0, 2}}, b{{1}, {0}};
    EXPECT_THROW((void)synthesize_gain(a, b, std::vector<Complex>{-1.0, -2.0}), SynthesisError);
    const Matrix b2{{1, 0}, {0, 0}, {0, 0}};
    const Matrix a3(3, 3);
    EXPECT_THROW((void)synthesize_gain(a3, b2, std::vector<Complex>{-1.0, -2.0, -3.0}), SynthesisError);
    EXPECT_THROW((void)synthesize_gain(a, Matrix::identity(2), std::vector<Complex>{-1.0}), InvalidArgument);
}

TEST(Synthesis, ValidateGainRejectsUnstableLoop) {
    const Matrix a{{1, 2}, {-1, 3}};
    EXPECT_THROW((void)validate_gain(a, Matrix::identity(2), Matrix(2, 2)), SynthesisError);
}

TEST(Synthesis, Regularity) {
    EXPECT_TRUE(is_regular(Matrix::identity(3)));
    EXPECT_FALSE(is_regular(Matrix{{0}, {1}}));
    EXPECT_FALSE(is_regular(Matrix{{1, 2}, {2, 4}}));
}
