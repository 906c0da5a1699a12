#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "nullctl/certify.hpp"
#include "nullctl/error.hpp"
#include "nullctl/linalg.hpp"

using namespace nullctl;

namespace {

// sigma_max([[1,2],[-1,3]]) = 2 + golden ratio.
const double kNormA = (5.0 + std::sqrt(5.0)) / 2.0;

CertificationProblem planar(double M_d = 0.0, double eta = 0.0) {
    CertificationProblem p;
    const std::vector<std::string> f{"x2/(1+x2^2) + x1 + x2", "x1^2 - x1 + 3*x2"};
    p.f = VectorField::parse(f);
    p.B = Matrix::identity(2);
    p.T = 1.0;
    p.bound = {M_d, eta};
    p.input_bound = 10.0;
    p.remainder_box = Box{{{-10, 10}, {-10, 10}}};
    p.c_R_override = 1.72855;
    return p;
}

CertifyOptions fixed_options() {
    CertifyOptions o;
    o.gamma0 = 4.0;
    o.poles = std::vector<Complex>{-11.0, -10.0};
    o.omega = 2.0;
    return o;
}

CertificationProblem quadratic_drift() {
    CertificationProblem p;
    const std::vector<std::string> f{"x1^2 + x2/(1+x2^2)", "0"};
    p.f = VectorField::parse(f);
    p.B = Matrix{{0}, {1}};
    p.T = 1.0;
    return p;
}

} // namespace

TEST(Certify, NormOfLinearisationIsOnePlusGoldenRatio) {
    const auto p = planar();
    const Matrix a = linearization(p);
    EXPECT_EQ(a, (Matrix{{1, 2}, {-1, 3}}));
    EXPECT_NEAR(spectral_norm(a), kNormA, 1e-13);
    EXPECT_TRUE(check_H1(p));
}

TEST(Certify, EpsilonWorkedValue) {
    const double eps = compute_epsilon(4.0, kNormA, 1.72855, 1.0, 2.0);
    EXPECT_NEAR(eps, 0.110497, 1e-5);
    EXPECT_NEAR(eps, (4.0 - kNormA) / (1.72855 * 2.0), 1e-15);
    EXPECT_TRUE(std::isinf(compute_epsilon(4.0, 1.0, 0.0, 1.0, 2.0)));
    EXPECT_THROW((void)compute_epsilon(3.0, 3.5, 1.0, 1.0, 1.0), HypothesisFailure);
}

TEST(Certify, OmegaIntervals) {
    const double na = kNormA;
    const auto undisturbed = omega_interval(10.0, 1.0, 1.0, na, 4.0, 0.0, 0.0);
    EXPECT_FALSE(undisturbed.empty);
    EXPECT_FALSE(undisturbed.lo_closed);
    EXPECT_NEAR(undisturbed.hi, 2.382, 1e-3);
    EXPECT_FALSE(undisturbed.contains(0.0));
    EXPECT_TRUE(undisturbed.contains(1e-6));
    EXPECT_TRUE(undisturbed.contains(undisturbed.hi));

    const auto disturbed = omega_interval(10.0, 1.0, 1.0, na, 4.0, -5.0, 0.01);
    EXPECT_NEAR(disturbed.lo, 1.382, 1e-3);
    EXPECT_NEAR(disturbed.hi, 2.382, 1e-3);
    EXPECT_TRUE(disturbed.contains(2.0));
    EXPECT_FALSE(disturbed.contains(1.3));

    EXPECT_TRUE(omega_interval(5.0, 1.0, 1.0, na, 4.0, 0.0, 0.0).empty);
}

TEST(Certify, H3) {
    EXPECT_TRUE(check_H3({0.01, 2.5}, -5.0, 1.0, 4.0));
    EXPECT_FALSE(check_H3({0.01, 2.5}, -4.0, 1.0, 4.0));
    EXPECT_TRUE(check_H3({0.0, 0.0}, 0.0, 1.0, 4.0));
    EXPECT_FALSE(check_H3({0.0, 0.0}, -1.0, 1.0, 4.0));
}

TEST(Certify, MuBallEquation) {
    const double eps = compute_epsilon(4.0, kNormA, 1.72855, 1.0, 2.0);
    const double gamma = (10.0 - kNormA - 4.0) + 4.0 - 2.0 - 5.0;
    EXPECT_NEAR(gamma, -0.618, 1e-3);
    const double mu = compute_mu(eps, 1.0, 1.0, 0.01, gamma, 2.0);
    EXPECT_NEAR(mu, 0.07787, 1e-4);
    // k1 mu + (e^{-k1 T M_d / gamma} - 1) omega = epsilon
    EXPECT_NEAR(mu + (std::exp(-0.01 / gamma) - 1.0) * 2.0, eps, 1e-14);
    EXPECT_EQ(compute_mu(eps, 2.0, 1.0, 0.0, std::nullopt, 2.0), eps / 2.0);
    EXPECT_THROW((void)compute_mu(0.01, 1.0, 1.0, 1.0, -0.1, 2.0), HypothesisFailure);
}

TEST(Certify, DisturbanceTermWithRho) {
    const double with_omega = disturbance_term(1.0, 1.0, 0.01, -0.618, 2.0);
    EXPECT_NEAR(with_omega, 2.0 * std::expm1(0.01 / 0.618), 1e-15);
    EXPECT_NEAR(disturbance_term(1.0, 1.0, 0.01, -0.618, 2.0, 2.0), with_omega, 1e-15);
    const double rho1 = disturbance_term(1.0, 1.0, 0.01, -0.618, 2.0, 1.0);
    EXPECT_NEAR(rho1, std::expm1(2.0 * 0.01 / 0.618), 1e-15);
}

TEST(Certify, BoundedController) {
    EXPECT_TRUE(controller_bounded(2.382, 2.0));
    EXPECT_TRUE(controller_bounded(2.0, 2.0));
    EXPECT_FALSE(controller_bounded(1.9, 2.0));
}

TEST(Certify, InputConstraintValue) {
    const Matrix k{{-12, -2}, {1, -13}};
    EXPECT_NEAR(spectral_norm(k), 13.296785, 1e-6);
    const double lss = 10.0 - kNormA - 4.0;
    const double lhs = input_constraint_lhs(k, 2.0, 1.0, lss, 1.0, 0.06, 0.0, std::nullopt);
    EXPECT_NEAR(lhs, 0.3989, 1e-4);
    EXPECT_TRUE(check_input_constraint(k, 2.0, 1.0, lss, 1.0, 0.06, 0.0, std::nullopt, 10.0));
    EXPECT_FALSE(check_input_constraint(k, 2.0, 1.0, lss, 1.0, 0.06, 0.0, std::nullopt, 0.3));
    EXPECT_THROW((void)input_constraint_lhs(k, 3.0, 1.0, lss, 1.0, 0.06, 0.0, std::nullopt), InvalidArgument);
}

TEST(Certify, PlanarUndisturbed) {
    const Certificate c = certify(planar(), fixed_options());
    EXPECT_NEAR(c.norm_A, kNormA, 1e-13);
    EXPECT_EQ(c.c_R, 1.72855);
    EXPECT_NEAR(c.epsilon, 0.110497, 1e-5);
    EXPECT_EQ(c.k1, 1.0);
    EXPECT_NEAR(c.lambda_tilde, 10.0, 1e-12);
    EXPECT_NEAR(c.lambda_star, 10.0 - kNormA, 1e-12);
    EXPECT_NEAR(c.lambda_star_star, 2.382, 1e-3);
    EXPECT_FALSE(c.gamma.has_value());
    EXPECT_EQ(c.delta, 0.0);
    EXPECT_NEAR(c.mu, c.epsilon, 1e-15);
    EXPECT_TRUE(c.controller_bounded);
    ASSERT_TRUE(c.Phi_check.has_value());
    EXPECT_TRUE(*c.Phi_check);
    EXPECT_EQ(c.K, (Matrix{{-12, -2}, {1, -13}}));
}

TEST(Certify, PlanarDisturbed) {
    const Certificate c = certify(planar(0.01, 2.5), fixed_options());
    EXPECT_EQ(c.delta, -5.0);
    ASSERT_TRUE(c.gamma.has_value());
    EXPECT_NEAR(*c.gamma, -0.618, 1e-3);
    EXPECT_NEAR(c.mu, 0.07787, 1e-4);
    EXPECT_EQ(c.rho, 2.0);
    EXPECT_LT(c.mu, c.epsilon);
}

TEST(Certify, GridRemainderCoefficientBand) {
    auto p = planar();
    p.c_R_override.reset();
    const Certificate c = certify(p, fixed_options());
    EXPECT_GE(c.c_R, 1.72855);
    EXPECT_LE(c.c_R, 1.8150);
}

TEST(Certify, HypothesisOrdering) {
    auto p = planar();
    p.B = Matrix(2, 2);
    try {
        (void)certify(p, fixed_options());
        FAIL();
    } catch (const HypothesisFailure& e) {
        EXPECT_EQ(e.which(), Hypothesis::H1);
    }
    auto o = fixed_options();
    o.omega = 3.0; // above lambda** upper end
    try {
        (void)certify(planar(), o);
        FAIL();
    } catch (const HypothesisFailure& e) {
        EXPECT_EQ(e.which(), Hypothesis::H2);
    }
    o = fixed_options();
    auto disturbed = planar(0.01, 1.0); // delta = -2 is not below -k1 Gamma0
    o.omega = 2.0;
    EXPECT_THROW((void)certify(disturbed, o), HypothesisFailure);
}

TEST(Certify, TargetShiftMatchesOrigin) {
    auto shifted = planar();
    // g(y) = f(y - c) has target c and the same linearisation.
    const std::vector<double> c{0.5, -0.25};
    shifted.f = planar().f.shifted(std::vector<double>{-c[0], -c[1]});
    shifted.target = c;
    const Certificate a = certify(planar(), fixed_options());
    const Certificate b = certify_at(shifted, fixed_options());
    EXPECT_NEAR(a.mu, b.mu, 1e-12);
    EXPECT_EQ(b.target, c);
}

TEST(Certify, MaximizeMuBeatsFixedPoint) {
    const auto p = planar();
    const Certificate fixed = certify(p, fixed_options());
    CertifyOptions automatic;
    const Certificate best = certify(p, automatic);
    EXPECT_GE(best.mu, fixed.mu * (1 - 1e-12));
    // The returned point must itself be a valid certificate.
    CertifyOptions again;
    again.gamma0 = best.Gamma0;
    again.omega = best.omega;
    again.poles = best.poles;
    const Certificate re = certify(p, again);
    EXPECT_NEAR(re.mu, best.mu, 1e-9 * best.mu);
}

TEST(Certify, MaximizeMuExplicitGrid) {
    SearchGrid grid;
    grid.gamma0 = {4.0, 5.0};
    grid.omega = {1.0, 2.0};
    grid.poles = {{-11.0, -10.0}};
    const Certificate c = maximize_mu(planar(), grid);
    // Smaller Gamma0 gives larger epsilon; smaller omega gives larger epsilon.
    EXPECT_EQ(c.Gamma0, 4.0);
    EXPECT_EQ(c.omega, 1.0);
}

TEST(Certify, Invariants) {
    const auto p = planar(0.01, 2.5);
    for (double omega : {1.9, 2.0, 2.2, 2.3}) {
        auto o = fixed_options();
        o.omega = omega;
        const Certificate c = certify(p, o);
        EXPECT_GT(c.lambda_star_star, 0.0);
        EXPECT_LT(*c.gamma, 0.0);
        EXPECT_GT(c.mu, 0.0);
        EXPECT_LE(c.mu, c.epsilon / c.k1);
        EXPECT_GE(c.Gamma0, c.norm_A);
    }
}

TEST(Certify, QuadraticDriftLocallyInfeasible) {
    EXPECT_THROW((void)certify(quadratic_drift(), {}), Error);
}

TEST(Global, PlanarWithRequestedMu) {
    auto p = planar();
    p.c_R_override.reset();
    GlobalOptions o;
    o.mu = 10.0;
    const GlobalReport r = check_global(p, o);
    EXPECT_TRUE(r.hessians_bounded);
    EXPECT_TRUE(r.B_regular);
    EXPECT_TRUE(r.global);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_GE(r.witness->mu, 10.0 * (1 - 1e-9));
    EXPECT_GT(r.witness->omega, 0.0);
    EXPECT_GT(r.witness->Gamma0, r.witness->norm_A);
}

TEST(Global, QuadraticDriftIsNotGlobal) {
    const GlobalReport r = check_global(quadratic_drift());
    EXPECT_FALSE(r.B_regular);
    EXPECT_FALSE(r.global);
}

TEST(Global, UnboundedHessianIsNotGlobal) {
    CertificationProblem p;
    const std::vector<std::string> f{"x1^3", "x2"};
    p.f = VectorField::parse(f);
    p.B = Matrix::identity(2);
    const GlobalReport r = check_global(p);
    EXPECT_FALSE(r.hessians_bounded);
    EXPECT_FALSE(r.global);
}

TEST(Global, AffineFieldHasZeroRemainder) {
    CertificationProblem p;
    const std::vector<std::string> f{"x1 + 2*x2", "-x1"};
    p.f = VectorField::parse(f);
    p.B = Matrix::identity(2);
    const GlobalReport r = check_global(p);
    EXPECT_TRUE(r.global);
    EXPECT_EQ(r.c_R, 0.0);
}
