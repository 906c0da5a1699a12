#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "nullctl/certify.hpp"
#include "nullctl/error.hpp"
#include "nullctl/simulate.hpp"
#include "oracles.hpp"

using namespace nullctl;

namespace {

const std::vector<std::string> kField{"x2/(1+x2^2) + x1 + x2", "x1^2 - x1 + 3*x2"};
const std::vector<std::string> kW{"-0.01*(1-t)^2*sqrt(1-t)", "0"};

CertificationProblem planar(double M_d, double eta) {
    CertificationProblem p;
    p.f = VectorField::parse(kField);
    p.B = Matrix::identity(2);
    p.bound = {M_d, eta};
    p.input_bound = 10.0;
    p.c_R_override = 1.72855;
    return p;
}

Certificate certificate(const CertificationProblem& p, double omega = 2.0) {
    CertifyOptions o;
    o.gamma0 = 4.0;
    o.poles = std::vector<Complex>{-11.0, -10.0};
    o.omega = omega;
    return certify(p, o);
}

double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

} // namespace

TEST(Simulate, UndisturbedScenario) {
    const auto p = planar(0.0, 0.0);
    const auto c = certificate(p);
    const std::vector<double> x0{0.06, 0.0};
    const Trajectory tr = simulate_closed_loop(p, c, x0, DisturbanceModel::none());
    EXPECT_LE(norm2(tr.terminal_state), 1e-3);
    const auto rep = verify_envelope(tr, c, x0);
    EXPECT_TRUE(rep.passed) << rep.worst_margin << " at " << rep.worst_time;
    EXPECT_EQ(rep.violations, 0u);
    EXPECT_EQ(tr.samples.front().t, 0.0);
    EXPECT_NEAR(tr.samples.back().t, 1.0, 1e-7);
}

TEST(Simulate, DisturbedScenario) {
    const auto p = planar(0.01, 2.5);
    const auto c = certificate(p);
    const std::vector<double> x0{0.06, 0.0};
    const Trajectory tr = simulate_closed_loop(p, c, x0, DisturbanceModel::parse(kW));
    EXPECT_LE(norm2(tr.terminal_state), 1e-3);
    EXPECT_TRUE(verify_envelope(tr, c, x0).passed);
}

TEST(Simulate, EquilibriumStaysPut) {
    const auto p = planar(0.0, 0.0);
    const auto c = certificate(p);
    const std::vector<double> x0{0.0, 0.0};
    const Trajectory tr = simulate_closed_loop(p, c, x0, DisturbanceModel::none());
    for (const Sample& s : tr.samples) {
        EXPECT_EQ(norm2(s.x), 0.0);
        EXPECT_EQ(norm2(s.u), 0.0);
    }
}

TEST(Simulate, EnvelopeValues) {
    const auto undisturbed = certificate(planar(0.0, 0.0));
    EXPECT_NEAR(envelope(undisturbed, 0.06, 0.0), 0.06, 1e-15);
    EXPECT_EQ(envelope(undisturbed, 0.06, 1.0), 0.0);
    const double lss = undisturbed.lambda_star_star;
    EXPECT_NEAR(envelope(undisturbed, 0.06, 0.5), 0.06 * std::pow(0.5, lss / 2.0), 1e-15);

    const auto disturbed = certificate(planar(0.01, 2.5));
    const double expected = 0.06 + 2.0 * std::expm1(-0.01 / *disturbed.gamma);
    EXPECT_NEAR(envelope(disturbed, 0.06, 0.0), expected, 1e-15);
    EXPECT_NEAR(envelope(disturbed, 0.06, 0.0), 0.0926239, 1e-6);
}

TEST(Simulate, CsvRoundTrip) {
    const auto p = planar(0.0, 0.0);
    const auto c = certificate(p);
    const std::vector<double> x0{0.03, -0.02};
    const Trajectory tr = simulate_closed_loop(p, c, x0, DisturbanceModel::none());
    std::stringstream ss;
    write_trajectory_csv(tr, ss);
    const Trajectory back = read_trajectory_csv(ss);
    ASSERT_EQ(back.samples.size(), tr.samples.size());
    for (std::size_t k = 0; k < tr.samples.size(); k += 7) {
        EXPECT_NEAR(back.samples[k].t, tr.samples[k].t, 1e-12);
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_NEAR(back.samples[k].x[i], tr.samples[k].x[i], 1e-12 * std::max(1.0, std::abs(tr.samples[k].x[i])));
            EXPECT_NEAR(back.samples[k].u[i], tr.samples[k].u[i], 1e-12 * std::max(1.0, std::abs(tr.samples[k].u[i])));
        }
    }
}

TEST(Simulate, ControlMatchesFeedbackLaw) {
    const auto p = planar(0.0, 0.0);
    const auto c = certificate(p);
    const std::vector<double> x0{0.05, 0.01};
    const Trajectory tr = simulate_closed_loop(p, c, x0, DisturbanceModel::none());
    for (std::size_t k = 0; k < tr.samples.size(); k += 11) {
        const Sample& s = tr.samples[k];
        if (s.t > 0.999)
            continue;
        const Vector kx = c.K * std::span<const double>(s.x);
        for (std::size_t i = 0; i < 2; ++i)
            EXPECT_NEAR(s.u[i], kx[i] / ((1.0 - s.t) * 2.0), 1e-6 * std::max(1.0, std::abs(s.u[i])));
    }
    EXPECT_LT(control_signal(tr), 10.0);
}

TEST(Simulate, DoubledGainBreaksEnvelopeCertificate) {
    // Negative control: a certificate claiming faster decay than the loop achieves must be rejected.
    const auto p = planar(0.0, 0.0);
    auto c = certificate(p);
    const std::vector<double> x0{0.06, 0.0};
    const Trajectory tr = simulate_closed_loop(p, c, x0, DisturbanceModel::none());
    Certificate lying = c;
    lying.lambda_star_star = 2.0 * c.lambda_tilde;
    EXPECT_FALSE(verify_envelope(tr, lying, x0).passed);
}

TEST(Simulate, DoubledGainReportsInsteadOfCrashing) {
    const auto p = planar(0.01, 2.5);
    Certificate c = certificate(p);
    c.K = 2.0 * c.K;
    const std::vector<double> x0{0.06, 0.0};
    try {
        const Trajectory tr = simulate_closed_loop(p, c, x0, DisturbanceModel::parse(kW));
        const EnvelopeReport rep = verify_envelope(tr, c, x0);
        EXPECT_EQ(rep.passed, rep.violations == 0);
        EXPECT_FALSE(tr.samples.empty());
    } catch (const SimulationError&) {
        SUCCEED();
    }
}

TEST(Simulate, Rk4AgreesWithDopri) {
    const auto p = planar(0.0, 0.0);
    const auto c = certificate(p);
    const std::vector<double> x0{0.06, 0.0};
    SimulationOptions rk4;
    rk4.fixed_step_rk4 = true;
    const Trajectory a = simulate_closed_loop(p, c, x0, DisturbanceModel::none());
    const Trajectory b = simulate_closed_loop(p, c, x0, DisturbanceModel::none(), rk4);
    EXPECT_LE(dist(a.terminal_state, b.terminal_state), 1e-6);
    EXPECT_TRUE(verify_envelope(b, c, x0).passed);
}

TEST(Simulate, ToleranceHalvingIsStable) {
    const auto p = planar(0.01, 2.5);
    const auto c = certificate(p);
    const std::vector<double> x0{0.04, 0.03};
    SimulationOptions tight;
    tight.rtol = 5e-10;
    tight.atol = 5e-13;
    const auto w = DisturbanceModel::parse(kW);
    const Trajectory a = simulate_closed_loop(p, c, x0, w);
    const Trajectory b = simulate_closed_loop(p, c, x0, w, tight);
    EXPECT_LE(dist(a.terminal_state, b.terminal_state), 1e-8);
}

TEST(Simulate, RandomStatesAndDisturbances) {
    const auto p = planar(0.01, 2.5);
    const auto c = certificate(p);
    std::mt19937_64 g(4242);
    int runs = 0;
    for (int d = 0; d < 10; ++d) {
        // Admissible family: |w(t)| = a M_d (1-t)^eta with a in (0, 1] and a rotating direction.
        const double a = oracle::uniform(g, 0.1, 1.0), th = oracle::uniform(g, 0.0, 6.283185307179586);
        const std::vector<std::string> w{oracle::fmt(a * 0.01 * std::cos(th)) + "*(1-t)^2*sqrt(1-t)",
                                         oracle::fmt(a * 0.01 * std::sin(th)) + "*(1-t)^2*sqrt(1-t)"};
        const auto model = DisturbanceModel::parse(w);
        for (int k = 0; k < 5; ++k) {
            std::vector<double> x0(2);
            do {
                x0[0] = oracle::uniform(g, -c.mu, c.mu);
                x0[1] = oracle::uniform(g, -c.mu, c.mu);
            } while (norm2(x0) >= c.mu);
            const Trajectory tr = simulate_closed_loop(p, c, x0, model);
            EXPECT_LE(norm2(tr.terminal_state), 1e-3);
            EXPECT_TRUE(verify_envelope(tr, c, x0).passed);
            ++runs;
        }
    }
    EXPECT_EQ(runs, 50);
}

TEST(Simulate, Preconditions) {
    const auto p = planar(0.01, 2.5);
    const auto c = certificate(p);
    EXPECT_THROW((void)simulate_closed_loop(p, c, std::vector<double>{1.0, 0.0}, DisturbanceModel::parse(kW)),
                 InvalidArgument);
    const std::vector<std::string> big{"0.5", "0"};
    try {
        (void)simulate_closed_loop(p, c, std::vector<double>{0.01, 0.0}, DisturbanceModel::parse(big));
        FAIL();
    } catch (const SimulationError& e) {
        EXPECT_EQ(e.kind(), SimulationError::Kind::DisturbanceViolation);
    }
}

TEST(OpenLoop, QuadraticDriftCannotLeaveFromUnitState) {
    const std::vector<std::string> f{"x1^2 + x2/(1+x2^2)", "0"};
    const VectorField field = VectorField::parse(f);
    const Matrix b{{0}, {1}};
    std::mt19937_64 g(62);
    for (int trial = 0; trial < 20; ++trial) {
        const double c0 = oracle::uniform(g, -5, 5), c1 = oracle::uniform(g, -5, 5), c2 = oracle::uniform(g, -5, 5);
        const ControlLaw u = [=](double t, std::span<const double> x) {
            return Vector{std::clamp(c0 + c1 * std::sin(3 * t) + c2 * x[1], -10.0, 10.0)};
        };
        const Trajectory tr = simulate_open_loop(field, b, std::vector<double>{1.0, oracle::uniform(g, -1, 1)}, u, 1.0);
        EXPECT_TRUE(tr.diverged || tr.terminal_state[0] >= 1.0) << tr.terminal_state[0];
    }
}

TEST(Svg, ContainsPolylines) {
    const auto p = planar(0.0, 0.0);
    const auto c = certificate(p);
    const std::vector<double> x0{0.06, 0.0};
    const Trajectory tr = simulate_closed_loop(p, c, x0, DisturbanceModel::none());
    std::ostringstream os;
    write_envelope_svg(tr, c, x0, os);
    const std::string svg = os.str();
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("polyline"), std::string::npos);
}
