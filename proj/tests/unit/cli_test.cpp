#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "nullctl/serialize.hpp"

using namespace nullctl;
using namespace nullctl::cli;

namespace {

const std::string kDir = NULLCTL_CONFIG_DIR;

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "nullctl_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::filesystem::path write_config(const std::string& name, const std::string& text) {
    const auto path = scratch(name);
    std::ofstream(path) << text;
    return path;
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun certify_run(const std::string& config) {
    std::ostringstream out, err;
    CertifyArgs a;
    a.config = config;
    const int code = cmd_certify(a, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST(Cli, CertifyExampleSucceeds) {
    const CliRun r = certify_run(kDir + "/planar.json");
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("certificate: feasible"), std::string::npos);
    EXPECT_NE(r.out.find("mu = 0.110487"), std::string::npos);
}

TEST(Cli, CertifyWritesJson) {
    std::ostringstream out, err;
    CertifyArgs a;
    a.config = kDir + "/planar_disturbed.json";
    a.out = scratch("cert.json").string();
    ASSERT_EQ(cmd_certify(a, out, err), kExitOk) << err.str();
    const Certificate c = certificate_from_json(read_file(a.out));
    EXPECT_NEAR(c.mu, 0.07787, 1e-4);

    SimulateArgs s;
    s.config = a.config;
    s.certificate = a.out;
    std::ostringstream sout, serr;
    EXPECT_EQ(cmd_simulate(s, sout, serr), kExitOk) << serr.str();
}

TEST(Cli, SimulateIsDeterministic) {
    SimulateArgs s;
    s.config = kDir + "/planar.json";
    std::ostringstream o1, o2, e;
    ASSERT_EQ(cmd_simulate(s, o1, e), kExitOk) << e.str();
    ASSERT_EQ(cmd_simulate(s, o2, e), kExitOk);
    EXPECT_EQ(o1.str(), o2.str());
    EXPECT_NE(o1.str().find("result: pass"), std::string::npos);
}

TEST(Cli, RandomPointIsSeededAndInside) {
    const Vector c{1.0, -2.0, 0.5};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Vector a = random_point_in_ball(seed, c, 0.3);
        EXPECT_EQ(a, random_point_in_ball(seed, c, 0.3));
        double d = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            d += (a[i] - c[i]) * (a[i] - c[i]);
        EXPECT_LT(std::sqrt(d), 0.3);
    }
    EXPECT_NE(random_point_in_ball(1, c, 0.3), random_point_in_ball(2, c, 0.3));
}

TEST(Cli, SweepGrid) {
    const auto g = sweep_grid(1.0, 2.0, 0.1);
    ASSERT_EQ(g.size(), 11u);
    EXPECT_NEAR(g.back(), 2.0, 1e-12);
    EXPECT_TRUE(sweep_grid(1.0, 2.0, 0.0).empty());
    EXPECT_TRUE(sweep_grid(2.0, 1.0, 0.1).empty());
}

TEST(Cli, SweepReportsFeasibleBand) {
    SweepArgs a;
    a.config = kDir + "/planar_disturbed.json";
    a.from = 1.0;
    a.to = 2.6;
    a.step = 0.1;
    a.delta = -5.0;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_sweep(a, out, err), kExitOk) << err.str();
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "parameter,mu,lambda_ratio,feasible");
    double lo = 1e9, hi = -1e9;
    while (std::getline(lines, line)) {
        const double p = std::stod(line.substr(0, line.find(',')));
        if (line.ends_with(",true")) {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
    }
    // Feasible grid points are exactly those inside [1.382, 2.382].
    EXPECT_NEAR(lo, 1.5, 1e-9);
    EXPECT_NEAR(hi, 2.3, 1e-9);
}

TEST(Cli, GlobalOutputs) {
    GlobalArgs a;
    a.config = kDir + "/planar.json";
    a.mu = 10.0;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_global(a, out, err), kExitOk) << err.str();
    EXPECT_EQ(out.str().rfind("global: yes", 0), 0u);
    EXPECT_NE(out.str().find("requested mu = 10: omega = "), std::string::npos);

    GlobalArgs b;
    b.config = kDir + "/quadratic_drift.json";
    std::ostringstream out2;
    EXPECT_EQ(cmd_global(b, out2, err), kExitOk);
    EXPECT_EQ(out2.str().rfind("global: no (B singular)", 0), 0u);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(certify_run(kDir + "/quadratic_drift.json").code, kExitInfeasible);
    EXPECT_EQ(certify_run(scratch("missing.json").string()).code, kExitUsage);
    EXPECT_EQ(certify_run(write_config("bad.json", "{ not json").string()).code, kExitUsage);

    const auto zero_b = write_config("zero_b.json", R"({
      "system": {"n": 2, "m": 2, "f": ["x1 + x2", "x2"], "B": [[0, 0], [0, 0]], "T": 1},
      "certify": {"gamma0": 4, "poles": [-11, -10], "omega": 2}
    })");
    const CliRun r = certify_run(zero_b.string());
    EXPECT_EQ(r.code, kExitInfeasible);
    EXPECT_NE(r.err.find("H1 failed"), std::string::npos) << r.err;
}

TEST(Cli, SimulateFailsWhenThresholdUnreachable) {
    SimulateArgs s;
    s.config = kDir + "/planar.json";
    s.threshold = 1e-30;
    s.theta_res = 1e-2;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_simulate(s, out, err), kExitFailure);
    EXPECT_NE(out.str().find("result: FAIL"), std::string::npos);
}

TEST(Config, PolesAndAuto) {
    const Config c = parse_config(R"({
      "system": {"n": 2, "m": 1, "f": ["x2", "x1"], "B": [0, 1], "T": 2},
      "certify": {"gamma0": "auto", "omega": 1.5, "poles": [[-1, 2], [-1, -2]]}
    })");
    EXPECT_FALSE(c.options.gamma0.has_value());
    EXPECT_EQ(*c.options.omega, 1.5);
    ASSERT_TRUE(c.options.poles.has_value());
    EXPECT_EQ((*c.options.poles)[0], Complex(-1, 2));
    EXPECT_EQ(c.problem.B.rows(), 2u);
    EXPECT_EQ(c.problem.T, 2.0);
    EXPECT_THROW((void)parse_config(R"({"system": {"n": 2}})"), ConfigError);
}
