#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nullctl/matrix.hpp"

namespace nullctl::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,      // config, parse or precondition error
    kExitInfeasible = 2, // hypothesis or synthesis failure
    kExitFailure = 3,    // divergence, bound violation, envelope or terminal check failed
};

struct CertifyArgs {
    std::string config;
    std::string out;
    std::optional<double> rho;
};

struct SimulateArgs {
    std::string config;
    std::string certificate;
    std::string out;
    std::string plot;
    std::optional<double> theta_res;
    std::optional<double> threshold;
    bool rk4 = false;
};

struct SweepArgs {
    std::string config;
    std::string axis = "omega";
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
    std::optional<double> delta;
    std::string out;
};

struct GlobalArgs {
    std::string config;
    std::optional<double> mu;
};

int cmd_certify(const CertifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_global(const GlobalArgs& args, std::ostream& out, std::ostream& err);

// Uniform point strictly inside the ball of the given radius around centre,
// drawn from a seeded 64-bit Mersenne Twister. Identical on every platform.
[[nodiscard]] Vector random_point_in_ball(std::uint64_t seed, const Vector& centre, double radius);

// Grid from, from + step, ... up to `to` (inclusive within 1e-9 step).
[[nodiscard]] std::vector<double> sweep_grid(double from, double to, double step);

} // namespace nullctl::cli
