#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nullctl/certify.hpp"
#include "nullctl/expression.hpp"
#include "nullctl/matrix.hpp"

namespace nullctl {

struct DisturbanceModel {
    enum class Kind { None, Expression };

    Kind kind = Kind::None;
    std::vector<nullctl::Expression> components; // expressions in t

    [[nodiscard]] static DisturbanceModel none() { return {}; }
    [[nodiscard]] static DisturbanceModel parse(std::span<const std::string> components);

    [[nodiscard]] Vector eval(double t, std::size_t n) const;
};

struct Sample {
    double t = 0.0;
    double tau = 0.0;
    Vector x;
    Vector u;
};

struct Trajectory {
    std::vector<Sample> samples;
    Vector terminal_state;
    Vector target;
    double T = 1.0;
    double omega = 1.0;
    bool diverged = false; // only set by open-loop runs, closed-loop runs throw
};

struct SimulationOptions {
    double theta_res = 1e-8;
    double rtol = 1e-9;
    double atol = 1e-12;
    double divergence_threshold = 1e6;
    bool fixed_step_rk4 = false;
    std::size_t rk4_steps = 20000;
};

// Integrates da/dtau = T w e^{-w tau} [f(a) + w(t(tau))] + B K (a - x*) from
// tau = 0 to ln(1/theta_res)/w, where t(tau) = T(1 - e^{-w tau}) and the
// applied control is u = e^{w tau} K (a - x*) / (T w).
[[nodiscard]] Trajectory simulate_closed_loop(const CertificationProblem& problem, const Certificate& cert,
                                              std::span<const double> x0, const DisturbanceModel& w,
                                              const SimulationOptions& options = {});

// (1 - t/T)^{lambda**/omega} [k1 r + disturbance term], r = |x0 - x*|.
[[nodiscard]] double envelope(const Certificate& cert, double x0_radius, double t);
[[nodiscard]] double envelope(const Certificate& cert, std::span<const double> x0, double t);

struct EnvelopeReport {
    bool passed = true;
    double worst_margin = 0.0; // min over samples of allowed - |x - x*|
    double worst_time = 0.0;
    std::size_t violations = 0;
};

[[nodiscard]] EnvelopeReport verify_envelope(const Trajectory& traj, const Certificate& cert,
                                             std::span<const double> x0);

// Largest Euclidean norm of u over the samples.
[[nodiscard]] double control_signal(const Trajectory& traj);

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
[[nodiscard]] Trajectory read_trajectory_csv(std::istream& in);
void export_trajectory(const Trajectory& traj, const std::filesystem::path& path);

// Line chart of |x(t) - x*| against the envelope.
void write_envelope_svg(const Trajectory& traj, const Certificate& cert, std::span<const double> x0,
                        std::ostream& out);

using ControlLaw = std::function<Vector(double t, std::span<const double> x)>;

// Plain t-domain integration of x' = f(x) + B u(t, x) on [0, T]. A state norm
// above the divergence threshold stops the run with diverged = true.
[[nodiscard]] Trajectory simulate_open_loop(const VectorField& f, const Matrix& b, std::span<const double> x0,
                                            const ControlLaw& u, double T, const SimulationOptions& options = {});

} // namespace nullctl
