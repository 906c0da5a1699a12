#include "nullctl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nullctl/error.hpp"
#include "nullctl/linalg.hpp"
#include "nullctl/ode.hpp"
#include "nullctl/serialize.hpp"

namespace nullctl {

namespace {

Vector difference(std::span<const double> a, std::span<const double> b) {
    Vector d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = a[i] - b[i];
    return d;
}

struct Diverged {
    double t;
};

} // namespace

DisturbanceModel DisturbanceModel::parse(std::span<const std::string> components) {
    DisturbanceModel m;
    m.kind = Kind::Expression;
    const std::vector<std::string> vars{"t"};
    for (const auto& s : components)
        m.components.push_back(nullctl::Expression::parse(s, vars));
    return m;
}

Vector DisturbanceModel::eval(double t, std::size_t n) const {
    Vector w(n, 0.0);
    if (kind == Kind::None)
        return w;
    if (components.size() != n)
        throw InvalidArgument("disturbance has " + std::to_string(components.size()) + " components, expected " +
                              std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        w[i] = components[i].eval(t);
    return w;
}

Trajectory simulate_closed_loop(const CertificationProblem& problem, const Certificate& cert,
                                std::span<const double> x0, const DisturbanceModel& w,
                                const SimulationOptions& options) {
    const std::size_t n = problem.f.dimension();
    const std::size_t m = problem.B.cols();
    if (x0.size() != n)
        throw InvalidArgument("x0 dimension does not match the state dimension");
    if (cert.K.rows() != m || cert.K.cols() != n)
        throw InvalidArgument("certificate gain does not match the problem dimensions");
    if (!(options.theta_res > 0.0 && options.theta_res < 1.0))
        throw InvalidArgument("theta_res must lie in (0, 1)");
    const Vector target = cert.target.empty() ? Vector(n, 0.0) : cert.target;
    if (target.size() != n)
        throw InvalidArgument("certificate target does not match the state dimension");
    const double r0 = norm2(difference(x0, target));
    if (!(r0 < cert.mu))
        throw InvalidArgument("|x0 - x*| = " + format_real(r0) + " is not inside the certified ball mu = " +
                              format_real(cert.mu));

    const double T = cert.T;
    const double omega = cert.omega;
    const Matrix BK = problem.B * cert.K;
    const Vector f_target = problem.f.eval(target);

    auto time_of = [&](double tau) { return -T * std::expm1(-omega * tau); };

    auto check_disturbance = [&](double tau) {
        if (w.kind == DisturbanceModel::Kind::None && cert.M_d == 0.0 && norm2(f_target) == 0.0)
            return;
        const double t = time_of(tau);
        Vector total = w.eval(t, n);
        for (std::size_t i = 0; i < n; ++i)
            total[i] += f_target[i];
        const double lhs = norm2(total);
        const double allowed = cert.M_d == 0.0 ? 0.0 : cert.M_d * std::pow(1.0 - t / T, cert.eta);
        if (lhs > allowed * (1.0 + 1e-9) + 1e-15)
            throw SimulationError(SimulationError::Kind::DisturbanceViolation,
                                  "|f(x*) + w(t)| = " + format_real(lhs) + " exceeds the declared bound " +
                                      format_real(allowed) + " at t = " + format_real(t));
    };

    const OdeRhs rhs = [&](double tau, std::span<const double> a, std::span<double> da) {
        const double t = time_of(tau);
        const double scale = T * omega * std::exp(-omega * tau);
        const Vector fa = problem.f.eval(a);
        const Vector wt = w.eval(t, n);
        const Vector e = difference(a, target);
        const Vector feedback = BK * std::span<const double>(e);
        for (std::size_t i = 0; i < n; ++i)
            da[i] = scale * (fa[i] + wt[i]) + feedback[i];
    };

    Trajectory traj;
    traj.T = T;
    traj.omega = omega;
    traj.target = target;

    const StepObserver observer = [&](double tau, std::span<const double> a) {
        if (!(norm2(a) <= options.divergence_threshold))
            throw SimulationError(SimulationError::Kind::Divergence,
                                  "state norm exceeded " + format_real(options.divergence_threshold) +
                                      " at tau = " + format_real(tau));
        check_disturbance(tau);
        Sample s;
        s.tau = tau;
        s.t = time_of(tau);
        s.x.assign(a.begin(), a.end());
        const Vector e = difference(a, target);
        s.u = cert.K * std::span<const double>(e);
        const double gain = std::exp(omega * tau) / (T * omega);
        for (auto& v : s.u)
            v *= gain;
        if (!traj.samples.empty() && !(s.t > traj.samples.back().t))
            return;
        traj.samples.push_back(std::move(s));
    };

    const double tau_max = std::log(1.0 / options.theta_res) / omega;
    Vector y;
    if (options.fixed_step_rk4) {
        y = integrate_rk4(rhs, 0.0, x0, tau_max, options.rk4_steps, observer);
    } else {
        Dopri5Options dopts;
        dopts.rtol = options.rtol;
        dopts.atol = options.atol;
        y = integrate_dopri5(rhs, 0.0, x0, tau_max, dopts, observer);
    }
    traj.terminal_state = traj.samples.empty() ? y : traj.samples.back().x;
    return traj;
}

double envelope(const Certificate& cert, double x0_radius, double t) {
    if (t < 0.0 || t > cert.T)
        throw InvalidArgument("envelope time must lie in [0, T]");
    double bracket = cert.k1 * x0_radius;
    if (cert.M_d > 0.0 && cert.gamma)
        bracket += disturbance_term(cert.k1, cert.T, cert.M_d, *cert.gamma, cert.omega, cert.rho);
    const double residue = 1.0 - t / cert.T;
    return std::pow(residue, cert.lambda_star_star / cert.omega) * bracket;
}

double envelope(const Certificate& cert, std::span<const double> x0, double t) {
    const Vector target = cert.target.empty() ? Vector(x0.size(), 0.0) : cert.target;
    return envelope(cert, norm2(difference(x0, target)), t);
}

EnvelopeReport verify_envelope(const Trajectory& traj, const Certificate& cert, std::span<const double> x0) {
    EnvelopeReport report;
    const Vector target = cert.target.empty() ? Vector(x0.size(), 0.0) : cert.target;
    const double r0 = norm2(difference(x0, target));
    bool first = true;
    for (const auto& s : traj.samples) {
        const double allowed = envelope(cert, r0, s.t) * (1.0 + 1e-6) + 1e-9;
        const double margin = allowed - norm2(difference(s.x, target));
        if (first || margin < report.worst_margin) {
            report.worst_margin = margin;
            report.worst_time = s.t;
            first = false;
        }
        if (margin < 0.0) {
            report.passed = false;
            ++report.violations;
        }
    }
    return report;
}

double control_signal(const Trajectory& traj) {
    double best = 0.0;
    for (const auto& s : traj.samples)
        best = std::max(best, norm2(s.u));
    return best;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    const std::size_t n = traj.samples.empty() ? traj.terminal_state.size() : traj.samples.front().x.size();
    const std::size_t m = traj.samples.empty() ? 0 : traj.samples.front().u.size();
    out << "t,tau";
    for (std::size_t i = 1; i <= n; ++i)
        out << ",x" << i;
    for (std::size_t i = 1; i <= m; ++i)
        out << ",u" << i;
    out << '\n';
    for (const auto& s : traj.samples) {
        out << format_real(s.t) << ',' << format_real(s.tau);
        for (double v : s.x)
            out << ',' << format_real(v);
        for (double v : s.u)
            out << ',' << format_real(v);
        out << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    Trajectory traj;
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("trajectory CSV is empty", 0);
    std::size_t n = 0;
    std::size_t m = 0;
    {
        std::stringstream header(line);
        std::string col;
        std::size_t index = 0;
        while (std::getline(header, col, ',')) {
            if (index == 0 && col != "t")
                throw ParseError("trajectory CSV header must start with t,tau", 0);
            if (index >= 2) {
                if (col.rfind('x', 0) == 0)
                    ++n;
                else if (col.rfind('u', 0) == 0)
                    ++m;
                else
                    throw ParseError("unexpected trajectory CSV column '" + col + "'", 0);
            }
            ++index;
        }
    }
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        Vector values;
        while (std::getline(ss, cell, ','))
            values.push_back(std::strtod(cell.c_str(), nullptr));
        if (values.size() != 2 + n + m)
            throw ParseError("trajectory CSV row " + std::to_string(row) + " has the wrong number of columns", 0);
        Sample s;
        s.t = values[0];
        s.tau = values[1];
        s.x.assign(values.begin() + 2, values.begin() + 2 + static_cast<std::ptrdiff_t>(n));
        s.u.assign(values.begin() + 2 + static_cast<std::ptrdiff_t>(n), values.end());
        traj.samples.push_back(std::move(s));
    }
    if (!traj.samples.empty())
        traj.terminal_state = traj.samples.back().x;
    return traj;
}

void export_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    write_trajectory_csv(traj, out);
    if (!out)
        throw Error("failed writing " + path.string());
}

void write_envelope_svg(const Trajectory& traj, const Certificate& cert, std::span<const double> x0,
                        std::ostream& out) {
    constexpr double width = 640, height = 400, left = 60, right = 20, top = 20, bottom = 40;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    const Vector target = cert.target.empty() ? Vector(x0.size(), 0.0) : cert.target;
    const double r0 = norm2(difference(x0, target));

    double ymax = envelope(cert, r0, 0.0);
    for (const auto& s : traj.samples)
        ymax = std::max(ymax, norm2(difference(s.x, target)));
    if (!(ymax > 0.0))
        ymax = 1.0;

    auto px = [&](double t) { return left + pw * t / cert.T; };
    auto py = [&](double v) { return top + ph * (1.0 - v / ymax); };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 8 << "\" font-size=\"12\">t</text>\n";
    out << "<text x=\"4\" y=\"" << top + 10 << "\" font-size=\"12\">" << format_real(ymax) << "</text>\n";

    out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-dasharray=\"5,3\" points=\"";
    constexpr int kEnvelopePoints = 200;
    for (int k = 0; k <= kEnvelopePoints; ++k) {
        const double t = cert.T * k / kEnvelopePoints;
        out << fmt(px(t)) << ',' << fmt(py(envelope(cert, r0, t))) << ' ';
    }
    out << "\"/>\n";

    out << "<polyline fill=\"none\" stroke=\"#2c3e50\" points=\"";
    for (const auto& s : traj.samples)
        out << fmt(px(s.t)) << ',' << fmt(py(norm2(difference(s.x, target)))) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << left + pw - 150 << "\" y=\"" << top + 14
        << "\" font-size=\"12\" fill=\"#2c3e50\">|x(t) - x*|</text>\n";
    out << "<text x=\"" << left + pw - 150 << "\" y=\"" << top + 30
        << "\" font-size=\"12\" fill=\"#c0392b\">envelope</text>\n";
    out << "</svg>\n";
}

Trajectory simulate_open_loop(const VectorField& f, const Matrix& b, std::span<const double> x0, const ControlLaw& u,
                              double T, const SimulationOptions& options) {
    const std::size_t n = f.dimension();
    if (x0.size() != n || b.rows() != n)
        throw InvalidArgument("open-loop simulation dimension mismatch");
    if (!(T > 0.0))
        throw InvalidArgument("horizon must be positive");

    Trajectory traj;
    traj.T = T;
    traj.target = Vector(n, 0.0);

    const OdeRhs rhs = [&](double t, std::span<const double> x, std::span<double> dx) {
        const Vector fx = f.eval(x);
        const Vector ut = u(t, x);
        const Vector bu = b * std::span<const double>(ut);
        for (std::size_t i = 0; i < n; ++i)
            dx[i] = fx[i] + bu[i];
    };
    const StepObserver observer = [&](double t, std::span<const double> x) {
        Sample s;
        s.t = t;
        s.tau = t;
        s.x.assign(x.begin(), x.end());
        s.u = u(t, x);
        traj.samples.push_back(std::move(s));
        if (!(norm2(x) <= options.divergence_threshold))
            throw Diverged{t};
    };

    Dopri5Options dopts;
    dopts.rtol = options.rtol;
    dopts.atol = options.atol;
    try {
        const Vector y = integrate_dopri5(rhs, 0.0, x0, T, dopts, observer);
        traj.terminal_state = y;
    } catch (const Diverged&) {
        traj.diverged = true;
        traj.terminal_state = traj.samples.back().x;
    } catch (const SimulationError& e) {
        if (e.kind() != SimulationError::Kind::StepSizeUnderflow)
            throw;
        // A step collapse ahead of a finite-time blow-up.
        traj.diverged = true;
        traj.terminal_state = traj.samples.back().x;
    } catch (const DomainError&) {
        traj.diverged = true;
        traj.terminal_state = traj.samples.back().x;
    }
    return traj;
}

} // namespace nullctl
