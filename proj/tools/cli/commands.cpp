#include "cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cli/config.hpp"
#include "nullctl/nullctl.hpp"

namespace nullctl::cli {

namespace {

std::string vec_str(std::span<const double> v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ", ";
        s += format_real(v[i]);
    }
    return s + ")";
}

std::string matrix_str(const Matrix& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i)
            s += ", ";
        s += "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j)
                s += ", ";
            s += format_real(m(i, j));
        }
        s += "]";
    }
    return s + "]";
}

std::string complex_str(const Complex& c) {
    if (c.imag() == 0.0)
        return format_real(c.real());
    return format_real(c.real()) + (c.imag() < 0 ? " - " : " + ") + format_real(std::abs(c.imag())) + "i";
}

void print_summary(const Certificate& c, std::ostream& out) {
    out << "certificate: feasible\n";
    out << "  A = " << matrix_str(c.A) << ", ||A|| = " << format_real(c.norm_A) << "\n";
    out << "  c_R = " << format_real(c.c_R) << ", Gamma0 = " << format_real(c.Gamma0)
        << ", epsilon = " << format_real(c.epsilon) << "\n";
    out << "  closed-loop poles:";
    for (const auto& p : c.poles)
        out << ' ' << complex_str(p);
    out << "\n  lambda~ = " << format_real(c.lambda_tilde) << ", k1 = " << format_real(c.k1)
        << ", omega = " << format_real(c.omega) << ", delta = " << format_real(c.delta)
        << ", rho = " << format_real(c.rho) << "\n";
    out << "  lambda* = " << format_real(c.lambda_star) << ", lambda** = " << format_real(c.lambda_star_star);
    if (c.gamma)
        out << ", gamma = " << format_real(*c.gamma);
    out << "\n  K = " << matrix_str(c.K) << "\n";
    out << "  mu = " << format_real(c.mu) << "\n";
    out << "  controller bounded: " << (c.controller_bounded ? "yes" : "no")
        << " (lambda**/omega = " << format_real(c.lambda_star_star / c.omega) << ")\n";
    if (c.Phi_check)
        out << "  input constraint: " << (*c.Phi_check ? "satisfied" : "violated") << "\n";
    for (const auto& note : c.notes)
        out << "  note: " << note << "\n";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write " + path);
    f << text;
    if (!f)
        throw ConfigError("failed writing " + path);
}

// Runs `body` and maps library exceptions onto exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const HypothesisFailure& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const SynthesisError& e) {
        err << "synthesis failed: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const SimulationError& e) {
        err << "simulation failed: " << e.what() << "\n";
        return kExitFailure;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

std::vector<std::uint64_t> batch_seeds(const SimulateSettings& s) {
    if (const char* env = std::getenv("NULLCTL_SEED"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw ConfigError("NULLCTL_SEED must be a non-negative integer");
        return {static_cast<std::uint64_t>(v)};
    }
    return s.seeds;
}

void check_matches(const Certificate& c, const Config& cfg) {
    const std::size_t n = cfg.problem.f.dimension();
    const std::size_t m = cfg.problem.B.cols();
    if (c.K.rows() != m || c.K.cols() != n)
        throw ConfigError("certificate gain K is not " + std::to_string(m) + " x " + std::to_string(n));
    if (!c.target.empty() && c.target.size() != n)
        throw ConfigError("certificate target dimension does not match the config");
    const Vector target = target_or_origin(cfg.problem);
    for (std::size_t i = 0; i < c.target.size(); ++i)
        if (std::abs(c.target[i] - target[i]) > 1e-9 * std::max(1.0, std::abs(target[i])))
            throw ConfigError("certificate target differs from the config target");
    if (std::abs(c.T - cfg.problem.T) > 1e-12 * cfg.problem.T)
        throw ConfigError("certificate horizon T differs from the config");
    if (std::abs(c.M_d - cfg.problem.bound.M_d) > 1e-12 * std::max(1.0, cfg.problem.bound.M_d))
        throw ConfigError("certificate M_d differs from the config");
}

} // namespace

Vector random_point_in_ball(std::uint64_t seed, const Vector& centre, double radius) {
    std::mt19937_64 gen(seed);
    auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    const std::size_t n = centre.size();
    Vector p(n);
    for (;;) {
        double r2 = 0.0;
        for (auto& v : p) {
            v = 2.0 * uniform() - 1.0;
            r2 += v * v;
        }
        if (r2 < 1.0)
            break;
    }
    for (std::size_t i = 0; i < n; ++i)
        p[i] = centre[i] + radius * p[i];
    return p;
}

std::vector<double> sweep_grid(double from, double to, double step) {
    std::vector<double> grid;
    if (!(step > 0.0) || !std::isfinite(from) || !std::isfinite(to) || to < from)
        return grid;
    for (std::size_t k = 0;; ++k) {
        const double v = from + step * static_cast<double>(k);
        if (v > to + 1e-9 * step)
            break;
        grid.push_back(v);
        if (grid.size() > 1'000'000)
            break;
    }
    return grid;
}

int cmd_certify(const CertifyArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Config cfg = load_config(args.config);
        if (args.rho)
            cfg.options.rho = *args.rho;
        const Certificate c = certify(cfg.problem, cfg.options);
        print_summary(c, out);
        const std::string json = certificate_to_json(c);
        if (args.out.empty()) {
            out << json;
        } else {
            write_text(args.out, json);
            out << "certificate written to " << args.out << "\n";
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Config cfg = load_config(args.config);
        Certificate cert;
        if (!args.certificate.empty()) {
            cert = certificate_from_json(read_file(args.certificate));
            check_matches(cert, cfg);
        } else {
            cert = certify(cfg.problem, cfg.options);
        }

        SimulationOptions opts;
        opts.theta_res = args.theta_res ? *args.theta_res : cfg.simulate.theta_res;
        opts.fixed_step_rk4 = args.rk4;
        const double threshold = args.threshold ? *args.threshold : cfg.simulate.threshold;
        const Vector target = cert.target.empty() ? target_or_origin(cfg.problem) : cert.target;

        struct Run {
            std::string label;
            Vector x0;
        };
        std::vector<Run> runs;
        if (cfg.simulate.x0)
            runs.push_back({"x0", *cfg.simulate.x0});
        for (std::uint64_t seed : batch_seeds(cfg.simulate))
            runs.push_back({"seed " + std::to_string(seed), random_point_in_ball(seed, target, 0.95 * cert.mu)});
        if (runs.empty())
            throw ConfigError("simulate needs simulate.x0 or simulate.seeds");

        out << "certified radius mu = " << format_real(cert.mu) << ", omega = " << format_real(cert.omega)
            << ", theta_res = " << format_real(opts.theta_res) << "\n";
        bool ok = true;
        for (std::size_t k = 0; k < runs.size(); ++k) {
            const auto& run = runs[k];
            const Trajectory traj = simulate_closed_loop(cfg.problem, cert, run.x0, cfg.disturbance, opts);
            Vector e(traj.terminal_state);
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] -= target[i];
            const double terminal = norm2(e);
            const EnvelopeReport env = verify_envelope(traj, cert, run.x0);
            const bool terminal_ok = terminal <= threshold;
            ok = ok && terminal_ok && env.passed;
            out << run.label << ": x0 = " << vec_str(run.x0) << ", samples = " << traj.samples.size()
                << ", terminal |x - x*| = " << format_real(terminal) << (terminal_ok ? " (ok)" : " (above threshold)")
                << ", envelope " << (env.passed ? "pass" : "FAIL") << " (worst margin "
                << format_real(env.worst_margin) << " at t = " << format_real(env.worst_time)
                << "), max |u| = " << format_real(control_signal(traj)) << "\n";
            if (k == 0) {
                if (!args.out.empty())
                    export_trajectory(traj, args.out);
                if (!args.plot.empty()) {
                    std::ostringstream svg;
                    write_envelope_svg(traj, cert, run.x0, svg);
                    write_text(args.plot, svg.str());
                }
            }
        }
        out << (ok ? "result: pass\n" : "result: FAIL\n");
        return static_cast<int>(ok ? kExitOk : kExitFailure);
    });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Config cfg = load_config(args.config);
        if (args.axis != "omega" && args.axis != "gamma0" && args.axis != "poles")
            throw ConfigError("--axis must be one of omega, gamma0, poles");
        const auto grid = sweep_grid(args.from, args.to, args.step);
        if (grid.empty())
            throw ConfigError("sweep grid is empty (check --from, --to, --step)");
        if (args.axis == "poles" && !cfg.options.poles)
            throw ConfigError("the poles axis needs certify.poles in the config");

        std::ostringstream csv;
        csv << "parameter,mu,lambda_ratio,feasible\n";
        for (double p : grid) {
            CertificationProblem problem = cfg.problem;
            CertifyOptions opts = cfg.options;
            if (args.axis == "omega") {
                opts.omega = p;
            } else if (args.axis == "gamma0") {
                opts.gamma0 = p;
            } else {
                double max_re = -std::numeric_limits<double>::infinity();
                for (const auto& z : *opts.poles)
                    max_re = std::max(max_re, z.real());
                const double shift = -p - max_re;
                for (auto& z : *opts.poles)
                    z += shift;
            }
            csv << format_real(p) << ',';
            try {
                if (args.delta) {
                    if (!opts.omega)
                        throw ConfigError("--delta needs a fixed omega (sweep omega or set certify.omega)");
                    if (!(*args.delta < 0.0))
                        throw ConfigError("--delta must be negative");
                    problem.bound.eta = -*args.delta / *opts.omega;
                }
                const Certificate c = certify(problem, opts);
                csv << format_real(c.mu) << ',' << format_real(c.lambda_star_star / c.omega) << ",true\n";
            } catch (const HypothesisFailure&) {
                csv << ",,false\n";
            } catch (const SynthesisError&) {
                csv << ",,false\n";
            }
        }
        if (args.out.empty()) {
            out << csv.str();
        } else {
            write_text(args.out, csv.str());
            out << "sweep written to " << args.out << "\n";
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_global(const GlobalArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Config cfg = load_config(args.config);
        GlobalOptions opts;
        opts.mu = args.mu;
        opts.gamma0 = cfg.options.gamma0;
        opts.poles = cfg.options.poles;
        const GlobalReport r = check_global(cfg.problem, opts);

        out << "global: ";
        if (r.global) {
            out << "yes";
            if (r.c_R == 0.0)
                out << ", c_R=0";
        } else {
            out << "no (";
            if (!r.B_regular)
                out << "B singular";
            if (!r.B_regular && !r.hessians_bounded)
                out << "; ";
            if (!r.hessians_bounded)
                out << "second derivatives appear unbounded";
            out << ")";
        }
        out << "\n";
        out << "  B regular: " << (r.B_regular ? "yes" : "no") << "\n";
        out << "  bounded second derivatives (heuristic, sup ||Hessian|| on boxes scaled";
        for (double s : r.box_scales)
            out << " x" << format_real(s);
        out << "): " << (r.hessians_bounded ? "yes" : "no") << " [";
        for (std::size_t k = 0; k < r.hessian_sup.size(); ++k)
            out << (k ? ", " : "") << format_real(r.hessian_sup[k]);
        out << "]\n";
        out << "  c_R = " << format_real(r.c_R) << "\n";
        if (r.requested_mu && r.global) {
            out << "  requested mu = " << format_real(*r.requested_mu) << ": ";
            if (r.witness) {
                const Certificate& c = *r.witness;
                out << "omega = " << format_real(c.omega) << ", Gamma0 = " << format_real(c.Gamma0)
                    << ", K = " << matrix_str(c.K) << ", certified mu = " << format_real(c.mu) << "\n";
            } else {
                out << "no witness (" << r.witness_error << ")\n";
            }
        }
        return static_cast<int>(kExitOk);
    });
}

} // namespace nullctl::cli
