#include "nullctl/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "nullctl/error.hpp"
#include "nullctl/gronwall.hpp"
#include "nullctl/synthesize.hpp"

namespace nullctl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kAutoSteps = 32;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

void validate_problem(const CertificationProblem& p) {
    const std::size_t n = p.f.dimension();
    if (n == 0)
        throw InvalidArgument("problem has no vector field");
    if (p.B.rows() != n || p.B.cols() == 0)
        throw InvalidArgument("B must have n rows and at least one column");
    if (!all_finite(p.B))
        throw InvalidArgument("B has non-finite entries");
    if (!(p.T > 0.0) || !std::isfinite(p.T))
        throw InvalidArgument("horizon T must be positive");
    if (!(p.bound.M_d >= 0.0) || !std::isfinite(p.bound.M_d))
        throw InvalidArgument("M_d must be a finite non-negative number");
    if (p.bound.M_d > 0.0 && !(p.bound.eta > 0.0))
        throw InvalidArgument("eta must be positive when M_d > 0");
    if (!p.target.empty() && p.target.size() != n)
        throw InvalidArgument("target dimension does not match the state dimension");
    if (!p.remainder_box.bounds.empty() && p.remainder_box.dimension() != n)
        throw InvalidArgument("remainder box dimension does not match the state dimension");
    if (p.input_bound && !(*p.input_bound >= 0.0))
        throw InvalidArgument("input bound Phi must be non-negative");
    if (p.K && (p.K->rows() != p.B.cols() || p.K->cols() != n))
        throw InvalidArgument("K must be m x n");
}

struct Prepared {
    VectorField f_hat;
    Matrix A;
    double norm_A = 0.0;
    double c_R = 0.0;
    Vector target;
};

Box effective_box(const CertificationProblem& p) {
    return p.remainder_box.bounds.empty() ? Box::symmetric(p.f.dimension(), 10.0) : p.remainder_box;
}

Prepared prepare(const CertificationProblem& p) {
    validate_problem(p);
    Prepared out;
    out.target = target_or_origin(p);
    const Box box = effective_box(p);
    if (!box.contains(out.target))
        throw InvalidArgument("target lies outside the remainder box");
    out.f_hat = p.f.shifted(out.target);
    const Vector origin(p.f.dimension(), 0.0);
    out.A = out.f_hat.jacobian(origin);
    out.norm_A = spectral_norm(out.A);

    const std::size_t n = p.f.dimension();
    const std::size_t r = rank(controllability_matrix(out.A, p.B));
    if (r < n)
        throw HypothesisFailure(Hypothesis::H1, "the linearised pair (A, B) is not controllable (rank " +
                                                    std::to_string(r) + " < " + std::to_string(n) + ")");

    Vector minus_target(out.target);
    for (auto& v : minus_target)
        v = -v;
    RemainderOptions ropt;
    ropt.override_value = p.c_R_override;
    out.c_R = remainder_coefficient(out.f_hat, box.translated(minus_target), ropt);
    return out;
}

struct Gain {
    Matrix K;
    ClosedLoop loop;
};

Gain make_gain(const CertificationProblem& p, const Prepared& prep, const std::vector<Complex>* poles) {
    Gain g;
    if (p.K) {
        g.K = *p.K;
    } else {
        if (poles == nullptr)
            throw InvalidArgument("poles are required when no gain K is supplied");
        if (poles->size() != p.f.dimension())
            throw InvalidArgument("number of poles must equal the state dimension");
        try {
            validate_poles(*poles);
        } catch (const InvalidArgument& e) {
            throw SynthesisError(e.what());
        }
        g.K = synthesize_gain(prep.A, p.B, *poles);
    }
    g.loop = validate_gain(prep.A, p.B, g.K);
    return g;
}

Certificate assemble(const CertificationProblem& p, const Prepared& prep, const Gain& gain, double gamma0,
                     double omega, std::optional<double> rho_override) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw InvalidArgument("omega must be positive");
    if (!(gamma0 > 0.0) || !std::isfinite(gamma0))
        throw InvalidArgument("Gamma0 must be positive");
    if (rho_override && !(*rho_override > 0.0))
        throw InvalidArgument("rho must be positive");

    Certificate c;
    c.A = prep.A;
    c.norm_A = prep.norm_A;
    c.c_R = prep.c_R;
    c.Gamma0 = gamma0;
    c.poles = gain.loop.spectrum.eigenvalues;
    c.lambda_tilde = gain.loop.lambda_tilde;
    c.k1 = gain.loop.k1;
    c.omega = omega;
    c.K = gain.K;
    c.T = p.T;
    c.M_d = p.bound.M_d;
    c.eta = p.bound.eta;
    c.target = prep.target;

    const double k1 = c.k1;
    const bool disturbed = c.M_d > 0.0;
    c.delta = disturbed ? -c.eta * omega : 0.0;
    c.rho = rho_override ? *rho_override : select_rho(k1, p.T, omega);
    c.lambda_star = c.lambda_tilde - k1 * p.T * c.norm_A;
    c.lambda_star_star = c.lambda_star - k1 * gamma0;

    // (H2)
    const double left = k1 * (gamma0 + p.T * c.norm_A) + omega;
    const double right = k1 * p.T * c.norm_A + omega - c.delta;
    if (!(left <= c.lambda_tilde) && !nearly_equal(left, c.lambda_tilde)) {
        const auto iv = omega_interval(c.lambda_tilde, k1, p.T, c.norm_A, gamma0, c.delta, c.M_d);
        throw HypothesisFailure(Hypothesis::H2, "k1(Gamma0 + T||A||) + omega = " + num(left) + " exceeds lambda~ = " +
                                                    num(c.lambda_tilde) +
                                                    (iv.empty ? std::string(" (no admissible omega)")
                                                              : " (admissible omega <= " + num(iv.hi) + ")"));
    }
    if (disturbed && !(c.lambda_tilde <= right) && !nearly_equal(c.lambda_tilde, right))
        throw HypothesisFailure(Hypothesis::H2, "lambda~ = " + num(c.lambda_tilde) + " exceeds k1 T||A|| + omega - delta = " +
                                                    num(right) + "; increase omega or eta");
    if (nearly_equal(left, c.lambda_tilde) || (disturbed && nearly_equal(c.lambda_tilde, right)))
        c.notes.emplace_back("omega sits on the boundary of the (H2) window (non-strict inequality used)");

    // (H3)
    if (!check_H3(p.bound, c.delta, k1, gamma0))
        throw HypothesisFailure(Hypothesis::H3, "delta = " + num(c.delta) + " is not below -k1*Gamma0 = " +
                                                    num(-k1 * gamma0) + "; the disturbance must decay faster");

    // (H4)
    if (disturbed) {
        c.gamma = c.lambda_star_star + k1 * gamma0 - omega + c.delta;
        if (!(*c.gamma < 0.0))
            throw HypothesisFailure(Hypothesis::H4, "gamma = " + num(*c.gamma) + " is not negative");
    }
    c.epsilon = compute_epsilon(gamma0, c.norm_A, c.c_R, p.T, omega);
    c.mu = compute_mu(c.epsilon, k1, p.T, c.M_d, c.gamma, omega, c.rho);

    c.controller_bounded = controller_bounded(c.lambda_star_star, omega);
    if (p.input_bound) {
        if (!c.controller_bounded) {
            c.Phi_check = false;
            c.notes.emplace_back("input constraint not checked: lambda**/omega < 1, the control is unbounded");
        } else {
            const double r = p.x0_radius ? *p.x0_radius : c.mu;
            c.Phi_check = std::isfinite(r) && check_input_constraint(c.K, omega, p.T, c.lambda_star_star, k1, r,
                                                                     c.M_d, c.gamma, *p.input_bound, c.rho);
        }
    }
    return c;
}

std::vector<double> auto_gamma0(double norm_a) {
    const double base = norm_a > 0.0 ? norm_a : 1.0;
    std::vector<double> g;
    for (int k = 1; k <= kAutoSteps; ++k)
        g.push_back(norm_a + base * static_cast<double>(k) / kAutoSteps);
    return g;
}

std::vector<std::vector<Complex>> auto_poles(std::size_t n, double norm_a, double T) {
    const double base = (2.0 + T) * std::max(norm_a, 1.0);
    std::vector<std::vector<Complex>> sets;
    for (double s : {0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0}) {
        const double level = s * base;
        std::vector<Complex> poles;
        for (std::size_t j = 0; j < n; ++j)
            poles.emplace_back(-(level + static_cast<double>(j) * std::max(1.0, 0.1 * level)), 0.0);
        sets.push_back(std::move(poles));
    }
    return sets;
}

// Candidate omegas for fixed (Gamma0, gain), following delta = -eta omega.
std::vector<double> auto_omega(const CertificationProblem& p, const Prepared& prep, const Gain& gain, double gamma0) {
    const double k1 = gain.loop.k1;
    const double lstar = gain.loop.lambda_tilde - k1 * p.T * prep.norm_A;
    const double lss = lstar - k1 * gamma0;
    std::vector<double> out;
    if (!(lss > 0.0))
        return out;
    if (p.bound.M_d == 0.0) {
        for (int k = 1; k <= kAutoSteps; ++k)
            out.push_back(lss * static_cast<double>(k) / kAutoSteps);
        return out;
    }
    const double eta = p.bound.eta;
    const double lo = std::max(lstar / (1.0 + eta), k1 * gamma0 / eta);
    if (lo > lss)
        return out;
    if (lo == lss)
        return {lo};
    for (int k = 0; k <= kAutoSteps; ++k)
        out.push_back(lo + (lss - lo) * static_cast<double>(k) / kAutoSteps);
    return out;
}

bool better(const Certificate& c, const Certificate& best) {
    if (c.mu != best.mu)
        return c.mu > best.mu;
    if (c.Gamma0 != best.Gamma0)
        return c.Gamma0 < best.Gamma0;
    return c.omega < best.omega;
}

} // namespace

bool OmegaInterval::contains(double omega) const {
    if (empty || !(omega > 0.0))
        return false;
    const double slack = 1e-12 * std::max(1.0, std::abs(hi));
    if (omega > hi + slack)
        return false;
    if (lo_closed)
        return omega >= lo - 1e-12 * std::max(1.0, std::abs(lo));
    return omega > lo;
}

Vector target_or_origin(const CertificationProblem& problem) {
    return problem.target.empty() ? Vector(problem.f.dimension(), 0.0) : problem.target;
}

Matrix linearization(const CertificationProblem& problem) {
    const Vector x = target_or_origin(problem);
    return problem.f.jacobian(x);
}

bool check_H1(const CertificationProblem& problem) {
    const Matrix a = linearization(problem);
    if (problem.B.rows() != a.rows())
        throw InvalidArgument("B must have n rows");
    return rank(controllability_matrix(a, problem.B)) == a.rows();
}

double compute_epsilon(double gamma0, double norm_a, double c_R, double T, double omega) {
    if (!(c_R >= 0.0) || !(T > 0.0) || !(omega > 0.0))
        throw InvalidArgument("compute_epsilon expects c_R >= 0, T > 0 and omega > 0");
    if (!(gamma0 > norm_a))
        throw HypothesisFailure(Hypothesis::H4, "Gamma0 = " + num(gamma0) + " must exceed ||A|| = " + num(norm_a) +
                                                    " (epsilon would not be positive)");
    if (c_R == 0.0)
        return kInf;
    return (gamma0 - norm_a) / (c_R * T * omega);
}

OmegaInterval omega_interval(double lambda_tilde, double k1, double T, double norm_a, double gamma0, double delta,
                             double M_d) {
    OmegaInterval iv;
    iv.hi = lambda_tilde - k1 * (gamma0 + T * norm_a);
    if (M_d > 0.0) {
        const double lo = lambda_tilde - k1 * T * norm_a + delta;
        if (lo > 0.0) {
            iv.lo = lo;
            iv.lo_closed = true;
        }
    }
    iv.empty = !(iv.hi > 0.0) || (iv.lo_closed && iv.lo > iv.hi);
    return iv;
}

bool check_H3(const DisturbanceBound& bound, double delta, double k1, double gamma0) {
    if (bound.M_d > 0.0)
        return delta < -k1 * gamma0;
    return delta == 0.0;
}

double disturbance_term(double k1, double T, double M_d, double gamma, double omega, std::optional<double> rho) {
    if (M_d == 0.0)
        return 0.0;
    const double r = rho ? *rho : omega;
    return r * std::expm1(-k1 * T * omega * M_d / (r * gamma));
}

double compute_mu(double epsilon, double k1, double T, double M_d, std::optional<double> gamma, double omega,
                  std::optional<double> rho) {
    if (!(epsilon > 0.0))
        throw HypothesisFailure(Hypothesis::H4, "epsilon = " + num(epsilon) + " is not positive");
    if (!(k1 >= 1.0 - 1e-12))
        throw InvalidArgument("k1 must be at least 1");
    double term = 0.0;
    if (M_d > 0.0) {
        if (!gamma || !(*gamma < 0.0))
            throw HypothesisFailure(Hypothesis::H4, "gamma must be negative when M_d > 0");
        term = disturbance_term(k1, T, M_d, *gamma, omega, rho);
    }
    const double mu = (epsilon - term) / k1;
    if (!(mu > 0.0))
        throw HypothesisFailure(Hypothesis::H4, "the ball equation has no positive solution (mu = " + num(mu) + ")");
    return mu;
}

bool controller_bounded(double lambda_star_star, double omega) { return lambda_star_star / omega >= 1.0; }

double input_constraint_lhs(const Matrix& K, double omega, double T, double lambda_star_star, double k1,
                            double x0_radius, double M_d, std::optional<double> gamma, std::optional<double> rho) {
    if (!controller_bounded(lambda_star_star, omega))
        throw InvalidArgument("the input-constraint condition needs lambda**/omega >= 1");
    double term = 0.0;
    if (M_d > 0.0) {
        if (!gamma || !(*gamma < 0.0))
            throw InvalidArgument("gamma must be negative when M_d > 0");
        term = disturbance_term(k1, T, M_d, *gamma, omega, rho);
    }
    const double scale = spectral_norm(K) / (omega * std::pow(T, lambda_star_star / omega));
    return scale * (k1 * x0_radius + term);
}

bool check_input_constraint(const Matrix& K, double omega, double T, double lambda_star_star, double k1,
                            double x0_radius, double M_d, std::optional<double> gamma, double phi,
                            std::optional<double> rho) {
    return input_constraint_lhs(K, omega, T, lambda_star_star, k1, x0_radius, M_d, gamma, rho) <= phi;
}

Certificate certify(const CertificationProblem& problem, const CertifyOptions& options) {
    const bool need_poles = !problem.K && !options.poles;
    if (!options.gamma0 || !options.omega || need_poles) {
        SearchGrid grid;
        if (options.gamma0)
            grid.gamma0 = {*options.gamma0};
        if (options.omega)
            grid.omega = {*options.omega};
        if (options.poles)
            grid.poles = {*options.poles};
        return maximize_mu(problem, grid, options.rho);
    }
    const Prepared prep = prepare(problem);
    const Gain gain = make_gain(problem, prep, options.poles ? &*options.poles : nullptr);
    return assemble(problem, prep, gain, *options.gamma0, *options.omega, options.rho);
}

Certificate certify_at(const CertificationProblem& problem, const CertifyOptions& options) {
    return certify(problem, options);
}

Certificate maximize_mu(const CertificationProblem& problem, const SearchGrid& grid, std::optional<double> rho) {
    const Prepared prep = prepare(problem);

    const auto gammas = grid.gamma0.empty() ? auto_gamma0(prep.norm_A) : grid.gamma0;
    std::vector<std::vector<Complex>> pole_sets = grid.poles;
    if (problem.K)
        pole_sets = {{}};
    else if (pole_sets.empty())
        pole_sets = auto_poles(problem.f.dimension(), prep.norm_A, problem.T);

    std::optional<Certificate> best;
    std::optional<Certificate> best_phi_violating;
    std::optional<HypothesisFailure> deepest;
    std::optional<SynthesisError> synthesis_failure;
    std::size_t candidates = 0;

    auto record = [&](const HypothesisFailure& f) {
        if (!deepest || f.which() > deepest->which())
            deepest = f;
    };

    for (const auto& poles : pole_sets) {
        Gain gain;
        try {
            gain = make_gain(problem, prep, problem.K ? nullptr : &poles);
        } catch (const SynthesisError& e) {
            if (!synthesis_failure)
                synthesis_failure = e;
            continue;
        }
        for (double g0 : gammas) {
            const auto omegas = grid.omega.empty() ? auto_omega(problem, prep, gain, g0) : grid.omega;
            if (omegas.empty()) {
                ++candidates;
                record(HypothesisFailure(Hypothesis::H2, "no admissible omega for Gamma0 = " + num(g0) +
                                                             " and lambda~ = " + num(gain.loop.lambda_tilde)));
                continue;
            }
            for (double w : omegas) {
                ++candidates;
                try {
                    Certificate c = assemble(problem, prep, gain, g0, w, rho);
                    if (c.Phi_check && !*c.Phi_check) {
                        if (!best_phi_violating || better(c, *best_phi_violating))
                            best_phi_violating = std::move(c);
                        continue;
                    }
                    if (!best || better(c, *best))
                        best = std::move(c);
                } catch (const HypothesisFailure& f) {
                    record(f);
                }
            }
        }
    }

    if (best)
        return *best;
    if (best_phi_violating) {
        best_phi_violating->notes.emplace_back("no searched candidate satisfies the input constraint");
        return *best_phi_violating;
    }
    if (deepest)
        throw HypothesisFailure(deepest->which(), "no feasible point among " + std::to_string(candidates) +
                                                      " searched candidates; last reason: " + deepest->what());
    if (synthesis_failure)
        throw *synthesis_failure;
    throw InvalidArgument("search grid is empty");
}

GlobalReport check_global(const CertificationProblem& problem, const GlobalOptions& options) {
    validate_problem(problem);
    GlobalReport report;
    report.requested_mu = options.mu;

    const Vector target = target_or_origin(problem);
    Vector minus_target(target);
    for (auto& v : minus_target)
        v = -v;
    const VectorField f_hat = problem.f.shifted(target);
    const Box base = effective_box(problem).translated(minus_target);

    RemainderOptions sampling;
    sampling.points_per_axis = 101;
    sampling.safety_factor = 1.0;
    report.box_scales = {1.0, 2.0, 4.0, 8.0};
    double running = 0.0;
    for (double s : report.box_scales) {
        const Box box = base.scaled(s);
        double total = 0.0;
        for (std::size_t i = 0; i < f_hat.dimension(); ++i)
            total += hessian_norm_sup(f_hat, i, box, sampling);
        running = std::max(running, total);
        report.hessian_sup.push_back(running);
    }
    report.hessians_bounded = true;
    for (std::size_t k = 1; k < report.hessian_sup.size(); ++k)
        if (report.hessian_sup[k] > report.hessian_sup[k - 1] * (1.0 + options.growth_tolerance) + 1e-12)
            report.hessians_bounded = false;

    report.B_regular = is_regular(problem.B);
    report.global = report.hessians_bounded && report.B_regular;

    RemainderOptions ropt;
    ropt.override_value = problem.c_R_override;
    report.c_R = remainder_coefficient(f_hat, base, ropt);

    if (!report.global || !options.mu)
        return report;
    if (!(*options.mu > 0.0)) {
        report.witness_error = "requested mu must be positive";
        return report;
    }

    try {
        const Prepared prep = prepare(problem);
        const double gamma0 = options.gamma0 ? *options.gamma0 : (prep.norm_A > 0.0 ? 2.0 * prep.norm_A : 1.0);
        const double omega =
            prep.c_R > 0.0 ? (gamma0 - prep.norm_A) / (prep.c_R * problem.T * *options.mu) : 1.0;

        std::vector<std::vector<Complex>> tries;
        if (options.poles)
            tries.push_back(*options.poles);
        const double needed = gamma0 + problem.T * prep.norm_A + omega;
        std::vector<Complex> fallback;
        for (std::size_t j = 0; j < problem.f.dimension(); ++j)
            fallback.emplace_back(-(std::ceil(needed) + 1.0 + static_cast<double>(j)), 0.0);
        tries.push_back(std::move(fallback));

        std::string last_error;
        for (const auto& poles : tries) {
            try {
                CertificationProblem gp = problem;
                gp.K.reset();
                const Gain gain = make_gain(gp, prep, &poles);
                report.witness = assemble(gp, prep, gain, gamma0, omega, std::nullopt);
                return report;
            } catch (const Error& e) {
                last_error = e.what();
            }
        }
        report.witness_error = last_error;
    } catch (const Error& e) {
        report.witness_error = e.what();
    }
    return report;
}

} // namespace nullctl
