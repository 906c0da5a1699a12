#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nullctl/linalg.hpp"
#include "nullctl/matrix.hpp"
#include "nullctl/vector_field.hpp"

namespace nullctl {

// |f(x*) + w(t)| <= M_d (1 - t/T)^eta
struct DisturbanceBound {
    double M_d = 0.0;
    double eta = 0.0;
};

struct CertificationProblem {
    VectorField f;
    Matrix B;
    double T = 1.0;
    DisturbanceBound bound;
    Vector target;                     // empty means the origin
    std::optional<double> input_bound; // Phi
    Box remainder_box;                 // empty means [-10, 10]^n
    std::optional<double> c_R_override;
    std::optional<Matrix> K;           // user-supplied gain, bypasses pole placement
    std::optional<double> x0_radius;   // |x0 - x*| for the input-constraint check, defaults to mu
};

// Unset fields are searched for (see maximize_mu).
struct CertifyOptions {
    std::optional<double> gamma0;
    std::optional<std::vector<Complex>> poles;
    std::optional<double> omega;
    std::optional<double> rho; // replaces the select_rho rule
};

struct Certificate {
    Matrix A;
    double norm_A = 0.0;
    double c_R = 0.0;
    double Gamma0 = 0.0;
    double epsilon = 0.0;
    std::vector<Complex> poles; // eigenvalues of A + BK
    double lambda_tilde = 0.0;
    double k1 = 1.0;
    double omega = 0.0;
    double delta = 0.0;
    double rho = 1.0;
    double lambda_star = 0.0;
    double lambda_star_star = 0.0;
    std::optional<double> gamma; // only when M_d > 0
    double mu = 0.0;
    Matrix K;
    bool controller_bounded = false;
    std::optional<bool> Phi_check;
    double T = 1.0;
    double M_d = 0.0;
    double eta = 0.0;
    Vector target;
    std::vector<std::string> notes; // diagnostics, not serialized
};

struct OmegaInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;
    bool empty = true;

    [[nodiscard]] bool contains(double omega) const;
};

[[nodiscard]] Vector target_or_origin(const CertificationProblem& problem);

// Jacobian of f at the target.
[[nodiscard]] Matrix linearization(const CertificationProblem& problem);

[[nodiscard]] bool check_H1(const CertificationProblem& problem);

// (Gamma0 - ||A||) / (c_R T omega); infinity when c_R = 0.
[[nodiscard]] double compute_epsilon(double gamma0, double norm_a, double c_R, double T, double omega);

[[nodiscard]] OmegaInterval omega_interval(double lambda_tilde, double k1, double T, double norm_a, double gamma0,
                                           double delta, double M_d);

[[nodiscard]] bool check_H3(const DisturbanceBound& bound, double delta, double k1, double gamma0);

// rho (exp(-k1 T omega M_d / (rho gamma)) - 1); with rho = omega this is the
// disturbance contribution (e^{-k1 T M_d / gamma} - 1) omega.
[[nodiscard]] double disturbance_term(double k1, double T, double M_d, double gamma, double omega,
                                      std::optional<double> rho = std::nullopt);

// Solves k1 mu + disturbance_term = epsilon; throws HypothesisFailure(H4) if mu <= 0.
[[nodiscard]] double compute_mu(double epsilon, double k1, double T, double M_d, std::optional<double> gamma,
                                double omega, std::optional<double> rho = std::nullopt);

[[nodiscard]] bool controller_bounded(double lambda_star_star, double omega);

[[nodiscard]] double input_constraint_lhs(const Matrix& K, double omega, double T, double lambda_star_star, double k1,
                                          double x0_radius, double M_d, std::optional<double> gamma,
                                          std::optional<double> rho = std::nullopt);

[[nodiscard]] bool check_input_constraint(const Matrix& K, double omega, double T, double lambda_star_star,
                                          double k1, double x0_radius, double M_d, std::optional<double> gamma,
                                          double phi, std::optional<double> rho = std::nullopt);

// Full certificate at fixed (Gamma0, poles or K, omega); with any of them
// unset, delegates to maximize_mu. Hypothesis failures are thrown in H1..H4 order.
[[nodiscard]] Certificate certify(const CertificationProblem& problem, const CertifyOptions& options = {});

// Same pipeline; the shift to the target is explicit in the name.
[[nodiscard]] Certificate certify_at(const CertificationProblem& problem, const CertifyOptions& options = {});

// Empty lists are filled automatically: Gamma0 in ||A||(1 + k/32), k = 1..32;
// omega sampled over the admissible range of each candidate; pole sets with
// growing decay rates. Ties in mu go to the lexicographically smallest (Gamma0, omega).
struct SearchGrid {
    std::vector<double> gamma0;
    std::vector<double> omega;
    std::vector<std::vector<Complex>> poles;
};

[[nodiscard]] Certificate maximize_mu(const CertificationProblem& problem, const SearchGrid& grid,
                                      std::optional<double> rho = std::nullopt);

struct GlobalReport {
    bool hessians_bounded = false; // heuristic: growing-box stabilisation
    std::vector<double> box_scales;
    std::vector<double> hessian_sup; // running max of sum_i sup ||H_i|| per scale
    bool B_regular = false;
    bool global = false;
    double c_R = 0.0;
    std::optional<double> requested_mu;
    std::optional<Certificate> witness;
    std::string witness_error;
};

struct GlobalOptions {
    std::optional<double> mu;
    std::optional<double> gamma0;
    std::optional<std::vector<Complex>> poles;
    double growth_tolerance = 0.01;
};

[[nodiscard]] GlobalReport check_global(const CertificationProblem& problem, const GlobalOptions& options = {});

} // namespace nullctl
