#include "nullctl/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include <json.hpp>

#include "nullctl/error.hpp"

namespace nullctl {

using nlohmann::ordered_json;

namespace {

// Reals are stored as numbers parsed back from their 12-digit text, so the
// JSON holds exactly the printed value.
ordered_json real(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return nullptr;
    return std::strtod(format_real(v).c_str(), nullptr);
}

ordered_json matrix_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(real(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

double read_real(const ordered_json& j, const char* key) {
    if (!j.contains(key))
        throw InvalidArgument(std::string("certificate field '") + key + "' is missing");
    const auto& v = j.at(key);
    if (v.is_number())
        return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
    }
    throw InvalidArgument(std::string("certificate field '") + key + "' must be a number");
}

double element(const ordered_json& v) {
    if (v.is_number())
        return v.get<double>();
    if (v.is_string() && v.get<std::string>() == "inf")
        return std::numeric_limits<double>::infinity();
    throw InvalidArgument("certificate matrix entries must be numbers");
}

Matrix read_matrix(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw InvalidArgument(std::string("certificate field '") + key + "' must be a matrix");
    const auto& rows = j.at(key);
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.at(0).size();
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (!rows.at(i).is_array() || rows.at(i).size() != c)
            throw InvalidArgument(std::string("certificate field '") + key + "' is ragged");
        for (std::size_t k = 0; k < c; ++k)
            m(i, k) = element(rows.at(i).at(k));
    }
    return m;
}

} // namespace

std::string format_real(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string certificate_to_json(const Certificate& c, int indent) {
    ordered_json j;
    j["A"] = matrix_json(c.A);
    j["norm_A"] = real(c.norm_A);
    j["c_R"] = real(c.c_R);
    j["Gamma0"] = real(c.Gamma0);
    j["epsilon"] = real(c.epsilon);
    ordered_json poles = ordered_json::array();
    for (const auto& p : c.poles)
        poles.push_back(ordered_json::array({real(p.real()), real(p.imag())}));
    j["poles"] = std::move(poles);
    j["lambda_tilde"] = real(c.lambda_tilde);
    j["k1"] = real(c.k1);
    j["omega"] = real(c.omega);
    j["delta"] = real(c.delta);
    j["rho"] = real(c.rho);
    j["lambda_star"] = real(c.lambda_star);
    j["lambda_star_star"] = real(c.lambda_star_star);
    j["gamma"] = c.gamma ? real(*c.gamma) : ordered_json(nullptr);
    j["mu"] = real(c.mu);
    j["K"] = matrix_json(c.K);
    j["controller_bounded"] = c.controller_bounded;
    j["Phi_check"] = c.Phi_check ? ordered_json(*c.Phi_check) : ordered_json(nullptr);
    j["T"] = real(c.T);
    j["M_d"] = real(c.M_d);
    j["eta"] = real(c.eta);
    ordered_json target = ordered_json::array();
    for (double v : c.target)
        target.push_back(real(v));
    j["target"] = std::move(target);
    return j.dump(indent) + "\n";
}

Certificate certificate_from_json(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError(std::string("invalid certificate JSON: ") + e.what(), e.byte);
    }
    if (!j.is_object())
        throw InvalidArgument("certificate JSON must be an object");

    Certificate c;
    c.A = read_matrix(j, "A");
    c.norm_A = read_real(j, "norm_A");
    c.c_R = read_real(j, "c_R");
    c.Gamma0 = read_real(j, "Gamma0");
    c.epsilon = read_real(j, "epsilon");
    if (!j.contains("poles") || !j.at("poles").is_array())
        throw InvalidArgument("certificate field 'poles' must be a list of [re, im] pairs");
    for (const auto& p : j.at("poles")) {
        if (!p.is_array() || p.size() != 2)
            throw InvalidArgument("certificate poles must be [re, im] pairs");
        c.poles.emplace_back(element(p.at(0)), element(p.at(1)));
    }
    c.lambda_tilde = read_real(j, "lambda_tilde");
    c.k1 = read_real(j, "k1");
    c.omega = read_real(j, "omega");
    c.delta = read_real(j, "delta");
    c.rho = read_real(j, "rho");
    c.lambda_star = read_real(j, "lambda_star");
    c.lambda_star_star = read_real(j, "lambda_star_star");
    if (j.contains("gamma") && !j.at("gamma").is_null())
        c.gamma = read_real(j, "gamma");
    c.mu = read_real(j, "mu");
    c.K = read_matrix(j, "K");
    if (!j.contains("controller_bounded") || !j.at("controller_bounded").is_boolean())
        throw InvalidArgument("certificate field 'controller_bounded' must be a boolean");
    c.controller_bounded = j.at("controller_bounded").get<bool>();
    if (j.contains("Phi_check") && !j.at("Phi_check").is_null())
        c.Phi_check = j.at("Phi_check").get<bool>();
    c.T = read_real(j, "T");
    c.M_d = read_real(j, "M_d");
    c.eta = read_real(j, "eta");
    if (j.contains("target"))
        for (const auto& v : j.at("target"))
            c.target.push_back(element(v));
    return c;
}

} // namespace nullctl
