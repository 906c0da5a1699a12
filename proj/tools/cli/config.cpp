#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nullctl::cli {

using nlohmann::json;

namespace {

double number(const json& j, const std::string& where) {
    if (!j.is_number())
        throw ConfigError(where + " must be a number");
    return j.get<double>();
}

Vector vector_of(const json& j, const std::string& where) {
    if (!j.is_array())
        throw ConfigError(where + " must be an array of numbers");
    Vector v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

Matrix matrix_of(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
    if (!j.is_array())
        throw ConfigError(where + " must be an array");
    Matrix m(rows, cols);
    const bool nested = !j.empty() && j[0].is_array();
    if (nested) {
        if (j.size() != rows)
            throw ConfigError(where + " must have " + std::to_string(rows) + " rows");
        for (std::size_t i = 0; i < rows; ++i) {
            const Vector row = vector_of(j[i], where + "[" + std::to_string(i) + "]");
            if (row.size() != cols)
                throw ConfigError(where + " row " + std::to_string(i) + " must have " + std::to_string(cols) +
                                  " entries");
            for (std::size_t k = 0; k < cols; ++k)
                m(i, k) = row[k];
        }
    } else {
        const Vector flat = vector_of(j, where);
        if (flat.size() != rows * cols)
            throw ConfigError(where + " must hold " + std::to_string(rows * cols) + " entries (row-major)");
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = 0; k < cols; ++k)
                m(i, k) = flat[i * cols + k];
    }
    return m;
}

std::vector<Complex> poles_of(const json& j) {
    if (!j.is_array())
        throw ConfigError("certify.poles must be an array");
    std::vector<Complex> poles;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "certify.poles[" + std::to_string(i) + "]";
        if (j[i].is_array()) {
            const Vector pair = vector_of(j[i], where);
            if (pair.size() != 2)
                throw ConfigError(where + " must be a number or a [re, im] pair");
            poles.emplace_back(pair[0], pair[1]);
        } else {
            poles.emplace_back(number(j[i], where), 0.0);
        }
    }
    return poles;
}

std::optional<double> real_or_auto(const json& section, const char* key) {
    if (!section.contains(key))
        return std::nullopt;
    const json& v = section.at(key);
    if (v.is_string()) {
        if (v.get<std::string>() == "auto")
            return std::nullopt;
        throw ConfigError(std::string("certify.") + key + " must be a number or \"auto\"");
    }
    return number(v, std::string("certify.") + key);
}

std::vector<std::string> strings_of(const json& j, const std::string& where) {
    if (!j.is_array())
        throw ConfigError(where + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& s : j) {
        if (!s.is_string())
            throw ConfigError(where + " must be an array of strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

Config parse_config_impl(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("system"))
        throw ConfigError("config must be an object with a \"system\" section");

    Config cfg;
    const json& sys = root.at("system");
    if (!sys.contains("f"))
        throw ConfigError("system.f is required");
    const auto f = strings_of(sys.at("f"), "system.f");
    const std::size_t n = f.size();
    if (sys.contains("n") && sys.at("n").get<std::size_t>() != n)
        throw ConfigError("system.n does not match the number of components in system.f");
    try {
        cfg.problem.f = VectorField::parse(f);
    } catch (const Error& e) {
        throw ConfigError(std::string("system.f: ") + e.what());
    }

    if (!sys.contains("B"))
        throw ConfigError("system.B is required");
    std::size_t m = 0;
    if (sys.contains("m")) {
        m = sys.at("m").get<std::size_t>();
    } else {
        const json& b = sys.at("B");
        m = (!b.empty() && b[0].is_array()) ? b[0].size() : (n == 0 ? 0 : b.size() / n);
    }
    if (m == 0)
        throw ConfigError("system.m must be positive");
    cfg.problem.B = matrix_of(sys.at("B"), n, m, "system.B");
    cfg.problem.T = sys.contains("T") ? number(sys.at("T"), "system.T") : 1.0;
    if (!(cfg.problem.T > 0.0))
        throw ConfigError("system.T must be positive");

    if (root.contains("disturbance")) {
        const json& d = root.at("disturbance");
        cfg.problem.bound.M_d = d.contains("M_d") ? number(d.at("M_d"), "disturbance.M_d") : 0.0;
        cfg.problem.bound.eta = d.contains("eta") ? number(d.at("eta"), "disturbance.eta") : 0.0;
        if (cfg.problem.bound.M_d < 0.0)
            throw ConfigError("disturbance.M_d must be non-negative");
        if (cfg.problem.bound.M_d > 0.0 && !(cfg.problem.bound.eta > 0.0))
            throw ConfigError("disturbance.eta must be positive when M_d > 0");
        if (d.contains("expression")) {
            const auto w = strings_of(d.at("expression"), "disturbance.expression");
            if (w.size() != n)
                throw ConfigError("disturbance.expression must have n components");
            try {
                cfg.disturbance = DisturbanceModel::parse(w);
            } catch (const Error& e) {
                throw ConfigError(std::string("disturbance.expression: ") + e.what());
            }
        }
    }

    if (root.contains("target")) {
        cfg.problem.target = vector_of(root.at("target"), "target");
        if (cfg.problem.target.size() != n)
            throw ConfigError("target must have n entries");
    }
    if (root.contains("input_bound") && !root.at("input_bound").is_null())
        cfg.problem.input_bound = number(root.at("input_bound"), "input_bound");

    if (root.contains("certify")) {
        const json& c = root.at("certify");
        cfg.options.gamma0 = real_or_auto(c, "gamma0");
        cfg.options.omega = real_or_auto(c, "omega");
        if (c.contains("rho"))
            cfg.options.rho = number(c.at("rho"), "certify.rho");
        if (c.contains("poles") && !(c.at("poles").is_string() && c.at("poles").get<std::string>() == "auto")) {
            cfg.options.poles = poles_of(c.at("poles"));
            if (cfg.options.poles->size() != n)
                throw ConfigError("certify.poles must have n entries");
        }
        if (c.contains("K"))
            cfg.problem.K = matrix_of(c.at("K"), m, n, "certify.K");
        if (c.contains("remainder_box")) {
            const json& box = c.at("remainder_box");
            if (!box.is_array() || box.size() != n)
                throw ConfigError("certify.remainder_box must hold n [lo, hi] pairs");
            for (std::size_t i = 0; i < n; ++i) {
                const Vector pair = vector_of(box[i], "certify.remainder_box[" + std::to_string(i) + "]");
                if (pair.size() != 2 || !(pair[0] <= pair[1]))
                    throw ConfigError("certify.remainder_box entries must be [lo, hi] with lo <= hi");
                cfg.problem.remainder_box.bounds.emplace_back(pair[0], pair[1]);
            }
        }
        if (c.contains("c_R_override"))
            cfg.problem.c_R_override = number(c.at("c_R_override"), "certify.c_R_override");
    }

    if (root.contains("simulate")) {
        const json& s = root.at("simulate");
        if (s.contains("x0")) {
            cfg.simulate.x0 = vector_of(s.at("x0"), "simulate.x0");
            if (cfg.simulate.x0->size() != n)
                throw ConfigError("simulate.x0 must have n entries");
        }
        if (s.contains("seeds")) {
            if (!s.at("seeds").is_array())
                throw ConfigError("simulate.seeds must be an array of integers");
            for (const auto& v : s.at("seeds")) {
                if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
                    throw ConfigError("simulate.seeds must be non-negative integers");
                cfg.simulate.seeds.push_back(v.get<std::uint64_t>());
            }
        }
        if (s.contains("theta_res"))
            cfg.simulate.theta_res = number(s.at("theta_res"), "simulate.theta_res");
        if (s.contains("threshold"))
            cfg.simulate.threshold = number(s.at("threshold"), "simulate.threshold");
    }

    if (cfg.simulate.x0) {
        const Vector target = target_or_origin(cfg.problem);
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            r += ((*cfg.simulate.x0)[i] - target[i]) * ((*cfg.simulate.x0)[i] - target[i]);
        cfg.problem.x0_radius = std::sqrt(r);
    }
    return cfg;
}

} // namespace

Config parse_config(const std::string& json_text) {
    try {
        return parse_config_impl(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Config load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

} // namespace nullctl::cli
