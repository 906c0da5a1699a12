#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nullctl/certify.hpp"
#include "nullctl/simulate.hpp"

namespace nullctl::cli {

class ConfigError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

struct SimulateSettings {
    std::optional<Vector> x0;
    std::vector<std::uint64_t> seeds;
    double theta_res = 1e-8;
    double threshold = 1e-3;
};

struct Config {
    CertificationProblem problem;
    CertifyOptions options;
    DisturbanceModel disturbance;
    SimulateSettings simulate;
};

[[nodiscard]] Config parse_config(const std::string& json_text);
[[nodiscard]] Config load_config(const std::filesystem::path& path);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

} // namespace nullctl::cli
