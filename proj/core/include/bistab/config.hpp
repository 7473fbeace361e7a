#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bistab/splitting.hpp"

namespace bistab {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Experiment description loaded from a TOML-style key = value file with
// optional [section] headers (folded into dotted keys) plus command-line
// "key=value" overrides, which win over the file.
struct ExperimentConfig {
    std::string config_dir;  // directory of the config file, for relative paths
    std::string network_path;
    std::string network_text;  // loaded lazily by the runner when path is set

    KernelKind kernel = KernelKind::BernoulliStep;
    bool has_splitting = false;
    std::string gamma_text = "1";
    std::optional<double> epsilon_sq;

    std::int64_t N = 0;
    std::vector<std::int64_t> N_ladder;
    std::optional<std::int64_t> x0;
    double t_max = 0.0;
    std::uint64_t seed = 1;
    std::int64_t replicates = 1;
    std::string out_dir = "out";

    std::int64_t bins = 100;
    std::string switch_mode = "none";  // none | wells | boundary
    double switch_c = 0.1;
    double switch_x1 = 0.25;
    double switch_x3 = 0.75;
    std::int64_t snapshots = 10000;
    bool store_events = false;
    double dt = 1e-4;
    bool diffusion = false;  // simulate: integrate the limiting SDE instead

    // canonical "key = value" lines of every semantic field (out_dir omitted)
    std::string canonical() const;
    std::string hash() const;  // FNV-1a over canonical(), 16 hex digits
};

// Parse config text; `dir` is recorded for resolving relative paths.
ExperimentConfig parse_config(const std::string& text, const std::string& dir);

// Load from a file, then apply "dotted.key=value" overrides.
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides);

}  // namespace bistab
