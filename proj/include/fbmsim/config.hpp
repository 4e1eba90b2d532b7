#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fbmsim {

// Flat key=value configuration with optional [section] headers; a section
// applies only when it matches the active command. Unknown keys fail closed.
struct ExperimentConfig {
    std::string command = "simulate";
    double hurst = 0.4;
    double horizon = 1.0;
    std::vector<int> ns = {64, 128, 256, 512, 1024, 2048, 4096};
    int n = 512;
    int refinement = 32;
    int reps = 1000;
    std::uint64_t seed = 1;
    std::string field = "geometric1d";
    std::string scheme = "modified";
    int components = 1;
    int k_max = 64;
    int quad_n = 128;
    int threads = 1;
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;
};

// Defaults per command (e.g. rate: H=0.4, n in 2^6..2^12, 10^3 reps;
// clt: H=0.45, n=2^10, 2000 reps).
ExperimentConfig default_config(const std::string& command);

// Parses `text` on top of the command defaults and validates. Throws
// std::invalid_argument on unknown keys or regime violations.
ExperimentConfig parse_config(const std::string& text, const std::string& command);

std::string serialize_config(const ExperimentConfig& config);

// Hurst-regime and range checks; scheme-driven commands need H in (1/3,1/2),
// `fbm` and `constants` accept (1/4,1/2).
void validate_config(const ExperimentConfig& config);

// FNV-1a 64-bit over the file bytes, rendered as 16 hex digits.
std::string file_checksum(const std::string& path);

// Executes the configured pipeline, writes outputs plus manifest.json
// (written last; every other file listed with its checksum). Returns the
// process exit code: 0 success, 2 scientific-threshold failure in `check`.
int run_experiment(const ExperimentConfig& config);

}  // namespace fbmsim
