#pragma once

#include <cstdint>
#include <string>

namespace fbcsf {

/// SplitMix64. Seeded perturbations draw from this generator so initial
/// data can be reproduced exactly from the seed in any implementation;
/// the stream layout is documented in the README.
struct SplitMix64 {
    std::uint64_t state = 0;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    /// uniform in [-1, 1), 53-bit resolution
    double uniform_pm1() {
        return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
    }
};

/// Runs a scenario config: flow, configured analyses, optional entropy
/// scan; writes timeseries.csv, states/NNNN.json and report.json under the
/// scenario's output directory. Returns 0 on success, 1 on tolerance
/// failure, 2 on a config/schema violation, 3 on numerical blowup.
int run_scenario(const std::string& config_path, const std::string& out_override = "");
int run_scenario_text(const std::string& json_text, const std::string& out_override = "");

/// Runs the scenario flow and its entropy scan only; writes entropy.json.
int entropy_command(const std::string& config_path, const std::string& out_override = "");

/// Human-readable list of the built-in model kinds and their parameters.
std::string models_list();

/// Built-in acceptance matrix; prints one pass/fail line per criterion.
/// `filter` restricts to criteria whose name contains the substring.
/// Returns 0 iff every executed criterion passes.
int verify_suite(const std::string& filter = "");

}  // namespace fbcsf
