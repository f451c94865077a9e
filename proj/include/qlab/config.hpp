#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlab/entanglement.hpp"
#include "qlab/errors.hpp"

namespace qlab {

inline constexpr const char* kVersion = "0.1.0";

enum class TimeUnit { dimensionless, milliseconds };

/// tJ = 2 pi J_hz t_ms / 1000.
double convert_time(double t_ms, double j_hz);

struct TimeGrid {
    TimeUnit unit = TimeUnit::dimensionless;
    std::vector<double> values;  // in the declared unit
};

struct InterferenceConfig {
    int shots = 10000;
    double parity_flip_probability = 0.0;
    int bootstrap_resamples = 1000;
    double purity_floor = 1e-6;
    std::vector<std::vector<int>> subsystems;  // defaults to {0..L-1}
    std::vector<double> times;                 // dimensionless; defaults to window end
};

struct EnsembleConfig {
    double microcanonical_window = 1.0;  // units of J
    double gc_number_target_delta = 0.1; // <N> target = N - delta
};

struct ExperimentConfig {
    int sites = 6;
    int particles = 6;
    double j_over_u = 0.64;
    std::optional<double> j_hz = 66.0;

    TimeGrid times;
    std::vector<int> volumes = {1, 2, 3};
    std::vector<std::vector<int>> subsystems;  // defaults to all single sites
    PartitionMode partition_mode = PartitionMode::contiguous;
    double entropy_offset_per_site = 0.0;

    EnsembleConfig ensembles;
    InterferenceConfig interference;

    std::optional<std::uint64_t> seed;
    std::string output_dir = "out";
    int threads = 1;

    // resolved helpers
    double interaction() const { return 1.0 / j_over_u; }
    std::vector<double> dimensionless_times() const;

    /// Full structural validation; error messages carry the config path.
    void validate() const;
};

/// Parse + validate a JSON config document (text). Precise error locations
/// are reported as JSON pointer paths.
ExperimentConfig parse_config(const std::string& json_text);

/// Load from file; IoError when unreadable.
ExperimentConfig load_config(const std::string& path);

/// Resolved config (every default materialized) as a JSON document.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace qlab
