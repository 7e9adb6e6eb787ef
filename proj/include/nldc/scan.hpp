#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nldc/rates.hpp"

namespace nldc::scan {

inline constexpr const char* version = "0.1.0";

struct ConfigError {
    int line = 0; ///< 1-based, 0 when not tied to a line
    int column = 0;
    std::string path;
    std::string message;
    std::string str() const;
};

class ConfigErrors : public std::runtime_error {
public:
    explicit ConfigErrors(std::vector<ConfigError> errors);
    std::vector<ConfigError> errors;
};

enum class Observable { rate_map, theta_c_curve, concurrence_map, total_rate };

struct Axis {
    std::string name; ///< omega_b, theta_b, psi_b, theta_c or psi_c
    double lo = 0, hi = 0;
    int points = 1;
    double value(int i) const { return points == 1 ? lo : lo + (hi - lo) * double(i) / double(points - 1); }
};

struct Physics {
    double electron_energy = 1000;   ///< units of m
    double laser_photon_eV = 2.5;
    double xi = 1;
    int n_min = 1;
    int n_max = 30;
    double resonance_threshold = 1e-3;
    double width = 0;                ///< m^2
    double bunch_electrons = 1e9;
    double pulse_duration_s = 100e-15;
};

struct ScanBlock {
    Observable observable = Observable::rate_map;
    std::vector<Axis> axes;
    PhaseSpacePoint point{1e6 / 510998.95, 1e-3, 0, 1e-3, 0};
    std::vector<PolarizationSelect> polarizations{PolarizationSelect::sum()};
    std::vector<RateMode> modes{RateMode::nonperturbative, RateMode::perturbative};
    bool single_compton = false;
};

struct ExecutionBlock {
    int workers = 0;
    std::uint64_t seed = 1;
    int mc_divisions = 3;
    int mc_samples = 4;
    int mc_rounds = 1;
    double tolerance = 0;
    std::string checkpoint;       ///< empty: no checkpointing
    int checkpoint_every = 16;
};

struct OutputBlock {
    std::string path = "scan.csv";
    int precision = 10;
};

struct ScanConfig {
    Physics physics;
    PhaseSpaceCuts cuts;
    bool cuts_defaulted = true;
    ScanBlock scan;
    ExecutionBlock execution;
    OutputBlock output;

    int cell_count() const;
};

/// Parses and validates a YAML config; throws ConfigErrors with every problem found.
ScanConfig parse_config(const std::string& text);
/// Canonical YAML form. parse_config(to_yaml(c)) reproduces c.
std::string to_yaml(const ScanConfig& config);
/// FNV-1a of the canonical form without the execution-only settings
/// (workers, checkpoint path, output path).
std::uint64_t config_hash(const ScanConfig& config);
std::string hash_hex(std::uint64_t h);

/// Checks the semantic constraints of an assembled config.
std::vector<ConfigError> validate(const ScanConfig& config);

std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);
/// Throws std::out_of_range for unknown names.
std::string preset_yaml(const std::string& name);
ScanConfig preset(const std::string& name);

struct Series {
    std::string name;
    std::string unit;
    bool has_error = false;
};

struct Cell {
    std::vector<double> values; ///< one per series, NaN when failed
    std::vector<double> errors;
    bool masked = false;
    std::string reason;         ///< reason code: resonance, closed, limit, nonconvergent, error
};

struct ScanResult {
    ScanConfig config;
    std::uint64_t hash = 0;
    std::vector<Series> series;
    std::vector<Cell> cells;
    std::map<std::string, double> summary;
    double runtime_seconds = 0;
    int resumed_cells = 0;
};

/// Thrown when run_scan stops early on request; the checkpoint is up to date.
class Interrupted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunHooks {
    /// Stop with Interrupted once this many cells are done (0: never).
    int stop_after_cells = 0;
    std::function<void(int done, int total)> progress;
};

std::vector<Series> series_for(const ScanConfig& config);

/// Coordinates of cell `index` (first axis varies slowest).
std::vector<double> cell_coordinates(const ScanConfig& config, int index);

ScanResult run_scan(const ScanConfig& config, const RunHooks& hooks = {});

/// CSV plus `<path>.json` sidecar, both written through temp files and renames.
void write_outputs(const ScanResult& result);
std::string csv_text(const ScanResult& result);
std::string sidecar_text(const ScanResult& result);

/// Human-readable summary of a sidecar file's contents.
std::string report(const std::string& sidecar_json);

/// Writes `text` to `path` via a temporary file and rename.
void atomic_write(const std::string& path, const std::string& text);

} // namespace nldc::scan
