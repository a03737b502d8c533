#ifndef QJUMP_CONFIG_HPP
#define QJUMP_CONFIG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qjump/model.hpp"

namespace qjump {

enum class Scenario {
    Reduced,        // reduced 2x2 evolution time series
    NResolved,      // full ladder time series + final P(n)
    Trajectory,     // single stochastic record
    Ensemble,       // many records, averaged statistics
    ZenoSweep,      // relaxation-time fits over D1/omega0 ratios
    GaussianCheck,  // counting law vs Gaussian/Poisson at one time
    SteadyCheck,    // long-time reduced state deviation
};

enum class OutputFormat { Csv, Json };

const char* to_string(Scenario s);
const char* to_string(OutputFormat f);

struct ScenarioConfig {
    Scenario scenario = Scenario::Reduced;
    ModelParams params;
    InitialCondition ic;
    double t_end = 0.0;
    double dt = 0.0;        // <= 0: stability bound
    double window = 0.0;    // <= 0: 20 / d1
    std::size_t n_traj = 1000;
    std::uint64_t master_seed = 12345;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
    std::size_t n_samples = 400;
    double threshold = 0.0;    // <= 0: d1 / 2
    double probe_time = 0.0;   // <= 0: zeno_time / 4
    double leak_budget = 1e-9;
    std::size_t n_max_cap = 200000;
    std::vector<double> sweep = {8.0, 16.0, 32.0};  // D1/omega0 ratios
    unsigned threads = 0;  // 0 = auto

    double effective_dt() const;
    double effective_window() const;
    double effective_threshold() const;
    double effective_probe_time() const;

    void validate() const;
};

// Ordered key/value pairs; later entries win.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Flat `key = value` lines, `#` comments, blank lines ignored.
KeyValues parse_config_file(const std::string& path);
KeyValues parse_config_text(const std::string& text, const std::string& origin);

// Applies file values then overrides, validating every key.
ScenarioConfig make_config(const KeyValues& file_values, const KeyValues& overrides);

// The full parameter set as emitted into output metadata.
KeyValues config_metadata(const ScenarioConfig& c);

} // namespace qjump

#endif
