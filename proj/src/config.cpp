#include "qjump/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qjump/engine.hpp"
#include "qjump/errors.hpp"

namespace qjump {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + key + "': " + value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError("invalid integer for '" + key + "': " + value);
    return v;
}

Scenario parse_scenario(const std::string& value) {
    if (value == "reduced") return Scenario::Reduced;
    if (value == "n_resolved") return Scenario::NResolved;
    if (value == "trajectory") return Scenario::Trajectory;
    if (value == "ensemble") return Scenario::Ensemble;
    if (value == "zeno_sweep") return Scenario::ZenoSweep;
    if (value == "gaussian_check") return Scenario::GaussianCheck;
    if (value == "steady_check") return Scenario::SteadyCheck;
    throw ConfigError("unknown scenario: " + value);
}

InitialKind parse_ic(const std::string& value) {
    if (value == "left") return InitialKind::LeftLocalized;
    if (value == "right") return InitialKind::RightLocalized;
    if (value == "mixture") return InitialKind::EqualMixture;
    if (value == "superposition") return InitialKind::EqualSuperposition;
    throw ConfigError("unknown initial condition: " + value);
}

OutputFormat parse_format(const std::string& value) {
    if (value == "csv") return OutputFormat::Csv;
    if (value == "json") return OutputFormat::Json;
    throw ConfigError("unknown output format: " + value);
}

std::vector<double> parse_sweep(const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double("sweep", item));
    }
    if (out.empty()) throw ConfigError("sweep list is empty");
    return out;
}

} // namespace

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::Reduced: return "reduced";
        case Scenario::NResolved: return "n_resolved";
        case Scenario::Trajectory: return "trajectory";
        case Scenario::Ensemble: return "ensemble";
        case Scenario::ZenoSweep: return "zeno_sweep";
        case Scenario::GaussianCheck: return "gaussian_check";
        case Scenario::SteadyCheck: return "steady_check";
    }
    return "?";
}

const char* to_string(OutputFormat f) {
    return f == OutputFormat::Csv ? "csv" : "json";
}

double ScenarioConfig::effective_dt() const {
    return dt > 0.0 ? dt : stability_dt(params);
}

double ScenarioConfig::effective_window() const {
    if (window > 0.0) return window;
    return params.d1 > 0.0 ? 20.0 / params.d1 : t_end;
}

double ScenarioConfig::effective_threshold() const {
    return threshold > 0.0 ? threshold : 0.5 * params.d1;
}

double ScenarioConfig::effective_probe_time() const {
    if (probe_time > 0.0) return probe_time;
    if (params.omega0 > 0.0) return params.zeno_time() / 4.0;
    return 0.5 * t_end;
}

void ScenarioConfig::validate() const {
    params.validate();
    const bool needs_t_end = scenario == Scenario::Reduced ||
                             scenario == Scenario::NResolved ||
                             scenario == Scenario::Trajectory ||
                             scenario == Scenario::Ensemble ||
                             scenario == Scenario::GaussianCheck;
    if (needs_t_end && !(t_end > 0.0))
        throw ConfigError("t_end must be positive for this scenario");
    if (dt < 0.0 || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (dt > 0.0 && dt > stability_dt(params) * (1.0 + 1e-12))
        throw ConfigError("dt exceeds the stability bound for these parameters");
    const bool stochastic =
        scenario == Scenario::Trajectory || scenario == Scenario::Ensemble;
    if (scenario == Scenario::Ensemble && n_traj < 1)
        throw ConfigError("ensemble needs n_traj >= 1");
    if (stochastic && params.d1 > 0.0 &&
        effective_window() < 10.0 / params.d1 * (1.0 - 1e-12))
        throw ConfigError("window too small: need at least 10/D1");
    if (output_path.empty()) throw ConfigError("output_path is required");
    if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
    if (scenario == Scenario::ZenoSweep) {
        if (!(params.omega0 > 0.0))
            throw ConfigError("zeno_sweep requires omega0 > 0");
        if (params.epsilon != 0.0)
            throw ConfigError("zeno_sweep requires epsilon = 0");
        for (double r : sweep)
            if (!(r >= 8.0))
                throw ConfigError("zeno_sweep ratios must be >= 8 (overdamped regime)");
    }
    if (scenario == Scenario::GaussianCheck) {
        if (params.omega0 != 0.0)
            throw ConfigError("gaussian_check requires omega0 = 0");
        if (ic.kind != InitialKind::LeftLocalized)
            throw ConfigError("gaussian_check requires ic = left");
        if (!(params.d1 > 0.0)) throw ConfigError("gaussian_check requires d1 > 0");
    }
    if (scenario == Scenario::SteadyCheck &&
        !(params.omega0 > 0.0 && params.d1 > 0.0))
        throw ConfigError("steady_check requires omega0 > 0 and d1 > 0");
    if (!(leak_budget > 0.0)) throw ConfigError("leak_budget must be positive");
}

KeyValues parse_config_text(const std::string& text, const std::string& origin) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        out.emplace_back(key, value);
    }
    return out;
}

KeyValues parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

ScenarioConfig make_config(const KeyValues& file_values, const KeyValues& overrides) {
    ScenarioConfig c;
    bool have_scenario = false;
    bool have_d1 = false;
    DetectorParams det;
    bool have_detector = false;

    auto apply = [&](const std::string& key, const std::string& value) {
        if (key == "scenario") {
            c.scenario = parse_scenario(value);
            have_scenario = true;
        } else if (key == "omega0") {
            c.params.omega0 = parse_double(key, value);
        } else if (key == "epsilon") {
            c.params.epsilon = parse_double(key, value);
        } else if (key == "d1") {
            c.params.d1 = parse_double(key, value);
            have_d1 = true;
        } else if (key == "transmission_open") {
            det.transmission_open = parse_double(key, value);
            have_detector = true;
        } else if (key == "transmission_blocked") {
            det.transmission_blocked = parse_double(key, value);
            have_detector = true;
        } else if (key == "bias") {
            det.bias = parse_double(key, value);
            have_detector = true;
        } else if (key == "ic") {
            c.ic.kind = parse_ic(value);
        } else if (key == "n0") {
            c.ic.n0 = static_cast<std::size_t>(parse_u64(key, value));
        } else if (key == "t_end") {
            c.t_end = parse_double(key, value);
        } else if (key == "dt") {
            c.dt = parse_double(key, value);
        } else if (key == "window") {
            c.window = parse_double(key, value);
        } else if (key == "n_traj") {
            c.n_traj = static_cast<std::size_t>(parse_u64(key, value));
        } else if (key == "master_seed") {
            c.master_seed = parse_u64(key, value);
        } else if (key == "output_path") {
            c.output_path = value;
        } else if (key == "format") {
            c.format = parse_format(value);
        } else if (key == "n_samples") {
            c.n_samples = static_cast<std::size_t>(parse_u64(key, value));
        } else if (key == "threshold") {
            c.threshold = parse_double(key, value);
        } else if (key == "probe_time") {
            c.probe_time = parse_double(key, value);
        } else if (key == "leak_budget") {
            c.leak_budget = parse_double(key, value);
        } else if (key == "n_max_cap") {
            c.n_max_cap = static_cast<std::size_t>(parse_u64(key, value));
        } else if (key == "sweep") {
            c.sweep = parse_sweep(value);
        } else if (key == "threads") {
            c.threads = static_cast<unsigned>(parse_u64(key, value));
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    };

    for (const auto& [k, v] : file_values) apply(k, v);
    for (const auto& [k, v] : overrides) apply(k, v);

    if (!have_scenario) throw ConfigError("config must set 'scenario'");
    if (have_detector) {
        if (have_d1)
            throw ConfigError("give either d1 or detector transmissions, not both");
        c.params =
            ModelParams::from_detector(c.params.omega0, c.params.epsilon, det);
    }
    c.validate();
    return c;
}

KeyValues config_metadata(const ScenarioConfig& c) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    KeyValues meta;
    meta.emplace_back("scenario", to_string(c.scenario));
    meta.emplace_back("omega0", num(c.params.omega0));
    meta.emplace_back("epsilon", num(c.params.epsilon));
    meta.emplace_back("d1", num(c.params.d1));
    meta.emplace_back("ic", to_string(c.ic.kind));
    meta.emplace_back("n0", std::to_string(c.ic.n0));
    meta.emplace_back("t_end", num(c.t_end));
    meta.emplace_back("dt", num(c.effective_dt()));
    meta.emplace_back("window", num(c.effective_window()));
    meta.emplace_back("n_traj", std::to_string(c.n_traj));
    meta.emplace_back("master_seed", std::to_string(c.master_seed));
    meta.emplace_back("format", to_string(c.format));
    meta.emplace_back("n_samples", std::to_string(c.n_samples));
    meta.emplace_back("threshold", num(c.effective_threshold()));
    meta.emplace_back("probe_time",
                      num(c.scenario == Scenario::Ensemble ? c.effective_probe_time()
                                                           : c.probe_time));
    meta.emplace_back("leak_budget", num(c.leak_budget));
    meta.emplace_back("n_max_cap", std::to_string(c.n_max_cap));
    meta.emplace_back("threads", std::to_string(c.threads));
    std::string sweep_str;
    for (std::size_t i = 0; i < c.sweep.size(); ++i) {
        if (i) sweep_str += ",";
        sweep_str += num(c.sweep[i]);
    }
    meta.emplace_back("sweep", sweep_str);
    return meta;
}

} // namespace qjump
