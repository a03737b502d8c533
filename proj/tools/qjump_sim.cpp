#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qjump/acceptance.hpp"
#include "qjump/config.hpp"
#include "qjump/errors.hpp"
#include "qjump/run.hpp"
#include "qjump/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitTruncation = 4;

int run_command(const std::string& config_path, const qjump::KeyValues& overrides) {
    const auto file_values = qjump::parse_config_file(config_path);
    const auto config = qjump::make_config(file_values, overrides);
    const auto paths = qjump::run_scenario(config);
    for (const auto& p : paths) std::printf("wrote %s\n", p.c_str());
    return kExitOk;
}

int verify_command(std::uint64_t seed, unsigned threads) {
    qjump::AcceptanceOptions opt;
    if (seed != 0) opt.master_seed = seed;
    opt.threads = threads;
    const auto results = qjump::run_acceptance(opt);
    std::fputs(qjump::format_results(results).c_str(), stdout);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    std::printf("%zu/%zu criteria passed\n",
                static_cast<std::size_t>(
                    std::count_if(results.begin(), results.end(),
                                  [](const auto& r) { return r.pass; })),
                results.size());
    return all ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"double-dot point-contact measurement simulator"};
    app.set_version_flag("--version", std::string("qjump-sim ") + qjump::kVersion);
    app.require_subcommand(1);

    // run <config> [--key value ...]: flags mirror config keys one-to-one
    auto* run = app.add_subcommand("run", "run a scenario from a config file");
    std::string config_path;
    run->add_option("config", config_path, "key = value config file")->required();
    static const char* keys[] = {
        "scenario",   "omega0",     "epsilon",    "d1",
        "transmission_open", "transmission_blocked", "bias",
        "ic",         "n0",         "t_end",      "dt",
        "window",     "n_traj",     "master_seed", "output_path",
        "format",     "n_samples",  "threshold",  "probe_time",
        "leak_budget", "n_max_cap", "sweep",      "threads"};
    std::map<std::string, std::string> overrides;
    for (const char* key : keys)
        run->add_option("--" + std::string(key), overrides[key],
                        "override config key '" + std::string(key) + "'");

    auto* verify = app.add_subcommand("verify", "run the built-in acceptance suite");
    std::uint64_t verify_seed = 0;
    unsigned verify_threads = 0;
    verify->add_option("--master-seed", verify_seed,
                       "override the suite's master seed (0 = default)");
    verify->add_option("--threads", verify_threads, "worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            qjump::KeyValues kv;
            for (const char* key : keys) {
                const auto it = overrides.find(key);
                if (it != overrides.end() && run->count("--" + std::string(key)) > 0)
                    kv.emplace_back(key, it->second);
            }
            return run_command(config_path, kv);
        }
        return verify_command(verify_seed, verify_threads);
    } catch (const qjump::TruncationOverflowError& e) {
        std::fprintf(stderr, "truncation overflow: %s\n", e.what());
        return kExitTruncation;
    } catch (const qjump::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const qjump::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
}
