#ifndef QJUMP_RUN_HPP
#define QJUMP_RUN_HPP

#include <string>
#include <vector>

#include "qjump/config.hpp"
#include "qjump/output.hpp"

namespace qjump {

// A result table plus the suffix its file gets ("" = the main output
// path, "pn"/"hist" = companion files named <stem>_<tag>.<ext>).
struct NamedTable {
    std::string tag;
    Table table;
};

// Runs one scenario and writes its result file(s); returns the paths
// written. Deterministic given (config, master_seed). Throws the error
// taxonomy mapped onto CLI exit codes.
std::vector<std::string> run_scenario(const ScenarioConfig& config);

// The same computation without touching the filesystem (used by the
// determinism checks and tests).
std::vector<NamedTable> build_tables(const ScenarioConfig& config);

} // namespace qjump

#endif
