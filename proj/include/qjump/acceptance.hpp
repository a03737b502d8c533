#ifndef QJUMP_ACCEPTANCE_HPP
#define QJUMP_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qjump {

// Built-in verification suite behind `qjump-sim verify` and the
// acceptance test binary: one entry per check, every tolerance fixed
// here in code.
struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t master_seed = 0xC0FFEE0Dull;
    unsigned threads = 0;  // 0 = auto
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

// Formats "[PASS] name: detail (1.23 s)" lines.
std::string format_results(const std::vector<CriterionResult>& results);

} // namespace qjump

#endif
