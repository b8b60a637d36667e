// verify.hpp — Built-in validation suite: analytic limits, cross-solver equivalence,
// and the discretized-bath ground-truth comparison, at fixed seeds

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spintrans {

struct CheckResult {
    std::string name;
    bool passed{false};
    double measured{0.0};   // worst deviation observed
    double threshold{0.0};
    std::string detail;     // parameters, counts, anything worth echoing
};

struct VerifyOptions {
    int bath_modes{2000};    // grid size for the discretized-bath comparison
    int draws{10};           // random parameter draws for the cross-solver check
    std::uint64_t seed{12345};
};

// Runs every check, printing one "[pass]/[FAIL] name  deviation tol" line per check
// to `log`. Returns the full result list; overall success = every `passed` flag.
std::vector<CheckResult> run_verification(const VerifyOptions& opt, std::ostream& log);

}  // namespace spintrans
