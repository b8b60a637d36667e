// runner.hpp — Command implementations behind the CLI: single runs, sweeps, verify

#pragma once

#include <string>
#include <vector>

#include "spintrans/config.hpp"
#include "spintrans/verify.hpp"

namespace spintrans {

// Exit-code contract shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

// One sweep axis: a config path plus the values it takes. Up to three axes are
// crossed; values keep their command-line order.
struct SweepAxis {
    std::string path;
    std::vector<std::string> values;
};

// Loads the scenario, integrates, writes <out>/timeseries.csv and <out>/report.csv,
// and prints the final sink population to stdout. Returns an exit code.
int cli_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<Override>& overrides);

// Cross-product sweep: one subdirectory per grid point (named path=value_...), each
// holding the single-run outputs, plus a merged <out>/comparison.csv. Grid points run
// concurrently on `jobs` threads; the merge is sequential and deterministic.
int cli_sweep(const std::string& config_path, const std::string& out_dir,
              const std::vector<Override>& overrides, const std::vector<SweepAxis>& axes,
              int jobs);

// Runs the validation suite; exit 0 iff all checks pass.
int cli_verify(const VerifyOptions& opt);

}  // namespace spintrans
