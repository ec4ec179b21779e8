#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "gel/config.hpp"

namespace gel {

/// Exit codes of the command-line entry points.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kRuntimeError = 3 };

/// u0 (and v0 = du0/dt at t unless given) from expressions; G0, Gamma, sigma0
/// and fbar0 are derived on the grid. v0 is exact (symbolic derivative).
PreState prestate_from_expressions(const GridSpec& g, const MaterialModel& m, const std::vector<std::string>& u0,
                                   const std::vector<std::string>& v0 = {}, double t = 0.0);

MaterialModel build_material(const GridSpec& g, const MaterialConfig& mc, const std::filesystem::path& base);
Model build_model(const SimulateConfig& s, const std::filesystem::path& base);
WaveState build_initial(const SimulateConfig& s, const GridSpec& g);

struct RunOptions {
    std::filesystem::path out_dir;     ///< overrides config output.dir when non-empty
    std::vector<std::string> suites;   ///< overrides verify.suites when non-empty
    std::ostream* log = nullptr;       ///< human-readable progress and report
};

/// Each writes its artifacts under the output directory and returns an ExitCode.
/// Failures write `failure.json` (kind, message) next to the other outputs.
int run_simulate(const RunConfig& c, const RunOptions& o = {});
int run_homogenize(const RunConfig& c, const RunOptions& o = {});
int run_verify(const RunConfig& c, const RunOptions& o = {});
int run(const RunConfig& c, const RunOptions& o = {});

}  // namespace gel
