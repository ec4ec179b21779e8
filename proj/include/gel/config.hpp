#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gel/homogenizer.hpp"
#include "gel/solver.hpp"

namespace gel {

/// All problems found in a config file, each prefixed with its key path.
class ConfigError : public InputError {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

/// A scalar input given either as a number or as an expression of (x, y[, t]).
struct ScalarInput {
    double value = 0.0;
    std::string expr;  ///< non-empty wins over value
    bool is_expr() const { return !expr.empty(); }
};

struct MaterialConfig {
    std::string file;  ///< field CSV with C_ijkl then rho_ij columns; overrides the scalars
    ScalarInput C{1.0, {}};       ///< 1D stiffness
    ScalarInput lambda{1.0, {}};  ///< 2D
    ScalarInput mu{1.0, {}};      ///< 2D
    ScalarInput rho{1.0, {}};
};

struct PrestateConfig {
    /// u0 components as expressions of (x, y, t); v0 defaults to du0/dt at t = 0.
    std::vector<std::string> u0;
    std::vector<std::string> v0;
    /// direct pre-stress sigma0_ij (d*d expressions, row-major); excludes u0.
    std::vector<std::string> sigma0;
    std::string u0_file;      ///< field CSV of u0 (v0 from `v0` or zero)
    std::string sigma0_file;  ///< field CSV of sigma0
};

struct InitialConfig {
    std::vector<std::string> u;     ///< expressions of (x, y), per component
    std::vector<std::string> udot;
    bool random = false;            ///< smooth random data from `seed`
    unsigned seed = 1;
    double amplitude = 1.0;
};

struct SimulateConfig {
    GridSpec grid;
    MaterialConfig material;
    PrestateConfig prestate;
    ModelVariant variant = ModelVariant::classical;
    double cfl = 0.5;
    int record_every = 1;
    double growth_limit = 1e6;
    std::vector<std::string> monitors{"energy"};  ///< energy, conservation_temporal, conservation_spatial
    std::optional<PointSource> source;
    InitialConfig initial;
};

struct HomogenizeConfig {
    LaminateSpec laminate;
    std::vector<double> omegas;  ///< explicit list, or filled from a range
    double q = 0.0;
    int n_harmonics = 32;
    bool dispersion = true;
};

struct VerifyConfig {
    std::vector<std::string> suites;          ///< empty: all
    std::map<std::string, double> tolerances; ///< overrides by check name
    unsigned seed = 1;
};

struct OutputConfig {
    std::string dir = "out";
    bool snapshots = true;
};

enum class RunMode { simulate, homogenize, verify };
std::string_view to_string(RunMode m);

struct RunConfig {
    RunMode mode = RunMode::verify;
    SimulateConfig simulate;
    HomogenizeConfig homogenize;
    VerifyConfig verify;
    OutputConfig output;
    std::filesystem::path base_dir;  ///< relative file paths resolve against this
};

extern const std::vector<std::string> kVerifySuites;

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig parse_config(const std::filesystem::path& path);

/// Canonical JSON with every default filled in; parsing it gives the same config.
std::string canonical_config(const RunConfig& c);

std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace gel
