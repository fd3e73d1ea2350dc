#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace ptdimer {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Command { matrix, spectrum, sweep, find_ep, boundary };

/// One resolved invocation. Unset range/steps pick per-command defaults:
/// sweep range 0:2 with 400 points, find-ep range 0:2 with 2000 coarse
/// cells, boundary U range -4:4 with 81 points. axis selects the swept
/// parameter (sweep: lambda|gamma|u; find-ep and boundary: lambda|gamma).
struct RunConfig {
    Command command = Command::spectrum;
    double eps = 0.0;
    double t = 1.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double u = 0.0;
    std::string axis = "lambda";
    std::optional<std::pair<double, double>> range;
    std::optional<int> steps;
    double tol = 1e-9;
    std::string out = "-";
    int jobs = 0; // 0 = machine parallelism
    std::pair<double, double> axis_range{0.0, 3.0}; // boundary swept-axis scan window
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

std::pair<double, double> parse_range(const std::string& text);

/// Flat key=value file mirroring the flag names (t, eps, lambda, gamma, U,
/// axis, range, steps, tol, out, jobs, axis-range). Blank lines and
/// '#'-comments are ignored; unknown keys are rejected.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Folds file values into config, skipping keys named in `overridden`
/// (command-line flags win). Throws ConfigError on malformed values.
void apply_config_values(RunConfig& config, const std::map<std::string, std::string>& values,
                         const std::set<std::string>& overridden = {});

/// Executes one command and writes CSV ('#' metadata lines, then a column
/// header, LF endings, shortest round-trip decimals). out == "-" streams to
/// stdout; boundary with a file path writes one file per branch with a
/// "_b<k>" suffix. Returns kExitOk, kExitConfig on bad configuration, or
/// kExitNumerical on numerical failure; no partial files are left behind.
int run(const RunConfig& config);

} // namespace ptdimer
