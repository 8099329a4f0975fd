#pragma once

// Run configuration shared by the command-line front end and the figure
// presets. Settings are flat key=value pairs; a config file and command-line
// flags use the same keys.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kerrchaos/classical.hpp"
#include "kerrchaos/qmap.hpp"
#include "kerrchaos/spectra.hpp"

namespace kerrchaos {

enum class Command { series, spectrum, bifurcation, lyapunov, selftest };

std::string to_string(Command command);

struct RunConfig {
    ModelParams model;
    Indicator indicator;
    bool dense = false;

    std::int64_t window_start = 0;
    std::int64_t window_end = -1;  // -1: last pulse
    bool remove_mean = true;
    Normalization normalization = Normalization::max_one;
    Taper taper = Taper::none;

    double eps_min = 0.25;
    double eps_max = 0.75;
    std::size_t n_eps = 800;
    std::size_t transient = 500;
    std::size_t samples = 300;
    std::size_t iterations = 20000;
    cplx alpha0{0.0, 0.0};

    std::string output;
    bool json = false;

    /// window_end with the -1 default resolved.
    std::int64_t resolved_window_end() const;

    /// Throws ContractViolationError naming the first invalid field. Returns
    /// warnings that do not stop the run.
    std::vector<std::string> validate(Command command) const;

    ScanSettings scan_settings() const;
};

/// Every recognised key, in the order headers list them.
const std::vector<std::string>& config_keys();

/// Sets one field from its textual value. Throws ContractViolationError with
/// the key name on unknown keys or unparsable values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses "key = value" lines; '#' starts a comment. Throws on malformed lines.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Resolved value of every key, formatted as apply_setting accepts it.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

std::string format_initial(const InitialState& initial);

}  // namespace kerrchaos
