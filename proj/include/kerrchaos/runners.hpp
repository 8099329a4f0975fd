#pragma once

// File-producing front-end operations. Each writes a CSV file whose leading
// '#' lines record the fully resolved configuration.

#include <iosfwd>
#include <string>
#include <vector>

#include "kerrchaos/config.hpp"

namespace kerrchaos {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct SeriesOutcome {
    TimeSeries series;
    LeakageReport leakage;
    std::vector<std::string> warnings;
};

struct SpectrumOutcome {
    SeriesOutcome source;
    Spectrum spectrum;
    std::vector<SpectralPeak> peaks;  // top 10
    double concentration_k5 = 0.0;
};

struct LyapunovRow {
    double epsilon = 0.0;
    double exponent = 0.0;
    bool divergent = false;
};

// `diag` receives warnings (leakage, parameter advice); it never affects the
// exit status.
SeriesOutcome run_series(const RunConfig& config, std::ostream& diag);
SpectrumOutcome run_spectrum(const RunConfig& config, std::ostream& diag);
std::vector<BifurcationPoint> run_bifurcation(const RunConfig& config, std::ostream& diag);
std::vector<LyapunovRow> run_lyapunov_sweep(const RunConfig& config, std::ostream& diag);

/// Computes the indicator series for a validated config without writing.
SeriesOutcome compute_series(const RunConfig& config);

struct SelftestOptions {
    // Multiplies every tolerance; 0 turns each check into an exact-equality
    // test, which the suite cannot meet.
    double tolerance_scale = 1.0;
};

/// Runs the fast invariant groups, printing one line per group. Returns true
/// when every group passes.
bool run_selftest(std::ostream& out, const SelftestOptions& options = {});

// Figure presets: name -> config overrides (applied on top of defaults).
struct FigurePreset {
    std::string name;
    Command command;
    std::vector<std::pair<std::string, std::string>> settings;
    std::string description;
};

const std::vector<FigurePreset>& figure_presets();
const FigurePreset& find_preset(const std::string& name);

/// Runs a preset on a config that already carries the preset's settings
/// (and any later overrides). Series presets write <stem>_series.csv; spectrum presets
/// also write <stem>_spectrum.csv; the bifurcation preset writes
/// <stem>_bifurcation.csv. Returns the written paths.
std::vector<std::string> run_preset(const FigurePreset& preset, RunConfig config,
                                    const std::string& stem, std::ostream& diag);

}  // namespace kerrchaos
