#include "kerrchaos/runners.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "kerrchaos/errors.hpp"
#include "kerrchaos/parallel.hpp"

namespace kerrchaos {

namespace {

using nlohmann::json;

std::ofstream open_output(const std::string& path) {
    if (path.empty()) throw IoError("no output path configured");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_header(std::ostream& out, Command command, const RunConfig& config) {
    out << "# kerrchaos " << to_string(command) << "\n";
    for (const auto& [key, value] : describe(config)) {
        out << "# " << key << " = " << value << "\n";
    }
}

json config_json(const RunConfig& config) {
    json j = json::object();
    for (const auto& [key, value] : describe(config)) j[key] = value;
    return j;
}

void write_sidecar(const RunConfig& config, Command command, json summary) {
    if (!config.json) return;
    const std::string path = config.output + ".json";
    std::ofstream out = open_output(path);
    json doc{{"command", to_string(command)}, {"config", config_json(config)},
             {"summary", std::move(summary)}};
    out << doc.dump(2) << "\n";
    finish(out, path);
}

void report(std::ostream& diag, const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) diag << "warning: " << w << "\n";
}

void report_leakage(std::ostream& diag, const LeakageReport& leakage) {
    if (!leakage.tripped) return;
    diag << "warning: truncation leakage: top-band population reached "
         << format_double(leakage.max_population) << " (first above "
         << format_double(kLeakageThreshold) << " at n = " << *leakage.first_step
         << "); consider a larger dim\n";
}

json series_summary(const SeriesOutcome& outcome) {
    const auto& v = outcome.series.values;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    json j{{"length", v.size()},
           {"min", *lo},
           {"max", *hi},
           {"mean", std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size())},
           {"leakage_tripped", outcome.leakage.tripped},
           {"leakage_max_population", outcome.leakage.max_population}};
    if (outcome.leakage.first_step) j["leakage_first_step"] = *outcome.leakage.first_step;
    return j;
}

void write_series_file(const RunConfig& config, const SeriesOutcome& outcome,
                       const std::string& path) {
    std::ofstream out = open_output(path);
    write_header(out, Command::series, config);
    out << "n,value\n";
    const TimeSeries& s = outcome.series;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        out << s.start_index + static_cast<std::int64_t>(i) << "," << format_double(s.values[i])
            << "\n";
    }
    finish(out, path);
}

void write_spectrum_file(const RunConfig& config, const SpectrumOutcome& outcome,
                         const std::string& path) {
    std::ofstream out = open_output(path);
    write_header(out, Command::spectrum, config);
    out << "frequency,power\n";
    const Spectrum& spec = outcome.spectrum;
    for (std::size_t k = 0; k < spec.power.size(); ++k) {
        out << format_double(spec.frequency(k)) << "," << format_double(spec.power[k]) << "\n";
    }
    out << "# peaks (rank, bin, frequency, power)\n";
    for (std::size_t r = 0; r < outcome.peaks.size(); ++r) {
        const SpectralPeak& p = outcome.peaks[r];
        out << "# peak," << r + 1 << "," << p.bin << "," << format_double(spec.frequency(p.bin))
            << "," << format_double(p.power) << "\n";
    }
    out << "# concentration_k5 = " << format_double(outcome.concentration_k5) << "\n";
    finish(out, path);
}

SpectrumOutcome analyse_spectrum(const RunConfig& config, SeriesOutcome source) {
    SpectrumOutcome outcome;
    outcome.spectrum = power_spectrum(source.series, config.window_start, config.resolved_window_end(),
                                      config.remove_mean, config.normalization, config.taper);
    outcome.peaks = dominant_peaks(outcome.spectrum, 10);
    try {
        outcome.concentration_k5 = spectral_concentration(outcome.spectrum, 5);
    } catch (const UndefinedMeasureError&) {
        outcome.concentration_k5 = std::numeric_limits<double>::quiet_NaN();
    } catch (const ContractViolationError&) {
        // fewer than five usable bins
        outcome.concentration_k5 = 1.0;
    }
    outcome.source = std::move(source);
    return outcome;
}

json spectrum_summary(const SpectrumOutcome& outcome) {
    json peaks = json::array();
    for (const SpectralPeak& p : outcome.peaks) {
        peaks.push_back({{"bin", p.bin},
                         {"frequency", outcome.spectrum.frequency(p.bin)},
                         {"power", p.power}});
    }
    return {{"bins", outcome.spectrum.power.size()},
            {"bin_width", outcome.spectrum.bin_width},
            {"concentration_k5", outcome.concentration_k5},
            {"peaks", std::move(peaks)},
            {"series", series_summary(outcome.source)}};
}

void write_bifurcation_file(const RunConfig& config, const std::vector<BifurcationPoint>& points,
                            const std::string& path) {
    std::ofstream out = open_output(path);
    write_header(out, Command::bifurcation, config);
    out << "epsilon,re_alpha,im_alpha\n";
    for (const BifurcationPoint& p : points) {
        out << format_double(p.epsilon) << "," << format_double(p.re_alpha) << ","
            << format_double(p.im_alpha) << "\n";
    }
    finish(out, path);
}

std::vector<LyapunovRow> lyapunov_rows(const RunConfig& config) {
    const std::vector<double> grid = epsilon_grid(config.eps_min, config.eps_max, config.n_eps);
    std::vector<LyapunovRow> rows(grid.size());
    parallel_for(grid.size(), 0, [&](std::size_t i) {
        rows[i].epsilon = grid[i];
        try {
            rows[i].exponent = lyapunov_exponent(grid[i], config.model.chi, config.model.period,
                                                 config.alpha0, config.transient, config.iterations);
        } catch (const DivergenceError&) {
            rows[i].exponent = std::numeric_limits<double>::quiet_NaN();
            rows[i].divergent = true;
        }
    });
    return rows;
}

}  // namespace

SeriesOutcome compute_series(const RunConfig& config) {
    SeriesOutcome outcome;
    outcome.warnings = config.validate(Command::series);
    const EvaluationPath path = config.dense ? EvaluationPath::dense : EvaluationPath::pure_state;
    IndicatorRun run = run_indicator(config.model, config.indicator, path);
    outcome.series = std::move(run.series);
    outcome.leakage = run.leakage;
    return outcome;
}

SeriesOutcome run_series(const RunConfig& config, std::ostream& diag) {
    config.validate(Command::series);
    SeriesOutcome outcome = compute_series(config);
    report(diag, outcome.warnings);
    report_leakage(diag, outcome.leakage);
    write_series_file(config, outcome, config.output);
    write_sidecar(config, Command::series, series_summary(outcome));
    return outcome;
}

SpectrumOutcome run_spectrum(const RunConfig& config, std::ostream& diag) {
    config.validate(Command::spectrum);
    SeriesOutcome source = compute_series(config);
    report(diag, source.warnings);
    report_leakage(diag, source.leakage);
    SpectrumOutcome outcome = analyse_spectrum(config, std::move(source));
    write_spectrum_file(config, outcome, config.output);
    write_sidecar(config, Command::spectrum, spectrum_summary(outcome));
    return outcome;
}

std::vector<BifurcationPoint> run_bifurcation(const RunConfig& config, std::ostream& diag) {
    report(diag, config.validate(Command::bifurcation));
    const std::vector<BifurcationPoint> points = bifurcation_scan(config.scan_settings());
    write_bifurcation_file(config, points, config.output);
    write_sidecar(config, Command::bifurcation,
                  {{"rows", points.size()}, {"columns", config.n_eps}});
    return points;
}

std::vector<LyapunovRow> run_lyapunov_sweep(const RunConfig& config, std::ostream& diag) {
    report(diag, config.validate(Command::lyapunov));
    const std::vector<LyapunovRow> rows = lyapunov_rows(config);

    std::ofstream out = open_output(config.output);
    write_header(out, Command::lyapunov, config);
    out << "epsilon,exponent,status\n";
    std::size_t divergent = 0;
    for (const LyapunovRow& row : rows) {
        if (row.divergent) {
            ++divergent;
            diag << "warning: orbit diverged at epsilon = " << format_double(row.epsilon) << "\n";
        }
        out << format_double(row.epsilon) << "," << format_double(row.exponent) << ","
            << (row.divergent ? "divergent" : "ok") << "\n";
    }
    finish(out, config.output);
    write_sidecar(config, Command::lyapunov, {{"rows", rows.size()}, {"divergent", divergent}});
    return rows;
}

const std::vector<FigurePreset>& figure_presets() {
    using S = std::vector<std::pair<std::string, std::string>>;
    static const std::vector<FigurePreset> presets = {
        {"fig1", Command::bifurcation,
         S{{"eps_min", "0.25"}, {"eps_max", "0.75"}, {"n_eps", "800"}, {"transient", "500"},
           {"samples", "300"}},
         "classical bifurcation diagram over epsilon"},
        {"fig2", Command::series, S{{"epsilon", "0.1"}, {"indicator", "k1"}, {"pulses", "10000"}},
         "linear divergence, regular regime"},
        {"fig3", Command::series, S{{"epsilon", "0.46"}, {"indicator", "k1"}, {"pulses", "80000"}},
         "linear divergence, regular window (long run)"},
        {"fig4", Command::spectrum,
         S{{"epsilon", "0.7"}, {"indicator", "k1"}, {"pulses", "10000"}, {"window_start", "1500"},
           {"window_end", "10000"}},
         "linear divergence and its spectrum, deep chaos"},
        {"fig5", Command::spectrum,
         S{{"epsilon", "0.1"}, {"indicator", "k2"}, {"pulses", "10000"}, {"window_start", "1500"},
           {"window_end", "10000"}},
         "nonlinear divergence and its spectrum, regular regime"},
        {"fig6", Command::spectrum,
         S{{"epsilon", "0.36"}, {"indicator", "k2"}, {"pulses", "10000"}, {"window_start", "1500"},
           {"window_end", "10000"}},
         "nonlinear divergence and its spectrum, chaotic band"},
        {"fig7", Command::spectrum,
         S{{"epsilon", "0.46"}, {"indicator", "k2"}, {"pulses", "10000"}, {"window_start", "1500"},
           {"window_end", "10000"}},
         "nonlinear divergence and its spectrum, regular window"},
        {"fig8", Command::spectrum,
         S{{"epsilon", "0.7"}, {"indicator", "k2"}, {"pulses", "10000"}, {"window_start", "1500"},
           {"window_end", "10000"}},
         "nonlinear divergence and its spectrum, deep chaos"},
    };
    return presets;
}

const FigurePreset& find_preset(const std::string& name) {
    for (const FigurePreset& p : figure_presets()) {
        if (p.name == name) return p;
    }
    throw ContractViolationError("unknown figure preset '" + name + "'");
}

std::vector<std::string> run_preset(const FigurePreset& preset, RunConfig config,
                                    const std::string& stem, std::ostream& diag) {
    std::vector<std::string> written;
    switch (preset.command) {
        case Command::bifurcation: {
            config.output = stem + "_bifurcation.csv";
            run_bifurcation(config, diag);
            written.push_back(config.output);
            break;
        }
        case Command::series: {
            config.output = stem + "_series.csv";
            run_series(config, diag);
            written.push_back(config.output);
            break;
        }
        case Command::spectrum: {
            config.validate(Command::spectrum);
            SeriesOutcome source = compute_series(config);
            report(diag, source.warnings);
            report_leakage(diag, source.leakage);

            RunConfig series_config = config;
            series_config.output = stem + "_series.csv";
            write_series_file(series_config, source, series_config.output);
            write_sidecar(series_config, Command::series, series_summary(source));
            written.push_back(series_config.output);

            config.output = stem + "_spectrum.csv";
            const SpectrumOutcome outcome = analyse_spectrum(config, std::move(source));
            write_spectrum_file(config, outcome, config.output);
            write_sidecar(config, Command::spectrum, spectrum_summary(outcome));
            written.push_back(config.output);
            break;
        }
        default: throw ContractViolationError("preset has no runnable command");
    }
    return written;
}

}  // namespace kerrchaos
