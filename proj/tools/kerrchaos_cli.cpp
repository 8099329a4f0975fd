// kerrchaos: command-line front end for the kicked Kerr oscillator toolkit.

#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kerrchaos/config.hpp"
#include "kerrchaos/errors.hpp"
#include "kerrchaos/runners.hpp"

namespace {

using namespace kerrchaos;

struct Subcommand {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> flags;
    std::string config_file;
    bool corrupt_tolerance = false;
};

void add_setting_options(Subcommand& sub) {
    for (const std::string& key : config_keys()) {
        sub.app->add_option("--" + key, sub.flags[key], "setting '" + key + "'");
    }
    sub.app->add_option("--config", sub.config_file, "flat key = value config file");
}

// defaults < preset < config file < command-line flags
RunConfig resolve(const Subcommand& sub, const std::vector<std::pair<std::string, std::string>>& preset) {
    RunConfig config;
    for (const auto& [key, value] : preset) apply_setting(config, key, value);
    if (!sub.config_file.empty()) {
        for (const auto& [key, value] : read_config_file(sub.config_file)) {
            apply_setting(config, key, value);
        }
    }
    for (const auto& [key, value] : sub.flags) {
        if (sub.app->count("--" + key) > 0) apply_setting(config, key, value);
    }
    return config;
}

int run(const std::string& name, const Subcommand& sub) {
    if (name == "selftest") {
        SelftestOptions options;
        if (sub.corrupt_tolerance) options.tolerance_scale = 0.0;
        return run_selftest(std::cout, options) ? kExitOk : kExitRuntime;
    }
    if (name.rfind("fig", 0) == 0) {
        const FigurePreset& preset = find_preset(name);
        RunConfig config = resolve(sub, preset.settings);
        const std::string stem = config.output.empty() ? preset.name : config.output;
        for (const std::string& path : run_preset(preset, config, stem, std::cerr)) {
            std::cerr << "wrote " << path << "\n";
        }
        return kExitOk;
    }

    RunConfig config = resolve(sub, {});
    if (config.output.empty()) config.output = name + ".csv";
    if (name == "series") run_series(config, std::cerr);
    else if (name == "spectrum") run_spectrum(config, std::cerr);
    else if (name == "bifurcation") run_bifurcation(config, std::cerr);
    else if (name == "lyapunov") run_lyapunov_sweep(config, std::cerr);
    std::cerr << "wrote " << config.output << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kerrchaos: kicked Kerr oscillator divergences, spectra and classical maps"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"series", "indicator time series (n, value)"},
        {"spectrum", "power spectrum of an indicator series"},
        {"bifurcation", "classical bifurcation scan (epsilon, re_alpha, im_alpha)"},
        {"lyapunov", "largest classical Lyapunov exponent per epsilon"},
        {"selftest", "fast invariant suite"},
    };
    std::map<std::string, std::unique_ptr<Subcommand>> subs;
    for (const auto& [name, help] : commands) {
        auto sub = std::make_unique<Subcommand>();
        sub->app = app.add_subcommand(name, help);
        if (name == "selftest") {
            sub->app->add_flag("--corrupt-tolerance", sub->corrupt_tolerance,
                               "zero every tolerance to exercise the failure path");
        } else {
            add_setting_options(*sub);
        }
        subs.emplace(name, std::move(sub));
    }
    for (const FigurePreset& preset : figure_presets()) {
        auto sub = std::make_unique<Subcommand>();
        sub->app = app.add_subcommand(preset.name, preset.description);
        add_setting_options(*sub);
        subs.emplace(preset.name, std::move(sub));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    for (const auto& [name, sub] : subs) {
        if (!sub->app->parsed()) continue;
        try {
            return run(name, *sub);
        } catch (const ContractViolationError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitValidation;
        } catch (const InvalidDimensionError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitValidation;
        } catch (const DomainError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitValidation;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitRuntime;
        }
    }
    return kExitValidation;
}
