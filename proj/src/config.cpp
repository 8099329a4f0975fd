#include "kerrchaos/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "kerrchaos/errors.hpp"

namespace kerrchaos {

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
    throw ContractViolationError("invalid " + key + ": '" + value + "' (expected " + expected + ")");
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string value = trim(text);
    if (value == "pi") return kPi;
    double result = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, result);
    if (ec != std::errc() || ptr != last || value.empty()) bad_value(key, text, "a real number");
    return result;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
    const std::string value = trim(text);
    std::int64_t result = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), result);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
        // allow 1e4-style counts when they are exact integers
        double d = 0.0;
        try {
            d = parse_double(key, value);
        } catch (const ContractViolationError&) {
            bad_value(key, text, "an integer");
        }
        if (d != std::floor(d) || std::abs(d) > 9e15) bad_value(key, text, "an integer");
        return static_cast<std::int64_t>(d);
    }
    return result;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    const std::int64_t v = parse_int(key, text);
    if (v < 0) bad_value(key, text, "a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string value = trim(text);
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    bad_value(key, text, "true or false");
}

cplx parse_complex(const std::string& key, const std::string& text) {
    const std::string value = trim(text);
    const auto comma = value.find(',');
    if (comma == std::string::npos) return {parse_double(key, value), 0.0};
    return {parse_double(key, value.substr(0, comma)), parse_double(key, value.substr(comma + 1))};
}

std::string format_complex(cplx z) {
    return format_double(z.real()) + "," + format_double(z.imag());
}

InitialState parse_initial(const std::string& text) {
    const std::string value = trim(text);
    if (value == "vacuum") return VacuumStart{};
    const std::string prefix = "coherent:";
    if (value.rfind(prefix, 0) == 0) {
        return CoherentStart{parse_complex("initial", value.substr(prefix.size()))};
    }
    bad_value("initial", text, "vacuum or coherent:RE,IM");
}

KerrPhase parse_kerr_phase(const std::string& text) {
    const std::string value = trim(text);
    if (value == "hamiltonian") return KerrPhase::hamiltonian;
    if (value == "literal") return KerrPhase::literal;
    bad_value("kerr_phase", text, "hamiltonian or literal");
}

}  // namespace

std::string to_string(Command command) {
    switch (command) {
        case Command::series: return "series";
        case Command::spectrum: return "spectrum";
        case Command::bifurcation: return "bifurcation";
        case Command::lyapunov: return "lyapunov";
        case Command::selftest: return "selftest";
    }
    return "unknown";
}

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) return "nan";
    return std::string(buffer, ptr);
}

std::string format_initial(const InitialState& initial) {
    if (const auto* coherent = std::get_if<CoherentStart>(&initial)) {
        return "coherent:" + format_complex(coherent->alpha);
    }
    return "vacuum";
}

std::int64_t RunConfig::resolved_window_end() const {
    return window_end < 0 ? static_cast<std::int64_t>(model.n_pulses) : window_end;
}

ScanSettings RunConfig::scan_settings() const {
    ScanSettings scan;
    scan.eps_min = eps_min;
    scan.eps_max = eps_max;
    scan.n_eps = n_eps;
    scan.transient = transient;
    scan.samples = samples;
    scan.chi = model.chi;
    scan.period = model.period;
    scan.alpha0 = alpha0;
    return scan;
}

std::vector<std::string> RunConfig::validate(Command command) const {
    std::vector<std::string> warnings;
    const auto reject = [](const std::string& field, const std::string& why) {
        throw ContractViolationError("invalid " + field + ": " + why);
    };

    switch (command) {
        case Command::series:
        case Command::spectrum: {
            warnings = model.validate();
            if (indicator.kind == IndicatorKind::kq && !(indicator.q > 0.0 && indicator.q < 1.0)) {
                reject("q", "must satisfy 0 < q < 1");
            }
            if (command == Command::spectrum) {
                const std::int64_t end = resolved_window_end();
                if (window_start < 0) reject("window_start", "must be >= 0");
                if (end > static_cast<std::int64_t>(model.n_pulses)) {
                    reject("window_end", "must not exceed pulses");
                }
                if (end - window_start + 1 < 2) {
                    reject("window_end", "window must hold at least two samples");
                }
            }
            break;
        }
        case Command::bifurcation:
        case Command::lyapunov: {
            if (!std::isfinite(model.chi) || !std::isfinite(model.period)) {
                reject("chi", "chi and period must be finite");
            }
            if (n_eps == 0) reject("n_eps", "must be >= 1");
            if (n_eps > 1 && !(eps_min < eps_max)) reject("eps_max", "must exceed eps_min");
            if (command == Command::bifurcation && samples == 0) reject("samples", "must be >= 1");
            if (command == Command::lyapunov && iterations < 1000) {
                reject("iterations", "must be >= 1000");
            }
            break;
        }
        case Command::selftest: break;
    }
    return warnings;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "chi",        "period",       "epsilon",   "delta_epsilon", "dim",     "pulses",
        "initial",    "kerr_phase",   "indicator", "q",             "dense",   "window_start",
        "window_end", "remove_mean",  "normalization", "taper",     "eps_min", "eps_max",
        "n_eps",      "transient",    "samples",   "iterations",    "alpha0",  "output",
        "json"};
    return keys;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "chi") c.model.chi = parse_double(key, value);
    else if (key == "period") c.model.period = parse_double(key, value);
    else if (key == "epsilon") c.model.epsilon = parse_double(key, value);
    else if (key == "delta_epsilon") c.model.delta_epsilon = parse_double(key, value);
    else if (key == "dim") c.model.dim = parse_count(key, value);
    else if (key == "pulses") c.model.n_pulses = parse_count(key, value);
    else if (key == "initial") c.model.initial = parse_initial(value);
    else if (key == "kerr_phase") c.model.kerr_phase = parse_kerr_phase(value);
    else if (key == "indicator") c.indicator.kind = parse_indicator(trim(value));
    else if (key == "q") c.indicator.q = parse_double(key, value);
    else if (key == "dense") c.dense = parse_bool(key, value);
    else if (key == "window_start") c.window_start = parse_int(key, value);
    else if (key == "window_end") c.window_end = parse_int(key, value);
    else if (key == "remove_mean") c.remove_mean = parse_bool(key, value);
    else if (key == "normalization") c.normalization = parse_normalization(trim(value));
    else if (key == "taper") c.taper = parse_taper(trim(value));
    else if (key == "eps_min") c.eps_min = parse_double(key, value);
    else if (key == "eps_max") c.eps_max = parse_double(key, value);
    else if (key == "n_eps") c.n_eps = parse_count(key, value);
    else if (key == "transient") c.transient = parse_count(key, value);
    else if (key == "samples") c.samples = parse_count(key, value);
    else if (key == "iterations") c.iterations = parse_count(key, value);
    else if (key == "alpha0") c.alpha0 = parse_complex(key, value);
    else if (key == "output") c.output = trim(value);
    else if (key == "json") c.json = parse_bool(key, value);
    else throw ContractViolationError("unknown setting: '" + key + "'");
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> settings;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ContractViolationError("config line " + std::to_string(line_no) +
                                         ": expected key = value");
        }
        settings[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return settings;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
    return {
        {"chi", format_double(c.model.chi)},
        {"period", format_double(c.model.period)},
        {"epsilon", format_double(c.model.epsilon)},
        {"delta_epsilon", format_double(c.model.delta_epsilon)},
        {"dim", std::to_string(c.model.dim)},
        {"pulses", std::to_string(c.model.n_pulses)},
        {"initial", format_initial(c.model.initial)},
        {"kerr_phase", c.model.kerr_phase == KerrPhase::hamiltonian ? "hamiltonian" : "literal"},
        {"indicator", to_string(c.indicator.kind)},
        {"q", format_double(c.indicator.q)},
        {"dense", c.dense ? "true" : "false"},
        {"window_start", std::to_string(c.window_start)},
        {"window_end", std::to_string(c.resolved_window_end())},
        {"remove_mean", c.remove_mean ? "true" : "false"},
        {"normalization", to_string(c.normalization)},
        {"taper", to_string(c.taper)},
        {"eps_min", format_double(c.eps_min)},
        {"eps_max", format_double(c.eps_max)},
        {"n_eps", std::to_string(c.n_eps)},
        {"transient", std::to_string(c.transient)},
        {"samples", std::to_string(c.samples)},
        {"iterations", std::to_string(c.iterations)},
        {"alpha0", format_complex(c.alpha0)},
        {"output", c.output},
        {"json", c.json ? "true" : "false"},
    };
}

}  // namespace kerrchaos
