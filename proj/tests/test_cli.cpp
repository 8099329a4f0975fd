#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrchaos/config.hpp"
#include "kerrchaos/errors.hpp"
#include "kerrchaos/runners.hpp"

using namespace kerrchaos;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("kerrchaos_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

struct Run {
    int code = -1;
    std::string err;
};

Run cli(const Scratch& s, const std::string& args) {
    const std::string err_path = s / "stderr.txt";
    const std::string cmd = std::string(KERRCHAOS_BIN) + " " + args + " > " + (s / "stdout.txt") + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err_path);
    r.err.assign(std::istreambuf_iterator<char>(in), {});
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct Table {
    std::vector<std::string> comments;
    std::string columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> raw_rows;
};

Table read_table(const std::string& path) {
    Table t;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line);
        } else if (t.columns.empty()) {
            t.columns = line;
        } else {
            t.raw_rows.push_back(line);
            std::vector<double> row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
            t.rows.push_back(row);
        }
    }
    return t;
}

std::string header_value(const Table& t, const std::string& key) {
    const std::string prefix = "# " + key + " = ";
    for (const auto& c : t.comments)
        if (c.rfind(prefix, 0) == 0) return c.substr(prefix.size());
    return "<missing>";
}

}  // namespace

TEST_CASE("apply_setting parses every value form") {
    RunConfig c;
    apply_setting(c, "period", "pi");
    CHECK(c.model.period == 3.14159265358979323846);
    apply_setting(c, "pulses", "1e4");
    CHECK(c.model.n_pulses == 10000);
    apply_setting(c, "dim", "256");
    CHECK(c.model.dim == 256);
    for (const char* t : {"true", "1", "yes", "on"}) {
        apply_setting(c, "remove_mean", "false");
        apply_setting(c, "remove_mean", t);
        CHECK(c.remove_mean);
    }
    for (const char* f : {"false", "0", "no", "off"}) {
        apply_setting(c, "dense", "true");
        apply_setting(c, "dense", f);
        CHECK_FALSE(c.dense);
    }
    apply_setting(c, "initial", "coherent:0.5,-0.25");
    REQUIRE(std::holds_alternative<CoherentStart>(c.model.initial));
    CHECK(std::get<CoherentStart>(c.model.initial).alpha == cplx(0.5, -0.25));
    apply_setting(c, "initial", "vacuum");
    CHECK(std::holds_alternative<VacuumStart>(c.model.initial));
    apply_setting(c, "alpha0", "0.1,0.2");
    CHECK(c.alpha0 == cplx(0.1, 0.2));
    apply_setting(c, "indicator", "k2");
    CHECK(c.indicator.kind == IndicatorKind::k2);
    apply_setting(c, "kerr_phase", "literal");
    CHECK(c.model.kerr_phase == KerrPhase::literal);
    apply_setting(c, "normalization", "unit_sum");
    CHECK(c.normalization == Normalization::unit_sum);
    apply_setting(c, "window_end", "-1");
    CHECK(c.window_end == -1);

    CHECK_THROWS_WITH_AS(apply_setting(c, "epsilon", "abc"), doctest::Contains("epsilon"), ContractViolationError);
    CHECK_THROWS_WITH_AS(apply_setting(c, "dim", "12.5"), doctest::Contains("dim"), ContractViolationError);
    CHECK_THROWS_WITH_AS(apply_setting(c, "colour", "red"), doctest::Contains("colour"), ContractViolationError);
    CHECK_THROWS_AS(apply_setting(c, "remove_mean", "maybe"), ContractViolationError);
    CHECK_THROWS_AS(apply_setting(c, "initial", "squeezed"), ContractViolationError);
}

TEST_CASE("config text parsing") {
    const auto m = parse_config_text("# comment\n\nepsilon = 0.36\n dim=64   # trailing\nindicator = k2\n");
    CHECK(m.at("epsilon") == "0.36");
    CHECK(m.at("dim") == "64");
    CHECK(m.at("indicator") == "k2");
    CHECK(m.size() == 3);
    CHECK_THROWS_AS(parse_config_text("epsilon 0.3\n"), ContractViolationError);
    CHECK_THROWS(read_config_file("/nonexistent/kerrchaos.cfg"));
}

TEST_CASE("describe lists every key and round-trips") {
    RunConfig c;
    apply_setting(c, "epsilon", "0.123456789012345");
    apply_setting(c, "initial", "coherent:1.5,0.25");
    apply_setting(c, "alpha0", "0.3,-0.7");
    const auto d = describe(c);
    REQUIRE(d.size() == config_keys().size());
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i].first == config_keys()[i]);
    RunConfig back;
    for (const auto& [k, v] : d) apply_setting(back, k, v);
    CHECK(describe(back) == d);
}

TEST_CASE("format_double round-trips") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double x = i % 3 == 0 ? u(rng) : std::ldexp(u(rng), static_cast<int>(rng() % 200) - 100);
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("config validation names the field") {
    RunConfig c;
    c.model.chi = -1.0;
    CHECK_THROWS_WITH_AS(c.validate(Command::series), doctest::Contains("chi"), ContractViolationError);
    c = RunConfig{};
    c.window_end = 20000;
    CHECK_THROWS_WITH_AS(c.validate(Command::spectrum), doctest::Contains("window_end"), ContractViolationError);
    c = RunConfig{};
    c.window_start = 50;
    c.window_end = 50;
    CHECK_THROWS_AS(c.validate(Command::spectrum), ContractViolationError);
    c = RunConfig{};
    c.indicator = {IndicatorKind::kq, 1.0};
    CHECK_THROWS_WITH_AS(c.validate(Command::series), doctest::Contains("q"), ContractViolationError);
    c = RunConfig{};
    c.eps_min = 0.8;
    CHECK_THROWS_AS(c.validate(Command::bifurcation), ContractViolationError);
    c = RunConfig{};
    c.iterations = 10;
    CHECK_THROWS_WITH_AS(c.validate(Command::lyapunov), doctest::Contains("iterations"), ContractViolationError);
    c = RunConfig{};
    CHECK(c.resolved_window_end() == 10000);
    c.model.delta_epsilon = 0.5;
    CHECK(c.validate(Command::series).size() == 1);
}

TEST_CASE("figure presets bind the documented parameter sets") {
    const std::vector<std::pair<std::string, double>> expect = {
        {"fig2", 0.1}, {"fig3", 0.46}, {"fig4", 0.7}, {"fig5", 0.1}, {"fig6", 0.36}, {"fig7", 0.46}, {"fig8", 0.7}};
    for (const auto& [name, eps] : expect) {
        RunConfig c;
        for (const auto& [k, v] : find_preset(name).settings) apply_setting(c, k, v);
        CHECK(c.model.epsilon == eps);
        CHECK(c.model.chi == 1.0);
        CHECK(c.model.period == 3.14159265358979323846);
        CHECK(c.model.delta_epsilon == 0.001);
    }
    CHECK(find_preset("fig1").command == Command::bifurcation);
    CHECK_THROWS(find_preset("fig9"));
}

TEST_CASE("series: header, columns, values") {
    Scratch s;
    const Run r = cli(s, "series --pulses 200 --dim 64 --output " + (s / "a.csv"));
    REQUIRE(r.code == 0);
    const Table t = read_table(s / "a.csv");
    CHECK(t.comments.front() == "# kerrchaos series");
    for (const auto& key : config_keys()) CHECK(header_value(t, key) != "<missing>");
    CHECK(header_value(t, "window_end") == "200");
    CHECK(t.columns == "n,value");
    REQUIRE(t.rows.size() == 201);
    for (std::size_t n = 0; n < t.rows.size(); ++n) {
        CHECK(t.rows[n][0] == static_cast<double>(n));
        CHECK(t.rows[n][1] >= 0.0);
        CHECK(t.rows[n][1] <= 1.0);
    }
}

TEST_CASE("series: K1 at eps 0.1 stays in [0,1] for 10^4 pulses") {
    Scratch s;
    REQUIRE(cli(s, "series --epsilon 0.1 --output " + (s / "k.csv")).code == 0);
    const Table t = read_table(s / "k.csv");
    REQUIRE(t.rows.size() == 10001);
    for (const auto& row : t.rows) {
        CHECK(row[1] >= 0.0);
        CHECK(row[1] <= 1.0);
    }
}

TEST_CASE("series: unperturbed pair gives zeros") {
    Scratch s;
    REQUIRE(cli(s, "series --delta_epsilon 0 --pulses 300 --dim 48 --output " + (s / "z.csv")).code == 0);
    for (const auto& row : read_table(s / "z.csv").rows) CHECK(std::abs(row[1]) < 1e-12);
}

TEST_CASE("output is bit-identical across runs") {
    Scratch s;
    REQUIRE(cli(s, "series --pulses 500 --dim 64 --epsilon 0.7 --output " + (s / "a.csv")).code == 0);
    REQUIRE(cli(s, "series --pulses 500 --dim 64 --epsilon 0.7 --output " + (s / "b.csv")).code == 0);
    // the output key differs, so compare everything after the header
    CHECK(read_table(s / "a.csv").raw_rows == read_table(s / "b.csv").raw_rows);

    const std::string ly = "lyapunov --eps_min 0.1 --eps_max 0.7 --n_eps 7 --iterations 5000 --output " + (s / "l.csv");
    REQUIRE(cli(s, ly).code == 0);
    const std::string first = slurp(s / "l.csv");
    REQUIRE(cli(s, ly).code == 0);
    CHECK(slurp(s / "l.csv") == first);
}

TEST_CASE("precedence: defaults < config file < flags") {
    Scratch s;
    {
        std::ofstream cfg(s / "run.cfg");
        cfg << "epsilon = 0.36\ndim = 40\npulses = 50\nindicator = k2\n";
    }
    REQUIRE(cli(s, "series --config " + (s / "run.cfg") + " --dim 32 --output " + (s / "p.csv")).code == 0);
    const Table t = read_table(s / "p.csv");
    CHECK(header_value(t, "epsilon") == "0.36");
    CHECK(header_value(t, "dim") == "32");
    CHECK(header_value(t, "indicator") == "k2");
    CHECK(header_value(t, "chi") == "1");
    CHECK(t.rows.size() == 51);
}

TEST_CASE("presets take overrides from config and flags") {
    Scratch s;
    {
        std::ofstream cfg(s / "fig.cfg");
        cfg << "pulses = 3000\nwindow_end = 3000\n";
    }
    const Run r = cli(s, "fig6 --config " + (s / "fig.cfg") + " --dim 48 --output " + (s / "f6"));
    REQUIRE(r.code == 0);
    const Table series = read_table(s / "f6_series.csv");
    const Table spec = read_table(s / "f6_spectrum.csv");
    CHECK(header_value(series, "epsilon") == "0.36");
    CHECK(header_value(series, "indicator") == "k2");
    CHECK(header_value(series, "pulses") == "3000");
    CHECK(header_value(series, "dim") == "48");
    CHECK(header_value(spec, "window_start") == "1500");
    CHECK(series.rows.size() == 3001);
}

TEST_CASE("spectrum: table plus peak summary footer") {
    Scratch s;
    const Run r = cli(s, "spectrum --epsilon 0.1 --indicator k2 --window_start 1500 --window_end 10000 --output " + (s / "sp.csv"));
    REQUIRE(r.code == 0);
    const Table t = read_table(s / "sp.csv");
    CHECK(t.columns == "frequency,power");
    CHECK(t.rows.size() == 8501 / 2 + 1);
    double mx = 0.0;
    for (const auto& row : t.rows) mx = std::max(mx, row[1]);
    CHECK(mx == 1.0);
    int peaks = 0;
    bool conc = false;
    for (const auto& c : t.comments) {
        peaks += c.rfind("# peak,", 0) == 0 ? 1 : 0;
        conc = conc || c.rfind("# concentration_k5 = ", 0) == 0;
    }
    // local maxima only, so at most ten
    CHECK(peaks >= 3);
    CHECK(peaks <= 10);
    CHECK(conc);
    CHECK(std::stod(header_value(t, "concentration_k5")) >= 0.8);
}

TEST_CASE("spectrum: constant input gives a DC line without mean removal") {
    Scratch s;
    REQUIRE(cli(s, "spectrum --delta_epsilon 0 --indicator fidelity --remove_mean false --pulses 100 --dim 32 --output " + (s / "dc.csv")).code == 0);
    const Table t = read_table(s / "dc.csv");
    CHECK(t.rows[0][1] == 1.0);
    for (std::size_t k = 1; k < t.rows.size(); ++k) CHECK(t.rows[k][1] < 1e-20);
}

TEST_CASE("bifurcation: sizing and grid order") {
    Scratch s;
    REQUIRE(cli(s, "bifurcation --eps_min 0.46 --eps_max 0.46 --n_eps 1 --samples 37 --output " + (s / "one.csv")).code == 0);
    const Table one = read_table(s / "one.csv");
    CHECK(one.columns == "epsilon,re_alpha,im_alpha");
    CHECK(one.rows.size() == 37);

    REQUIRE(cli(s, "bifurcation --output " + (s / "all.csv")).code == 0);
    const Table all = read_table(s / "all.csv");
    REQUIRE(all.rows.size() == 800 * 300);
    for (std::size_t i = 1; i < all.rows.size(); ++i) REQUIRE(all.rows[i][0] >= all.rows[i - 1][0]);
}

TEST_CASE("lyapunov sweep: zero kick and the regime pattern") {
    Scratch s;
    REQUIRE(cli(s, "lyapunov --eps_min 0 --eps_max 0 --n_eps 1 --alpha0 0.5,0.2 --output " + (s / "z.csv")).code == 0);
    const Table z = read_table(s / "z.csv");
    CHECK(z.columns == "epsilon,exponent,status");
    REQUIRE(z.rows.size() == 1);
    CHECK(z.rows[0][1] <= 1e-3);

    const double eps[4] = {0.1, 0.36, 0.46, 0.7};
    const bool chaotic[4] = {false, true, false, true};
    for (int i = 0; i < 4; ++i) {
        const std::string e = std::to_string(eps[i]);
        REQUIRE(cli(s, "lyapunov --eps_min " + e + " --eps_max " + e + " --n_eps 1 --output " + (s / "r.csv")).code == 0);
        const double l = read_table(s / "r.csv").rows.at(0)[1];
        CHECK((l > 1e-3) == chaotic[i]);
    }
}

TEST_CASE("json sidecar") {
    Scratch s;
    REQUIRE(cli(s, "spectrum --pulses 2000 --dim 64 --json true --output " + (s / "j.csv")).code == 0);
    const auto doc = nlohmann::json::parse(slurp(s / "j.csv.json"));
    CHECK(doc.at("command") == "spectrum");
    CHECK(doc.at("config").at("dim") == "64");
    CHECK(doc.contains("summary"));
}

TEST_CASE("exit codes and diagnostics") {
    Scratch s;
    Run r = cli(s, "series --dim 1 --output " + (s / "x.csv"));
    CHECK(r.code == 1);
    CHECK(r.err.find("dim") != std::string::npos);
    CHECK_FALSE(fs::exists(s / "x.csv"));

    CHECK(cli(s, "series --epsilon abc").code == 1);
    CHECK(cli(s, "series --no-such-flag 3").code == 1);
    CHECK(cli(s, "").code == 1);
    CHECK(cli(s, "spectrum --window_start 9000 --window_end 9000 --output " + (s / "w.csv")).code == 1);
    CHECK(cli(s, "series --pulses 3 --output " + s.dir.string() + "/missing/dir/out.csv").code == 2);
    CHECK(cli(s, "series --config " + (s / "nope.cfg")).code == 2);

    // leakage is a warning only
    r = cli(s, "series --epsilon 0.7 --dim 16 --pulses 200 --output " + (s / "leak.csv"));
    CHECK(r.code == 0);
    CHECK(r.err.find("leakage") != std::string::npos);
    CHECK(fs::exists(s / "leak.csv"));

    // a large perturbation is also just a warning
    r = cli(s, "series --delta_epsilon 0.5 --pulses 10 --dim 16 --output " + (s / "big.csv"));
    CHECK(r.code == 0);
    CHECK(r.err.find("delta_epsilon") != std::string::npos);
}

TEST_CASE("selftest passes, corrupted tolerance fails") {
    Scratch s;
    CHECK(cli(s, "selftest").code == 0);
    CHECK(slurp(s / "stdout.txt").find("[FAIL]") == std::string::npos);
    CHECK(cli(s, "selftest --corrupt-tolerance").code != 0);
    CHECK(slurp(s / "stdout.txt").find("[FAIL]") != std::string::npos);
}
