#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "kerrchaos/classical.hpp"
#include "kerrchaos/errors.hpp"
#include "oracles.hpp"

using namespace kerrchaos;
using cd = std::complex<double>;

namespace {

const double kPi = 3.14159265358979323846;

// The map written out by hand, used as an oracle for the library version.
cd map_oracle(cd a, double eps, double chi, double period) {
    const double x = a.real(), y = a.imag() - eps;
    const double ph = -chi * period * (x * x + y * y);
    return {x * std::cos(ph) - y * std::sin(ph), x * std::sin(ph) + y * std::cos(ph)};
}

ScanSettings column(double eps, std::size_t samples = 300) {
    ScanSettings s;
    s.eps_min = eps;
    s.eps_max = eps;
    s.n_eps = 1;
    s.samples = samples;
    return s;
}

double max_radius(const std::vector<BifurcationPoint>& pts) {
    double r = 0.0;
    for (const auto& p : pts) r = std::max(r, std::hypot(p.re_alpha, p.im_alpha));
    return r;
}

}  // namespace

TEST_CASE("classical_step examples") {
    const cd a = classical_step({1.0}, 0.0, 1.0, kPi).alpha;
    CHECK(std::abs(a - cd(-1.0, 0.0)) < 1e-15);
    const cd b = classical_step({0.0}, 0.1, 1.0, kPi).alpha;
    const cd expect = cd(0.0, -0.1) * std::polar(1.0, -0.01 * kPi);
    CHECK(std::abs(b - expect) < 1e-16);
}

TEST_CASE("classical_step matches the hand-written map") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0), e(0.0, 1.0), t(0.01, 4.0);
    for (int k = 0; k < 1000; ++k) {
        const cd a(u(rng), u(rng));
        const double eps = e(rng), chi = t(rng), period = t(rng);
        CHECK(std::abs(classical_step({a}, eps, chi, period).alpha - map_oracle(a, eps, chi, period)) < 1e-12);
    }
}

TEST_CASE("zero kick preserves |alpha|") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 1000; ++k) {
        const cd a(u(rng), u(rng));
        const double r = std::abs(classical_step({a}, 0.0, 1.0, kPi).alpha);
        CHECK(std::abs(r - std::abs(a)) <= 1e-14 * std::abs(a));
    }
}

TEST_CASE("jacobian agrees with central finite differences at 100 random points") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5), e(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double x = u(rng), y = u(rng), eps = e(rng);
        const Jacobian2 j = classical_jacobian({cd(x, y)}, eps, 1.0, kPi);
        const auto f = [&](double px, double py) {
            const cd r = map_oracle(cd(px, py), eps, 1.0, kPi);
            return std::array<double, 2>{r.real(), r.imag()};
        };
        const auto fd = oracle::finite_difference(f, x, y, 1e-6);
        double scale = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) scale = std::max(scale, std::abs(j[r][c]));
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(j[r][c] - fd[r][c]) / std::max(1.0, scale));
    }
    MESSAGE("worst relative deviation ", worst);
    CHECK(worst < 1e-6);
}

TEST_CASE("jacobian determinant is one (area preserving)") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0), e(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const Jacobian2 j = classical_jacobian({cd(u(rng), u(rng))}, e(rng), 1.0, kPi);
        CHECK(std::abs(j[0][0] * j[1][1] - j[0][1] * j[1][0] - 1.0) < 1e-10);
    }
}

TEST_CASE("epsilon grid") {
    const std::vector<double> g = epsilon_grid(0.25, 0.75, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.25);
    CHECK(g.back() == 0.75);
    CHECK(g[2] == doctest::Approx(0.5));
    CHECK(epsilon_grid(0.3, 0.9, 1) == std::vector<double>{0.3});
}

TEST_CASE("bifurcation scan: degenerate and sizing") {
    ScanSettings one = column(0.4, 1);
    one.transient = 0;
    const auto pts = bifurcation_scan(one);
    REQUIRE(pts.size() == 1);
    const cd expect = classical_step({0.0}, 0.4, 1.0, kPi).alpha;
    CHECK(pts[0].epsilon == 0.4);
    CHECK(pts[0].re_alpha == expect.real());
    CHECK(pts[0].im_alpha == expect.imag());

    ScanSettings grid;
    grid.n_eps = 40;
    grid.samples = 25;
    const auto all = bifurcation_scan(grid);
    CHECK(all.size() == 40 * 25);
    const auto eps = epsilon_grid(0.25, 0.75, 40);
    for (std::size_t c = 0; c < 40; ++c)
        for (std::size_t s = 0; s < 25; ++s) CHECK(all[c * 25 + s].epsilon == eps[c]);

    ScanSettings bad;
    bad.eps_min = 0.8;
    CHECK_THROWS_AS(bifurcation_scan(bad), ContractViolationError);
    bad = ScanSettings{};
    bad.samples = 0;
    CHECK_THROWS_AS(bifurcation_scan(bad), ContractViolationError);
}

TEST_CASE("bifurcation scan: transient then consecutive samples") {
    ScanSettings s = column(0.46, 10);
    s.transient = 7;
    s.alpha0 = {0.2, -0.1};
    const auto pts = bifurcation_scan(s);
    ClassicalState st{s.alpha0};
    for (int i = 0; i < 7; ++i) st = classical_step(st, 0.46, 1.0, kPi);
    for (int i = 0; i < 10; ++i) {
        st = classical_step(st, 0.46, 1.0, kPi);
        CHECK(pts[static_cast<std::size_t>(i)].re_alpha == st.alpha.real());
        CHECK(pts[static_cast<std::size_t>(i)].im_alpha == st.alpha.imag());
    }
}

TEST_CASE("bifurcation scan is deterministic and thread-count independent") {
    ScanSettings s;
    s.n_eps = 64;
    s.samples = 50;
    s.transient = 100;
    s.threads = 1;
    const auto a = bifurcation_scan(s);
    const auto b = bifurcation_scan(s);
    s.threads = 4;
    const auto c = bifurcation_scan(s);
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].re_alpha == b[i].re_alpha);
        CHECK(a[i].im_alpha == c[i].im_alpha);
        CHECK(a[i].re_alpha == c[i].re_alpha);
    }
}

TEST_CASE("deep chaos column fills a region") {
    const auto pts = bifurcation_scan(column(0.7));
    CHECK(count_distinct(pts, 1e-6) == 300);
}

// The map is area preserving, so the eps=0.1 orbit from the origin sits on an
// invariant curve (quasi-periodic), never on a finite periodic attractor.
// Measured: 300 distinct points at 1e-6.
TEST_CASE("regular column collapses onto few points" * doctest::should_fail()) {
    const auto pts = bifurcation_scan(column(0.1));
    MESSAGE("distinct points: ", count_distinct(pts, 1e-6));
    CHECK(count_distinct(pts, 1e-6) <= 8);
}

TEST_CASE("regular orbits stay bounded near the origin, chaotic ones spread") {
    const double r01 = max_radius(bifurcation_scan(column(0.1)));
    const double r046 = max_radius(bifurcation_scan(column(0.46)));
    const double r07 = max_radius(bifurcation_scan(column(0.7)));
    MESSAGE("max |alpha|: 0.1 -> ", r01, ", 0.46 -> ", r046, ", 0.7 -> ", r07);
    CHECK(r01 < 1.0);
    CHECK(r046 < 1.0);
    CHECK(r07 > 2.0 * r046);
}

TEST_CASE("count_distinct") {
    std::vector<BifurcationPoint> pts = {{0, 0, 0}, {0, 1e-8, 0}, {0, 1, 1}, {0, 1, 1 + 5e-7}, {0, 2, 0}};
    CHECK(count_distinct(pts, 1e-6) == 3);
    CHECK(count_distinct(pts, 1e-9) == 5);
    CHECK(count_distinct({}, 1e-6) == 0);
}

TEST_CASE("lyapunov: zero kick is not chaotic") {
    for (cd a0 : {cd(0.5, 0.0), cd(1.0, 0.3), cd(-0.2, 0.9)}) {
        const double l = lyapunov_exponent(0.0, 1.0, kPi, a0, 500, 20000);
        CHECK(l <= 1e-3);
    }
}

TEST_CASE("lyapunov sign pattern over the regime map") {
    const double l01 = lyapunov_exponent(0.1, 1.0, kPi, 0.0, 500, 20000);
    const double l036 = lyapunov_exponent(0.36, 1.0, kPi, 0.0, 500, 20000);
    const double l046 = lyapunov_exponent(0.46, 1.0, kPi, 0.0, 500, 20000);
    const double l07 = lyapunov_exponent(0.7, 1.0, kPi, 0.0, 500, 20000);
    MESSAGE("exponents ", l01, " ", l036, " ", l046, " ", l07);
    CHECK(l01 <= 1e-3);
    CHECK(l036 > 1e-3);
    CHECK(l046 <= 1e-3);
    CHECK(l07 > 1e-3);
}

TEST_CASE("lyapunov: divergence and argument errors") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(lyapunov_exponent(0.5, 1.0, kPi, cd(nan, 0.0), 0, 1000), DivergenceError);
    try {
        lyapunov_exponent(0.5, 1.0, kPi, cd(nan, 0.0), 3, 1000);
    } catch (const DivergenceError& e) {
        CHECK(e.iteration() == 3);
    }
    CHECK_THROWS_AS(lyapunov_exponent(0.5, 1.0, kPi, 0.0, 0, 0), ContractViolationError);
}
