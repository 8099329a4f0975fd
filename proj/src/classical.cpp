#include "kerrchaos/classical.hpp"

#include <cmath>
#include <sstream>

#include "kerrchaos/errors.hpp"
#include "kerrchaos/parallel.hpp"

namespace kerrchaos {

ClassicalState classical_step(ClassicalState state, double epsilon, double chi, double period) {
    const std::complex<double> kicked = state.alpha - std::complex<double>(0.0, epsilon);
    return {kicked * std::polar(1.0, -chi * period * std::norm(kicked))};
}

Jacobian2 classical_jacobian(ClassicalState state, double epsilon, double chi, double period) {
    // With (x, y) the kicked point and phi = -chi T (x^2 + y^2):
    //   x' = x cos(phi) - y sin(phi),  y' = x sin(phi) + y cos(phi)
    // and d/dphi (x', y') = (-y', x'). The kick is a translation.
    const double x = state.alpha.real();
    const double y = state.alpha.imag() - epsilon;
    const double rate = chi * period;
    const double phi = -rate * (x * x + y * y);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double xn = x * c - y * s;
    const double yn = x * s + y * c;
    const double phi_x = -2.0 * rate * x;
    const double phi_y = -2.0 * rate * y;
    return {{{c - yn * phi_x, -s - yn * phi_y}, {s + xn * phi_x, c + xn * phi_y}}};
}

std::vector<double> epsilon_grid(double eps_min, double eps_max, std::size_t n_eps) {
    std::vector<double> grid(n_eps);
    if (n_eps == 1) {
        grid[0] = eps_min;
        return grid;
    }
    const double span = eps_max - eps_min;
    for (std::size_t i = 0; i < n_eps; ++i) {
        grid[i] = eps_min + span * static_cast<double>(i) / static_cast<double>(n_eps - 1);
    }
    return grid;
}

std::vector<BifurcationPoint> bifurcation_scan(const ScanSettings& settings) {
    if (!(settings.eps_min < settings.eps_max) && settings.n_eps != 1) {
        throw ContractViolationError("invalid eps_min/eps_max: need eps_min < eps_max");
    }
    if (settings.n_eps == 0) throw ContractViolationError("invalid n_eps: must be >= 1");
    if (settings.samples == 0) throw ContractViolationError("invalid samples: must be >= 1");

    const std::vector<double> grid = epsilon_grid(settings.eps_min, settings.eps_max, settings.n_eps);
    std::vector<BifurcationPoint> points(grid.size() * settings.samples);
    parallel_for(grid.size(), settings.threads, [&](std::size_t column) {
        const double eps = grid[column];
        ClassicalState state{settings.alpha0};
        for (std::size_t i = 0; i < settings.transient; ++i) {
            state = classical_step(state, eps, settings.chi, settings.period);
        }
        BifurcationPoint* out = points.data() + column * settings.samples;
        for (std::size_t i = 0; i < settings.samples; ++i) {
            state = classical_step(state, eps, settings.chi, settings.period);
            out[i] = {eps, state.alpha.real(), state.alpha.imag()};
        }
    });
    return points;
}

double lyapunov_exponent(double epsilon, double chi, double period, std::complex<double> alpha0,
                         std::size_t transient, std::size_t iterations) {
    if (iterations == 0) throw ContractViolationError("invalid iterations: must be >= 1");

    ClassicalState state{alpha0};
    for (std::size_t i = 0; i < transient; ++i) {
        state = classical_step(state, epsilon, chi, period);
    }

    double tx = 1.0 / std::sqrt(2.0);
    double ty = tx;
    double log_sum = 0.0;
    for (std::size_t i = 0; i < iterations; ++i) {
        const Jacobian2 jac = classical_jacobian(state, epsilon, chi, period);
        const double nx = jac[0][0] * tx + jac[0][1] * ty;
        const double ny = jac[1][0] * tx + jac[1][1] * ty;
        const double stretch = std::hypot(nx, ny);
        state = classical_step(state, epsilon, chi, period);
        if (!std::isfinite(stretch) || stretch == 0.0 || !std::isfinite(std::abs(state.alpha))) {
            std::ostringstream msg;
            msg << "classical orbit became non-finite at iteration " << transient + i
                << " (epsilon = " << epsilon << ")";
            throw DivergenceError(msg.str(), transient + i);
        }
        log_sum += std::log(stretch);
        tx = nx / stretch;
        ty = ny / stretch;
    }
    return log_sum / static_cast<double>(iterations);
}

std::size_t count_distinct(const std::vector<BifurcationPoint>& points, double tol) {
    std::vector<BifurcationPoint> representatives;
    for (const BifurcationPoint& p : points) {
        bool seen = false;
        for (const BifurcationPoint& r : representatives) {
            if (std::hypot(p.re_alpha - r.re_alpha, p.im_alpha - r.im_alpha) < tol) {
                seen = true;
                break;
            }
        }
        if (!seen) representatives.push_back(p);
    }
    return representatives.size();
}

}  // namespace kerrchaos
