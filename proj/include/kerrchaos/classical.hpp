#pragma once

// Classical kicked Kerr map: alpha -> (alpha - i eps) exp(-i chi T |alpha - i eps|^2).

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace kerrchaos {

struct ClassicalState {
    std::complex<double> alpha{0.0, 0.0};
};

struct BifurcationPoint {
    double epsilon = 0.0;
    double re_alpha = 0.0;
    double im_alpha = 0.0;
};

// Row-major 2x2 derivative of (Re alpha', Im alpha') w.r.t. (Re alpha, Im alpha).
using Jacobian2 = std::array<std::array<double, 2>, 2>;

ClassicalState classical_step(ClassicalState state, double epsilon, double chi, double period);

Jacobian2 classical_jacobian(ClassicalState state, double epsilon, double chi, double period);

struct ScanSettings {
    double eps_min = 0.25;
    double eps_max = 0.75;
    std::size_t n_eps = 800;
    std::size_t transient = 500;
    std::size_t samples = 300;
    double chi = 1.0;
    double period = 3.14159265358979323846;
    std::complex<double> alpha0{0.0, 0.0};
    // 0 = use the configured default thread count
    std::size_t threads = 0;
};

/// Uniform epsilon grid; a one-point grid uses eps_min.
std::vector<double> epsilon_grid(double eps_min, double eps_max, std::size_t n_eps);

/// Points are emitted column by column in grid order regardless of threading.
std::vector<BifurcationPoint> bifurcation_scan(const ScanSettings& settings);

/// Largest Lyapunov exponent per kick (natural log), from tangent-map averaging
/// with renormalization every step. Throws DivergenceError on a non-finite orbit.
double lyapunov_exponent(double epsilon, double chi, double period, std::complex<double> alpha0,
                         std::size_t transient, std::size_t iterations);

/// Number of points left after greedy merging of points closer than tol.
std::size_t count_distinct(const std::vector<BifurcationPoint>& points, double tol);

}  // namespace kerrchaos
