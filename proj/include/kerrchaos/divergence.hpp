#pragma once

// State-distance indicators between a reference state rho and a comparison
// state sigma. Dense overloads transcribe the trace formulas directly; the
// StateVector overloads are the pure-state reductions used at scale.

#include <functional>

#include "kerrchaos/hilbert.hpp"

namespace kerrchaos {

enum class DivergenceKind { kld, linear, nonlinear, q_divergence, fidelity };

struct DivergenceValue {
    double value = 0.0;
    DivergenceKind kind = DivergenceKind::kld;
    // rho's support is not contained in sigma's; value is +infinity
    bool rank_deficient = false;
};

// Tr(rho P_ker(sigma)) above this marks a support violation.
inline constexpr double kSupportLeakTolerance = 1e-10;

/// Tr[rho (ln rho - ln sigma)] with 0 ln 0 = 0.
DivergenceValue kld(const DensityMatrix& rho, const DensityMatrix& sigma,
                    double support_cutoff = kSupportCutoff);
DivergenceValue kld(const StateVector& psi, const StateVector& phi);

/// K1 = Tr[rho (rho - sigma)]
DivergenceValue linear_divergence(const DensityMatrix& rho, const DensityMatrix& sigma);
DivergenceValue linear_divergence(const StateVector& psi, const StateVector& phi);

/// K2 = Tr[rho (rho - (rho - 1)^2 / 2 - sigma + (sigma - 1)^2 / 2)]
DivergenceValue nonlinear_divergence(const DensityMatrix& rho, const DensityMatrix& sigma);
DivergenceValue nonlinear_divergence(const StateVector& psi, const StateVector& phi);

/// Jackson derivative of x -> Tr(rho^x sigma^(1-x)) evaluated at x = 1.
/// Needs 0 < q < 1 and a full-rank sigma.
DivergenceValue q_divergence(const DensityMatrix& rho, const DensityMatrix& sigma, double q,
                             double support_cutoff = kSupportCutoff);

/// [f(qx) - f(x)] / (x (q - 1)); x != 0, q != 1.
double jackson_derivative(const std::function<double(double)>& f, double x, double q);

/// |<psi|phi>|^2, clamped to [0, 1].
double fidelity(const StateVector& psi, const StateVector& phi);

}  // namespace kerrchaos
