#include "kerrchaos/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kerrchaos/errors.hpp"

namespace kerrchaos {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
    if (a != b) {
        std::ostringstream msg;
        msg << "dimension mismatch: " << a << " vs " << b;
        throw DimensionMismatchError(msg.str());
    }
}

void require_normalized(const StateVector& psi, const char* name) {
    if (std::abs(psi.squared_norm() - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << name << " is not normalized (squared norm " << psi.squared_norm() << ")";
        throw ContractViolationError(msg.str());
    }
}

// Real part of Tr(A B) without forming the product.
double trace_of_product(const CMatrix& a, const CMatrix& b) {
    return a.cwiseProduct(b.transpose()).sum().real();
}

}  // namespace

DivergenceValue kld(const DensityMatrix& rho, const DensityMatrix& sigma, double support_cutoff) {
    require_same_dim(rho.dim(), sigma.dim());

    const Eigen::SelfAdjointEigenSolver<CMatrix> rho_eig(rho.entries());
    const Eigen::SelfAdjointEigenSolver<CMatrix> sigma_eig(sigma.entries());
    if (rho_eig.info() != Eigen::Success || sigma_eig.info() != Eigen::Success) {
        throw Error("Hermitian eigensolver did not converge");
    }

    double rho_log_rho = 0.0;
    for (Eigen::Index k = 0; k < rho_eig.eigenvalues().size(); ++k) {
        const double lambda = rho_eig.eigenvalues()(k);
        if (lambda > support_cutoff) rho_log_rho += lambda * std::log(lambda);
    }

    // Tr(rho ln sigma) = sum_j ln(mu_j) <v_j|rho|v_j>
    const CMatrix& v = sigma_eig.eigenvectors();
    const RVector weights = (v.adjoint() * rho.entries() * v).diagonal().real();
    double rho_log_sigma = 0.0;
    double kernel_weight = 0.0;
    for (Eigen::Index j = 0; j < weights.size(); ++j) {
        const double mu = sigma_eig.eigenvalues()(j);
        if (mu > support_cutoff) {
            rho_log_sigma += weights(j) * std::log(mu);
        } else {
            kernel_weight += weights(j);
        }
    }
    if (kernel_weight > kSupportLeakTolerance) {
        return {std::numeric_limits<double>::infinity(), DivergenceKind::kld, true};
    }
    return {rho_log_rho - rho_log_sigma, DivergenceKind::kld, false};
}

DivergenceValue kld(const StateVector& psi, const StateVector& phi) {
    // Pure sigma: the support of rho lies inside it only if both rays coincide,
    // and then the divergence is exactly zero.
    const double f = fidelity(psi, phi);
    if (1.0 - f > kSupportLeakTolerance) {
        return {std::numeric_limits<double>::infinity(), DivergenceKind::kld, true};
    }
    return {0.0, DivergenceKind::kld, false};
}

DivergenceValue linear_divergence(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho.dim(), sigma.dim());
    const CMatrix& r = rho.entries();
    const CMatrix& s = sigma.entries();
    const double value = (r * (r - s)).trace().real();
    return {value, DivergenceKind::linear, false};
}

DivergenceValue linear_divergence(const StateVector& psi, const StateVector& phi) {
    return {1.0 - fidelity(psi, phi), DivergenceKind::linear, false};
}

DivergenceValue nonlinear_divergence(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho.dim(), sigma.dim());
    const CMatrix& r = rho.entries();
    const CMatrix& s = sigma.entries();
    const auto n = static_cast<Eigen::Index>(rho.dim());
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix r_shift = r - id;
    const CMatrix s_shift = s - id;
    const CMatrix bracket = r - 0.5 * (r_shift * r_shift) - s + 0.5 * (s_shift * s_shift);
    const double value = (r * bracket).trace().real();
    return {value, DivergenceKind::nonlinear, false};
}

DivergenceValue nonlinear_divergence(const StateVector& psi, const StateVector& phi) {
    // rho^2 = rho and (rho - 1)^2 = 1 - rho reduce K2 to (3/2)(1 - F).
    return {1.5 * (1.0 - fidelity(psi, phi)), DivergenceKind::nonlinear, false};
}

DivergenceValue q_divergence(const DensityMatrix& rho, const DensityMatrix& sigma, double q,
                             double support_cutoff) {
    require_same_dim(rho.dim(), sigma.dim());
    if (!(q > 0.0 && q < 1.0)) {
        std::ostringstream msg;
        msg << "q-divergence needs 0 < q < 1, got q = " << q;
        throw DomainError(msg.str());
    }

    // Probing with a negative power enforces full rank of sigma up front.
    matrix_power(sigma, -1.0, support_cutoff);

    const auto overlap = [&](double x) {
        const CMatrix rho_x = matrix_power(rho, x, support_cutoff);
        const CMatrix sigma_rest = matrix_power(sigma, 1.0 - x, support_cutoff);
        return trace_of_product(rho_x, sigma_rest);
    };
    const double value = jackson_derivative(overlap, 1.0, q);
    return {value, DivergenceKind::q_divergence, false};
}

double jackson_derivative(const std::function<double(double)>& f, double x, double q) {
    if (x == 0.0) throw DomainError("Jackson derivative is undefined at x = 0");
    if (q == 1.0) throw DomainError("Jackson derivative is undefined at q = 1");
    return (f(q * x) - f(x)) / (x * (q - 1.0));
}

double fidelity(const StateVector& psi, const StateVector& phi) {
    require_same_dim(psi.dim(), phi.dim());
    require_normalized(psi, "psi");
    require_normalized(phi, "phi");
    const double f = std::norm(psi.amplitudes().dot(phi.amplitudes()));
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace kerrchaos
