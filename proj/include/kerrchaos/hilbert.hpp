#pragma once

// Truncated Fock-space linear algebra: states, density matrices, Hermitian
// generators and exactly unitary propagators. All storage is dense.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

namespace kerrchaos {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Eigenvalues at or below this are treated as exact zeros.
inline constexpr double kSupportCutoff = 1e-12;

// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const CMatrix& m);

// max_ij |(U^dagger U - I)_ij|
double unitarity_defect(const CMatrix& m);

/// Pure state over Fock levels 0..dim-1.
class StateVector {
public:
    /// Takes the amplitudes as given. Throws InvalidDimensionError if dim < 2.
    explicit StateVector(CVector amplitudes);

    /// Rescales to unit norm. Throws ContractViolationError on a zero vector.
    static StateVector normalized(CVector amplitudes);

    const CVector& amplitudes() const noexcept { return amplitudes_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    double squared_norm() const { return amplitudes_.squaredNorm(); }
    cplx operator[](std::size_t n) const { return amplitudes_(static_cast<Eigen::Index>(n)); }

private:
    CVector amplitudes_;
};

/// Hermitian, unit-trace matrix. Hermiticity and trace are validated on
/// construction; positivity is checked by `checked()`.
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix entries);

    /// Also verifies every eigenvalue is >= -1e-10.
    static DensityMatrix checked(CMatrix entries);

    const CMatrix& entries() const noexcept { return entries_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    double purity() const;

private:
    CMatrix entries_;
};

class HermitianOperator {
public:
    explicit HermitianOperator(CMatrix entries);

    const CMatrix& entries() const noexcept { return entries_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }

private:
    CMatrix entries_;
};

class UnitaryOperator {
public:
    /// Throws ContractViolationError if U^dagger U deviates from I by more
    /// than 1e-10 in any entry.
    explicit UnitaryOperator(CMatrix entries);

    static UnitaryOperator identity(std::size_t dim);

    const CMatrix& entries() const noexcept { return entries_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    UnitaryOperator adjoint() const;

private:
    CMatrix entries_;
};

struct LadderOperators {
    CMatrix annihilation;
    HermitianOperator number;
    HermitianOperator quadrature_generator;  // a + a^dagger
};

struct EigenDecomposition {
    RVector eigenvalues;  // ascending
    CMatrix eigenvectors; // columns; first non-negligible component real positive
};

StateVector vacuum_state(std::size_t dim);

/// Truncated coherent state |alpha>. Requires |alpha|^2 <= dim/4.
StateVector coherent_state(cplx alpha, std::size_t dim);

LadderOperators ladder_operators(std::size_t dim);

EigenDecomposition hermitian_eigendecomposition(const HermitianOperator& h);
EigenDecomposition hermitian_eigendecomposition(const CMatrix& h);

/// exp(-i * scale * H), assembled from the eigendecomposition of H.
UnitaryOperator unitary_from_generator(const HermitianOperator& h, double scale);

/// diag(exp(-i * left_angles)) * exp(-i * scale * H). Eigendecomposition and
/// products run in extended precision and are rounded once, which keeps
/// long products of the result norm-preserving to ~1e-17 per application.
/// Empty left_angles means no phase factor.
CMatrix phased_propagator(const HermitianOperator& h, double scale,
                          std::span<const long double> left_angles = {});

enum class SupportPolicy {
    zero_on_kernel,     // f is applied on the support only; kernel maps to 0
    require_full_rank,  // any eigenvalue <= cutoff raises RankDeficiencyError
};

/// f(rho) on the eigenbasis of rho.
CMatrix matrix_function(const DensityMatrix& rho, const std::function<double(double)>& f,
                        double support_cutoff = kSupportCutoff,
                        SupportPolicy policy = SupportPolicy::zero_on_kernel);

CMatrix matrix_log(const DensityMatrix& rho, double support_cutoff = kSupportCutoff);

/// rho^x. x == 0 yields the support projector; x < 0 needs full rank.
CMatrix matrix_power(const DensityMatrix& rho, double x, double support_cutoff = kSupportCutoff);

/// |psi><psi|. Throws ContractViolationError if psi is not unit norm.
DensityMatrix outer_product(const StateVector& psi);

/// <psi| op |psi>
cplx expectation(const StateVector& psi, const CMatrix& op);

}  // namespace kerrchaos
