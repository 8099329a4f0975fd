#include "kerrchaos/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "kerrchaos/errors.hpp"

namespace kerrchaos {

namespace {

// Input-validation tolerances. Produced objects meet tighter bounds; these
// only reject inputs that are clearly outside the type.
constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kNormTol = 1e-10;
constexpr double kUnitaryTol = 1e-10;
constexpr double kPositivityTol = 1e-10;

void require_dim(Eigen::Index dim) {
    if (dim < 2) {
        std::ostringstream msg;
        msg << "Fock dimension must be >= 2, got " << dim;
        throw InvalidDimensionError(msg.str());
    }
}

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << what << " must be square, got " << m.rows() << "x" << m.cols();
        throw DimensionMismatchError(msg.str());
    }
    require_dim(m.rows());
}

// Makes the first component with modulus above the threshold real positive.
void fix_phases(CMatrix& vectors) {
    for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
        const double scale = vectors.col(col).cwiseAbs().maxCoeff();
        for (Eigen::Index row = 0; row < vectors.rows(); ++row) {
            const cplx c = vectors(row, col);
            if (std::abs(c) > 1e-8 * scale) {
                vectors.col(col) *= std::conj(c) / std::abs(c);
                break;
            }
        }
    }
}

}  // namespace

double hermiticity_defect(const CMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r <= c; ++r) worst = std::max(worst, std::norm(m(r, c) - std::conj(m(c, r))));
    return std::sqrt(worst);
}

double unitarity_defect(const CMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    const CMatrix product = m.adjoint() * m;
    return (product - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    require_dim(amplitudes_.size());
}

StateVector StateVector::normalized(CVector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ContractViolationError("cannot normalize a zero or non-finite amplitude vector");
    }
    amplitudes /= norm;
    return StateVector(std::move(amplitudes));
}

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "density matrix");
    const double defect = hermiticity_defect(entries_);
    if (defect > kHermitianTol) {
        std::ostringstream msg;
        msg << "density matrix is not Hermitian (max deviation " << defect << ")";
        throw ContractViolationError(msg.str());
    }
    const double trace = entries_.trace().real();
    if (std::abs(trace - 1.0) > kTraceTol) {
        std::ostringstream msg;
        msg << "density matrix trace is " << trace << ", expected 1";
        throw ContractViolationError(msg.str());
    }
}

DensityMatrix DensityMatrix::checked(CMatrix entries) {
    DensityMatrix rho(std::move(entries));
    const Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.entries(), Eigen::EigenvaluesOnly);
    const double smallest = solver.eigenvalues().minCoeff();
    if (smallest < -kPositivityTol) {
        throw RankDeficiencyError("density matrix has a negative eigenvalue", smallest);
    }
    return rho;
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return entries_.cwiseAbs2().sum();
}

HermitianOperator::HermitianOperator(CMatrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "Hermitian operator");
    const double defect = hermiticity_defect(entries_);
    if (defect > kHermitianTol * std::max(1.0, entries_.cwiseAbs().maxCoeff())) {
        std::ostringstream msg;
        msg << "operator is not Hermitian (max deviation " << defect << ")";
        throw ContractViolationError(msg.str());
    }
}

UnitaryOperator::UnitaryOperator(CMatrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "unitary operator");
    const double defect = unitarity_defect(entries_);
    if (!(defect <= kUnitaryTol)) {
        std::ostringstream msg;
        msg << "operator is not unitary (max |U^dagger U - I| = " << defect << ")";
        throw ContractViolationError(msg.str());
    }
}

UnitaryOperator UnitaryOperator::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    require_dim(n);
    return UnitaryOperator(CMatrix::Identity(n, n));
}

UnitaryOperator UnitaryOperator::adjoint() const {
    return UnitaryOperator(entries_.adjoint());
}

StateVector vacuum_state(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    require_dim(n);
    CVector amps = CVector::Zero(n);
    amps(0) = 1.0;
    return StateVector(std::move(amps));
}

StateVector coherent_state(cplx alpha, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    require_dim(n);
    if (std::norm(alpha) > static_cast<double>(dim) / 4.0) {
        std::ostringstream msg;
        msg << "coherent amplitude |alpha|^2 = " << std::norm(alpha)
            << " exceeds dim/4 = " << static_cast<double>(dim) / 4.0;
        throw TruncationLeakageError(msg.str());
    }
    CVector amps(n);
    amps(0) = std::exp(-0.5 * std::norm(alpha));
    for (Eigen::Index k = 1; k < n; ++k) {
        amps(k) = amps(k - 1) * alpha / std::sqrt(static_cast<double>(k));
    }
    return StateVector::normalized(std::move(amps));
}

LadderOperators ladder_operators(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    require_dim(n);
    CMatrix a = CMatrix::Zero(n, n);
    CMatrix number = CMatrix::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
        number(k, k) = static_cast<double>(k);
    }
    CMatrix quadrature = a + a.adjoint();
    return LadderOperators{std::move(a), HermitianOperator(std::move(number)),
                           HermitianOperator(std::move(quadrature))};
}

EigenDecomposition hermitian_eigendecomposition(const HermitianOperator& h) {
    const Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.entries());
    if (solver.info() != Eigen::Success) {
        throw Error("Hermitian eigensolver did not converge");
    }
    EigenDecomposition result{solver.eigenvalues(), solver.eigenvectors()};
    fix_phases(result.eigenvectors);
    return result;
}

EigenDecomposition hermitian_eigendecomposition(const CMatrix& h) {
    return hermitian_eigendecomposition(HermitianOperator(h));
}

UnitaryOperator unitary_from_generator(const HermitianOperator& h, double scale) {
    return UnitaryOperator(phased_propagator(h, scale));
}

CMatrix phased_propagator(const HermitianOperator& h, double scale,
                          std::span<const long double> left_angles) {
    using LCplx = std::complex<long double>;
    using LMatrix = Eigen::Matrix<LCplx, Eigen::Dynamic, Eigen::Dynamic>;
    using LVector = Eigen::Matrix<LCplx, Eigen::Dynamic, 1>;
    using LReal = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

    const auto n = static_cast<Eigen::Index>(h.dim());
    if (!left_angles.empty() && static_cast<Eigen::Index>(left_angles.size()) != n) {
        throw DimensionMismatchError("phase vector and generator dimensions differ");
    }
    LMatrix u(n, n);
    if (h.entries().imag().isZero(0.0)) {
        // real symmetric generator: real eigenvectors, U = V cos V^T - i V sin V^T
        const LReal hl = h.entries().real().cast<long double>();
        const Eigen::SelfAdjointEigenSolver<LReal> solver(hl);
        if (solver.info() != Eigen::Success) {
            throw Error("Hermitian eigensolver did not converge");
        }
        const LReal& v = solver.eigenvectors();
        Eigen::Matrix<long double, Eigen::Dynamic, 1> c(n), s(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const long double a = static_cast<long double>(scale) * solver.eigenvalues()(k);
            c(k) = std::cos(a);
            s(k) = std::sin(a);
        }
        const LReal re = v * c.asDiagonal() * v.transpose();
        const LReal im = v * s.asDiagonal() * v.transpose();
        for (Eigen::Index col = 0; col < n; ++col)
            for (Eigen::Index row = 0; row < n; ++row) u(row, col) = LCplx(re(row, col), -im(row, col));
    } else {
        const LMatrix hl = h.entries().cast<LCplx>();
        const Eigen::SelfAdjointEigenSolver<LMatrix> solver(hl);
        if (solver.info() != Eigen::Success) {
            throw Error("Hermitian eigensolver did not converge");
        }
        LVector phases(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            phases(k) = std::polar(1.0L, -static_cast<long double>(scale) * solver.eigenvalues()(k));
        }
        const LMatrix& v = solver.eigenvectors();
        u = v * phases.asDiagonal() * v.adjoint();
    }
    if (!left_angles.empty()) {
        for (Eigen::Index row = 0; row < n; ++row) {
            u.row(row) *= std::polar(1.0L, -left_angles[static_cast<std::size_t>(row)]);
        }
    }
    return u.cast<cplx>();
}

CMatrix matrix_function(const DensityMatrix& rho, const std::function<double(double)>& f,
                        double support_cutoff, SupportPolicy policy) {
    const Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.entries());
    if (solver.info() != Eigen::Success) {
        throw Error("Hermitian eigensolver did not converge");
    }
    const RVector& lambda = solver.eigenvalues();
    RVector mapped(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (lambda(k) > support_cutoff) {
            mapped(k) = f(lambda(k));
        } else if (policy == SupportPolicy::require_full_rank) {
            std::ostringstream msg;
            msg << "matrix function needs full rank, eigenvalue " << lambda(k)
                << " is at or below the support cutoff " << support_cutoff;
            throw RankDeficiencyError(msg.str(), lambda(k));
        } else {
            mapped(k) = 0.0;
        }
    }
    const CMatrix& v = solver.eigenvectors();
    return v * mapped.asDiagonal() * v.adjoint();
}

CMatrix matrix_log(const DensityMatrix& rho, double support_cutoff) {
    return matrix_function(
        rho, [](double x) { return std::log(x); }, support_cutoff,
        SupportPolicy::require_full_rank);
}

CMatrix matrix_power(const DensityMatrix& rho, double x, double support_cutoff) {
    const SupportPolicy policy =
        x < 0.0 ? SupportPolicy::require_full_rank : SupportPolicy::zero_on_kernel;
    if (x == 0.0) {
        return matrix_function(rho, [](double) { return 1.0; }, support_cutoff, policy);
    }
    return matrix_function(rho, [x](double v) { return std::pow(v, x); }, support_cutoff, policy);
}

DensityMatrix outer_product(const StateVector& psi) {
    const double norm2 = psi.squared_norm();
    if (std::abs(norm2 - 1.0) > kNormTol) {
        std::ostringstream msg;
        msg << "outer_product needs a normalized state, squared norm is " << norm2;
        throw ContractViolationError(msg.str());
    }
    const CVector& amps = psi.amplitudes();
    CMatrix rho(amps.size(), amps.size());
    for (Eigen::Index c = 0; c < amps.size(); ++c) rho.col(c) = amps * std::conj(amps(c));
    return DensityMatrix(std::move(rho));
}

cplx expectation(const StateVector& psi, const CMatrix& op) {
    if (op.rows() != static_cast<Eigen::Index>(psi.dim()) || op.cols() != op.rows()) {
        throw DimensionMismatchError("operator and state dimensions differ");
    }
    return psi.amplitudes().dot(op * psi.amplitudes());
}

}  // namespace kerrchaos
