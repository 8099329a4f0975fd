#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>

#include "kerrchaos/classical.hpp"
#include "kerrchaos/config.hpp"
#include "kerrchaos/divergence.hpp"
#include "kerrchaos/qmap.hpp"
#include "kerrchaos/runners.hpp"

namespace kerrchaos {

namespace {

struct GroupResult {
    bool pass = false;
    std::string detail;
};

CMatrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
    std::normal_distribution<double> gauss;
    CMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = {gauss(rng), gauss(rng)};
    }
    return Eigen::HouseholderQR<CMatrix>(g).householderQ();
}

RVector random_probabilities(std::mt19937_64& rng, Eigen::Index dim) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    RVector p(dim);
    for (Eigen::Index i = 0; i < dim; ++i) p(i) = u(rng);
    return p / p.sum();
}

DensityMatrix density_in_basis(const CMatrix& basis, const RVector& p) {
    CMatrix m = basis * p.cast<cplx>().asDiagonal() * basis.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    m /= m.trace().real();
    return DensityMatrix(m);
}

StateVector random_state(std::mt19937_64& rng, Eigen::Index dim) {
    std::normal_distribution<double> gauss;
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = {gauss(rng), gauss(rng)};
    return StateVector::normalized(v);
}

GroupResult check_unitarity(double scale) {
    double worst = 0.0;
    for (const KerrPhase phase : {KerrPhase::hamiltonian, KerrPhase::literal}) {
        ModelParams p;
        p.dim = 96;
        p.kerr_phase = phase;
        worst = std::max(worst, unitarity_defect(kerr_unitary(p).entries()));
    }
    for (const double strength : {0.1, 0.7, 0.701}) {
        worst = std::max(worst, unitarity_defect(kick_unitary(strength, 96).entries()));
    }
    return {worst < 1e-10 * scale, "max |U^dagger U - I| = " + format_double(worst)};
}

GroupResult check_norm_and_purity(double scale) {
    ModelParams p;
    p.dim = 64;
    p.epsilon = 0.7;
    p.n_pulses = 2000;
    const TrajectoryPair pair = evolve_pair(p, 100);
    double norm_drift = 0.0;
    double purity_drift = 0.0;
    for (const StateVector& s : pair.unperturbed) {
        norm_drift = std::max(norm_drift, std::abs(s.squared_norm() - 1.0));
        purity_drift = std::max(purity_drift, std::abs(outer_product(s).purity() - 1.0));
    }
    const bool pass = norm_drift < 1e-10 * scale && purity_drift < 1e-10 * scale;
    return {pass, "norm drift " + format_double(norm_drift) + ", purity drift " +
                      format_double(purity_drift)};
}

GroupResult check_pure_identities(double scale) {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector psi = random_state(rng, 6);
        const StateVector phi = random_state(rng, 6);
        const DensityMatrix rho = outer_product(psi);
        const DensityMatrix sigma = outer_product(phi);
        const double f = fidelity(psi, phi);
        const double k1 = linear_divergence(rho, sigma).value;
        const double k2 = nonlinear_divergence(rho, sigma).value;
        worst = std::max({worst, std::abs(k1 - (1.0 - f)), std::abs(k2 - 1.5 * k1)});
    }
    return {worst < 1e-12 * scale, "max identity residual " + format_double(worst)};
}

GroupResult check_kld_oracle(double scale) {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index dim = 2 + trial % 7;
        const CMatrix basis = random_unitary(rng, dim);
        const RVector p = random_probabilities(rng, dim);
        const RVector q = random_probabilities(rng, dim);
        double scalar = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) scalar += p(i) * std::log(p(i) / q(i));
        const double value = kld(density_in_basis(basis, p), density_in_basis(basis, q)).value;
        worst = std::max(worst, std::abs(value - scalar));
    }
    return {worst < 1e-10 * scale, "max |kld - scalar KL| = " + format_double(worst)};
}

GroupResult check_q_limit(double scale) {
    std::mt19937_64 rng(13);
    bool monotone = true;
    double last_error = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index dim = 2 + trial % 4;
        const CMatrix basis = random_unitary(rng, dim);
        const DensityMatrix rho = density_in_basis(basis, random_probabilities(rng, dim));
        const DensityMatrix sigma = density_in_basis(basis, random_probabilities(rng, dim));
        const double target = kld(rho, sigma).value;
        double previous = std::numeric_limits<double>::infinity();
        for (const double h : {1e-1, 1e-2, 1e-3}) {
            const double err = std::abs(q_divergence(rho, sigma, 1.0 - h).value - target);
            if (!(err < previous)) monotone = false;
            previous = err;
        }
        last_error = std::max(last_error, previous / (1.0 + target));
    }
    const bool pass = monotone && last_error < 1e-2 * scale;
    return {pass, std::string(monotone ? "monotone" : "NOT monotone") +
                      ", worst relative error at h=1e-3 " + format_double(last_error)};
}

GroupResult check_jacobian(double scale) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    std::uniform_real_distribution<double> kick(0.0, 1.0);
    double worst = 0.0;
    const double chi = 1.0;
    const double period = 3.14159265358979323846;
    for (int trial = 0; trial < 100; ++trial) {
        const ClassicalState s{{coord(rng), coord(rng)}};
        const double eps = kick(rng);
        const Jacobian2 jac = classical_jacobian(s, eps, chi, period);
        const double h = 1e-6;
        for (int col = 0; col < 2; ++col) {
            const cplx d = col == 0 ? cplx(h, 0.0) : cplx(0.0, h);
            const cplx plus = classical_step({s.alpha + d}, eps, chi, period).alpha;
            const cplx minus = classical_step({s.alpha - d}, eps, chi, period).alpha;
            const cplx fd = (plus - minus) / (2.0 * h);
            const double norm = std::max(1.0, std::hypot(jac[0][col], jac[1][col]));
            worst = std::max(worst, std::abs(fd.real() - jac[0][col]) / norm);
            worst = std::max(worst, std::abs(fd.imag() - jac[1][col]) / norm);
        }
    }
    return {worst < 1e-6 * scale, "max relative deviation " + format_double(worst)};
}

}  // namespace

bool run_selftest(std::ostream& out, const SelftestOptions& options) {
    const std::pair<const char*, std::function<GroupResult(double)>> groups[] = {
        {"unitarity", check_unitarity},
        {"norm-and-purity", check_norm_and_purity},
        {"pure-state-identities", check_pure_identities},
        {"kld-oracle", check_kld_oracle},
        {"q-limit", check_q_limit},
        {"jacobian", check_jacobian},
    };
    bool all = true;
    for (const auto& [name, check] : groups) {
        GroupResult result;
        try {
            result = check(options.tolerance_scale);
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        all = all && result.pass;
        out << (result.pass ? "[PASS] " : "[FAIL] ") << name << ": " << result.detail << "\n";
    }
    return all;
}

}  // namespace kerrchaos
