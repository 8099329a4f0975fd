#include "kerrchaos/qmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kerrchaos/divergence.hpp"
#include "kerrchaos/errors.hpp"

namespace kerrchaos {

namespace {

void reject(const std::string& field, const std::string& why) {
    throw ContractViolationError("invalid " + field + ": " + why);
}

// Kerr phase chi_eff * T * n(n-1) for each Fock level.
std::vector<long double> kerr_angles(const ModelParams& params) {
    const long double rate = params.kerr_phase == KerrPhase::hamiltonian
                                 ? 0.5L * params.chi * params.period
                                 : static_cast<long double>(params.chi) * params.period;
    std::vector<long double> angles(params.dim);
    for (std::size_t k = 0; k < params.dim; ++k) {
        const long double kk = static_cast<long double>(k);
        angles[k] = rate * kk * (kk - 1.0L);
    }
    return angles;
}

// One-period propagator U_NL * U_K(strength), kick first.
CMatrix floquet(const ModelParams& params, double strength) {
    const std::vector<long double> angles = kerr_angles(params);
    return phased_propagator(ladder_operators(params.dim).quadrature_generator, strength, angles);
}

void require_normalized(const StateVector& psi) {
    if (std::abs(psi.squared_norm() - 1.0) > 1e-10) {
        throw ContractViolationError("state is not normalized");
    }
}

}  // namespace

std::vector<std::string> ModelParams::validate() const {
    if (!(chi > 0.0) || !std::isfinite(chi)) reject("chi", "must be finite and > 0");
    if (!(period > 0.0) || !std::isfinite(period)) reject("period", "must be finite and > 0");
    if (!std::isfinite(epsilon)) reject("epsilon", "must be finite");
    if (!(delta_epsilon >= 0.0) || !std::isfinite(delta_epsilon)) {
        reject("delta_epsilon", "must be finite and >= 0");
    }
    if (dim < 2) reject("dim", "must be >= 2");
    if (const auto* coherent = std::get_if<CoherentStart>(&initial)) {
        if (std::norm(coherent->alpha) > static_cast<double>(dim) / 4.0) {
            reject("initial", "coherent |alpha|^2 exceeds dim/4");
        }
    }
    std::vector<std::string> warnings;
    if (delta_epsilon > 0.1 * std::abs(epsilon)) {
        std::ostringstream msg;
        msg << "delta_epsilon = " << delta_epsilon << " exceeds 0.1*|epsilon| = "
            << 0.1 * std::abs(epsilon) << "; the perturbation is not small";
        warnings.push_back(msg.str());
    }
    return warnings;
}

StateVector initial_state(const ModelParams& params) {
    if (const auto* coherent = std::get_if<CoherentStart>(&params.initial)) {
        return coherent_state(coherent->alpha, params.dim);
    }
    return vacuum_state(params.dim);
}

UnitaryOperator kerr_unitary(const ModelParams& params) {
    const auto n = static_cast<Eigen::Index>(params.dim);
    if (n < 2) throw InvalidDimensionError("Fock dimension must be >= 2");
    const std::vector<long double> angles = kerr_angles(params);
    CVector phases(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        phases(k) = static_cast<cplx>(std::polar(1.0L, -angles[static_cast<std::size_t>(k)]));
    }
    return UnitaryOperator(phases.asDiagonal());
}

UnitaryOperator kick_unitary(double strength, std::size_t dim) {
    return unitary_from_generator(ladder_operators(dim).quadrature_generator, strength);
}

StateVector step(const StateVector& psi, const UnitaryOperator& u_nl, const UnitaryOperator& u_k) {
    if (psi.dim() != u_nl.dim() || psi.dim() != u_k.dim()) {
        throw DimensionMismatchError("state and propagator dimensions differ");
    }
    require_normalized(psi);
    CVector kicked = u_k.entries() * psi.amplitudes();
    return StateVector(u_nl.entries() * kicked);
}

double top_band_population(const StateVector& psi) {
    const auto n = static_cast<Eigen::Index>(psi.dim());
    const Eigen::Index band = std::max<Eigen::Index>(1, (n + 9) / 10);
    return psi.amplitudes().tail(band).squaredNorm();
}

void LeakageReport::observe(std::size_t n, double population) {
    if (population > max_population) max_population = population;
    if (population >= kLeakageThreshold && !tripped) {
        tripped = true;
        first_step = n;
    }
}

TrajectoryPair evolve_pair(const ModelParams& params, std::size_t stride) {
    params.validate();
    if (stride == 0) throw ContractViolationError("stride must be >= 1");

    const CMatrix map_u = floquet(params, params.epsilon);
    const CMatrix map_p = floquet(params, params.epsilon + params.delta_epsilon);

    TrajectoryPair pair;
    pair.params = params;
    pair.stride = stride;
    const StateVector start = initial_state(params);
    CVector psi = start.amplitudes();
    CVector phi = start.amplitudes();
    pair.unperturbed.push_back(start);
    pair.perturbed.push_back(start);
    pair.leakage.observe(0, top_band_population(start));

    CVector scratch(psi.size());
    for (std::size_t n = 1; n <= params.n_pulses; ++n) {
        scratch.noalias() = map_u * psi;
        psi.swap(scratch);
        scratch.noalias() = map_p * phi;
        phi.swap(scratch);
        const StateVector u(psi);
        const StateVector p(phi);
        pair.leakage.observe(n, std::max(top_band_population(u), top_band_population(p)));
        if (n % stride == 0) {
            pair.unperturbed.push_back(u);
            pair.perturbed.push_back(p);
        }
    }
    return pair;
}

std::string to_string(IndicatorKind kind) {
    switch (kind) {
        case IndicatorKind::k1: return "k1";
        case IndicatorKind::k2: return "k2";
        case IndicatorKind::kld: return "kld";
        case IndicatorKind::kq: return "kq";
        case IndicatorKind::fidelity: return "fidelity";
    }
    return "unknown";
}

IndicatorKind parse_indicator(const std::string& name) {
    if (name == "k1") return IndicatorKind::k1;
    if (name == "k2") return IndicatorKind::k2;
    if (name == "kld") return IndicatorKind::kld;
    if (name == "kq") return IndicatorKind::kq;
    if (name == "fidelity") return IndicatorKind::fidelity;
    throw ContractViolationError("invalid indicator: '" + name +
                                 "' (expected k1, k2, kld, kq or fidelity)");
}

double indicator_value(const StateVector& unperturbed, const StateVector& perturbed,
                       const Indicator& indicator, EvaluationPath path) {
    if (indicator.kind == IndicatorKind::fidelity) {
        return fidelity(unperturbed, perturbed);
    }

    DivergenceValue result;
    if (path == EvaluationPath::pure_state && indicator.kind != IndicatorKind::kq) {
        switch (indicator.kind) {
            case IndicatorKind::k1: result = linear_divergence(unperturbed, perturbed); break;
            case IndicatorKind::k2: result = nonlinear_divergence(unperturbed, perturbed); break;
            default: result = kld(unperturbed, perturbed); break;
        }
    } else {
        const DensityMatrix rho = outer_product(unperturbed);
        const DensityMatrix sigma = outer_product(perturbed);
        switch (indicator.kind) {
            case IndicatorKind::k1: result = linear_divergence(rho, sigma); break;
            case IndicatorKind::k2: result = nonlinear_divergence(rho, sigma); break;
            case IndicatorKind::kld: result = kld(rho, sigma); break;
            default: result = q_divergence(rho, sigma, indicator.q); break;
        }
    }
    if (result.rank_deficient) {
        throw RankDeficiencyError(
            "quantum relative entropy is infinite: the perturbed state is pure and differs "
            "from the unperturbed one",
            0.0);
    }
    return result.value;
}

TimeSeries indicator_series(const TrajectoryPair& pair, const Indicator& indicator,
                            EvaluationPath path) {
    if (pair.stride != 1) {
        throw ContractViolationError("indicator_series needs a trajectory stored with stride 1");
    }
    if (pair.unperturbed.size() != pair.perturbed.size()) {
        throw DimensionMismatchError("trajectory lengths differ");
    }
    TimeSeries series;
    series.values.reserve(pair.unperturbed.size());
    for (std::size_t n = 0; n < pair.unperturbed.size(); ++n) {
        series.values.push_back(
            indicator_value(pair.unperturbed[n], pair.perturbed[n], indicator, path));
    }
    return series;
}

IndicatorRun run_indicator(const ModelParams& params, const Indicator& indicator,
                           EvaluationPath path) {
    params.validate();
    const CMatrix map_u = floquet(params, params.epsilon);
    const CMatrix map_p = floquet(params, params.epsilon + params.delta_epsilon);

    IndicatorRun run;
    run.series.values.reserve(params.n_pulses + 1);
    StateVector psi = initial_state(params);
    StateVector phi = psi;
    CVector scratch(static_cast<Eigen::Index>(params.dim));
    for (std::size_t n = 0;; ++n) {
        run.leakage.observe(n, std::max(top_band_population(psi), top_band_population(phi)));
        run.series.values.push_back(indicator_value(psi, phi, indicator, path));
        if (n == params.n_pulses) break;
        scratch.noalias() = map_u * psi.amplitudes();
        psi = StateVector(scratch);
        scratch.noalias() = map_p * phi.amplitudes();
        phi = StateVector(scratch);
    }
    return run;
}

}  // namespace kerrchaos
