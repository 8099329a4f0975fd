#pragma once

// Kicked Kerr oscillator quantum map and its perturbed twin.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kerrchaos/hilbert.hpp"
#include "kerrchaos/series.hpp"

namespace kerrchaos {

struct VacuumStart {};

struct CoherentStart {
    cplx alpha{0.0, 0.0};
};

using InitialState = std::variant<VacuumStart, CoherentStart>;

// Normalization of the Kerr phase accumulated between kicks.
//   hamiltonian: exp(-i (chi/2) T n(n-1)), the propagator of (chi/2) a+^2 a^2
//   literal:     exp(-i chi T n(n-1))
enum class KerrPhase { hamiltonian, literal };

struct ModelParams {
    double chi = 1.0;
    double period = 3.14159265358979323846;
    double epsilon = 0.1;
    double delta_epsilon = 0.001;
    std::size_t dim = 128;
    std::size_t n_pulses = 10000;
    InitialState initial = VacuumStart{};
    KerrPhase kerr_phase = KerrPhase::hamiltonian;

    /// Throws ContractViolationError naming the offending field. Returns
    /// advisory warnings (currently: large delta_epsilon).
    std::vector<std::string> validate() const;
};

StateVector initial_state(const ModelParams& params);

UnitaryOperator kerr_unitary(const ModelParams& params);

UnitaryOperator kick_unitary(double strength, std::size_t dim);

/// u_nl * (u_k * psi): the kick acts first.
StateVector step(const StateVector& psi, const UnitaryOperator& u_nl, const UnitaryOperator& u_k);

// Population held by the top ceil(dim/10) Fock levels.
double top_band_population(const StateVector& psi);

inline constexpr double kLeakageThreshold = 1e-8;

struct LeakageReport {
    bool tripped = false;
    double max_population = 0.0;
    std::optional<std::size_t> first_step;  // first n where the guard tripped

    void observe(std::size_t n, double population);
};

/// States are stored at n = 0, stride, 2*stride, ... (stride 1 keeps all).
struct TrajectoryPair {
    std::vector<StateVector> unperturbed;
    std::vector<StateVector> perturbed;
    ModelParams params;
    std::size_t stride = 1;
    LeakageReport leakage;
};

TrajectoryPair evolve_pair(const ModelParams& params, std::size_t stride = 1);

enum class IndicatorKind { k1, k2, kld, kq, fidelity };

struct Indicator {
    IndicatorKind kind = IndicatorKind::k1;
    double q = 0.5;  // used by kq only
};

std::string to_string(IndicatorKind kind);
IndicatorKind parse_indicator(const std::string& name);

enum class EvaluationPath {
    pure_state,  // overlap arithmetic on state vectors
    dense,       // full density-matrix expressions
};

/// Evaluates the indicator between rho = |psi_u><psi_u| and sigma = |psi_p><psi_p|.
double indicator_value(const StateVector& unperturbed, const StateVector& perturbed,
                       const Indicator& indicator, EvaluationPath path);

/// Needs a pair stored with stride 1.
TimeSeries indicator_series(const TrajectoryPair& pair, const Indicator& indicator,
                            EvaluationPath path = EvaluationPath::pure_state);

struct IndicatorRun {
    TimeSeries series;
    LeakageReport leakage;
};

/// Evolves both trajectories and evaluates the indicator on the fly without
/// retaining states.
IndicatorRun run_indicator(const ModelParams& params, const Indicator& indicator,
                           EvaluationPath path = EvaluationPath::pure_state);

}  // namespace kerrchaos
