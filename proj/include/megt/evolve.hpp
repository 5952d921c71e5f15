#pragma once

#include "megt/comm.hpp"
#include "megt/games.hpp"
#include "megt/netgen.hpp"
#include "megt/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace megt {

enum class PayoffWeighting { Weighted, Binary };

std::string_view to_string(PayoffWeighting w);
PayoffWeighting parse_payoff_weighting(std::string_view name);

/// Guards the Fermi exponent against zero homophily distance.
inline constexpr double kDeltaFloor = 1e-6;

struct SimulationConfig {
    PayoffMatrix game = from_ts(0.5, 0.5);
    double selection_intensity = 0.1;  // K
    EtaBounds eta_bounds;
    double initial_coop_fraction = 0.5;
    int max_rounds = 5000;
    int steady_window = 200;
    double steady_tolerance = 1e-3;
    int replicas = 1;
    std::uint64_t rng_seed = 0;
    PayoffWeighting payoff_weighting = PayoffWeighting::Weighted;

    void validate() const;
};

struct SimulationState {
    StrategyTable strategies;
    Eigen::MatrixXd payoffs;                // nodes x layers, overwritten every round
    int round = 0;
    std::vector<std::int64_t> coop_count;   // per node, cumulative
    Rng rng;

    int nodes() const { return strategies.nodes(); }
    int layers() const { return strategies.layers(); }
};

struct Trajectory {
    std::vector<double> rho;  // rho[0] is the initial state, rho[n] follows round n
    double steady_rho = 0.0;
    bool converged = false;
};

struct RunResult {
    Trajectory trajectory;
    SimulationState final_state;
};

/// Fraction of (node, layer) slots playing C.
double density(const StrategyTable& strategies);
inline double density(const SimulationState& state) { return density(state.strategies); }

/// Each slot independently C with probability initial_coop_fraction.
SimulationState init(const SimulationConfig& config, int nodes, int layers, std::uint64_t seed);

/// payoff_i^alpha = sum over neighbours j on alpha of w_ij^alpha * row_payoff(S_i, S_j),
/// with w = 1 under binary weighting.
void accumulate_payoffs(SimulationState& state, const MultiplexNetwork& net,
                        const PayoffMatrix& game,
                        PayoffWeighting weighting = PayoffWeighting::Weighted);

/// eta_i / (1 + exp((P_i - P_j) / (max(delta_ij, floor) K)))
inline double fermi_probability(double payoff_i, double payoff_j, double delta_ij,
                                double selection_intensity, double eta_i) {
    const double scale = std::max(delta_ij, kDeltaFloor) * selection_intensity;
    return eta_i / (1.0 + std::exp((payoff_i - payoff_j) / scale));
}

/// Everything a run needs that is fixed per network.
struct EvolutionContext {
    const MultiplexNetwork* network = nullptr;
    CrossLayerNeighbourhood cross_layer;
    std::vector<std::pair<int, int>> active_slots;  // (node, layer) with degree > 0

    EvolutionContext(const MultiplexNetwork& net, const Communicability& comm);
};

/// One round: payoffs, N*M asynchronous imitation steps, cooperation counters.
void mc_round(SimulationState& state, const EvolutionContext& ctx, const SimulationConfig& config);

/// Sliding-window steady-state test: the means of the last two disjoint
/// windows of `window` values differ by less than `tolerance`.
bool is_steady(const std::vector<double>& rho, int window, double tolerance);

using RoundObserver = std::function<void(const SimulationState&)>;

/// Iterates mc_round until steady or max_rounds. The observer, if any, sees
/// the initial state and the state after every round.
RunResult run(const EvolutionContext& ctx, const SimulationConfig& config, std::uint64_t seed,
              const RoundObserver& observer = {});

/// Builds the network and its communicability, then runs.
RunResult run(const MultiplexSpec& spec, const SimulationConfig& config);

// ---------------------------------------------------------------------------
// Replicas and T-S sweeps
// ---------------------------------------------------------------------------

/// Network and communicability for one replica index.
struct ReplicaNetwork {
    MultiplexNetwork network;
    Communicability communicability;
    EvolutionContext context;

    explicit ReplicaNetwork(MultiplexNetwork net);
    ReplicaNetwork(const ReplicaNetwork&) = delete;  // context points into network
    ReplicaNetwork& operator=(const ReplicaNetwork&) = delete;
};

/// Network spec for replica r: same structure, seed derived from the master.
MultiplexSpec replica_network_spec(const MultiplexSpec& spec, std::uint64_t master_seed, int replica);

/// Dynamics seed for (cell, replica).
std::uint64_t replica_dynamics_seed(std::uint64_t master_seed, std::uint64_t cell, int replica);

/// Runs `config.replicas` independent replicas, each on its own network
/// realization; results are ordered by replica index.
std::vector<RunResult> run_replicas(const MultiplexSpec& spec, const SimulationConfig& config,
                                    int jobs = 1);

struct TsGridSpec {
    double t_min = 0.0, t_max = 2.0;
    int t_steps = 21;
    double s_min = -1.0, s_max = 1.0;
    int s_steps = 21;

    void validate() const;
    std::vector<double> t_values() const;
    std::vector<double> s_values() const;
};

struct TsCell {
    double temptation = 0.0;
    double sucker = 0.0;
    double rho_mean = 0.0;
    double rho_std = 0.0;
    int replicas = 0;
};

/// Row-major over S (outer, ascending) then T (inner, ascending). Replica r
/// uses the same network realization in every cell.
std::vector<TsCell> sweep_ts(const TsGridSpec& grid, const MultiplexSpec& spec,
                             const SimulationConfig& base, int jobs = 1);

/// Runs fn(0..count-1) on up to `jobs` threads. Each index is visited once;
/// callers write results by index so completion order never matters.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

} // namespace megt
