#include "megt/evolve.hpp"

#include "megt/error.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace megt {

std::string_view to_string(PayoffWeighting w) {
    return w == PayoffWeighting::Weighted ? "weighted" : "binary";
}

PayoffWeighting parse_payoff_weighting(std::string_view name) {
    if (name == "weighted") return PayoffWeighting::Weighted;
    if (name == "binary") return PayoffWeighting::Binary;
    throw ParameterError("payoff weighting must be 'weighted' or 'binary'");
}

void SimulationConfig::validate() const {
    if (!(selection_intensity > 0.0)) throw ParameterError("selection intensity K must be > 0");
    eta_bounds.validate();
    if (!(initial_coop_fraction >= 0.0 && initial_coop_fraction <= 1.0)) {
        throw ParameterError("initial cooperator fraction must lie in [0, 1]");
    }
    if (steady_window < 1) throw ParameterError("steady window must be >= 1");
    if (max_rounds < steady_window) throw ParameterError("max rounds must be >= steady window");
    if (!(steady_tolerance >= 0.0)) throw ParameterError("steady tolerance must be >= 0");
    if (replicas < 1) throw ParameterError("replicas must be >= 1");
    for (double v : {game.reward, game.sucker, game.temptation, game.punishment}) {
        if (!std::isfinite(v)) throw ParameterError("payoffs must be finite");
    }
}

double density(const StrategyTable& strategies) {
    if (strategies.size() == 0) return 0.0;
    return static_cast<double>(strategies.cooperator_count()) / static_cast<double>(strategies.size());
}

SimulationState init(const SimulationConfig& config, int nodes, int layers, std::uint64_t seed) {
    SimulationState state;
    state.rng.seed(seed);
    state.strategies = StrategyTable(nodes, layers);
    std::bernoulli_distribution coin(config.initial_coop_fraction);
    for (int i = 0; i < nodes; ++i) {
        for (int l = 0; l < layers; ++l) {
            state.strategies(i, l) = coin(state.rng) ? Strategy::Cooperate : Strategy::Defect;
        }
    }
    state.payoffs = Eigen::MatrixXd::Zero(nodes, layers);
    state.coop_count.assign(static_cast<std::size_t>(nodes), 0);
    return state;
}

void accumulate_payoffs(SimulationState& state, const MultiplexNetwork& net, const PayoffMatrix& game,
                        PayoffWeighting weighting) {
    const int n = net.node_count();
    const int m = net.layer_count();
    state.payoffs.setZero(n, m);
    for (int l = 0; l < m; ++l) {
        const auto& w = net.weights[static_cast<std::size_t>(l)];
        for (int i = 0; i < n; ++i) {
            const Strategy si = state.strategies(i, l);
            double total = 0.0;
            for (int j : net.neighbours_of(l, i)) {
                const double weight = weighting == PayoffWeighting::Weighted ? w(i, j) : 1.0;
                total += weight * row_payoff(si, state.strategies(j, l), game);
            }
            state.payoffs(i, l) = total;
        }
    }
}

EvolutionContext::EvolutionContext(const MultiplexNetwork& net, const Communicability& comm)
    : network(&net), cross_layer(net, comm) {
    for (int i = 0; i < net.node_count(); ++i) {
        for (int l = 0; l < net.layer_count(); ++l) {
            if (net.degree(l, i) > 0) active_slots.emplace_back(i, l);
        }
    }
}

void mc_round(SimulationState& state, const EvolutionContext& ctx, const SimulationConfig& config) {
    const MultiplexNetwork& net = *ctx.network;
    accumulate_payoffs(state, net, config.game, config.payoff_weighting);

    const std::size_t coop = state.strategies.cooperator_count();
    const bool absorbed = coop == 0 || coop == state.strategies.size();
    if (!absorbed && !ctx.active_slots.empty()) {
        const std::size_t steps = state.strategies.size();
        for (std::size_t s = 0; s < steps; ++s) {
            const auto [i, layer] = ctx.active_slots[uniform_index(state.rng, ctx.active_slots.size())];
            const auto& nb = net.neighbours_of(layer, i);
            const int j = nb[uniform_index(state.rng, nb.size())];
            if (state.strategies(j, layer) == state.strategies(i, layer)) continue;
            const double eta_i = ctx.cross_layer.eta(layer, i, state.strategies, config.eta_bounds);
            const double w = fermi_probability(state.payoffs(i, layer), state.payoffs(j, layer),
                                               net.delta(i, j), config.selection_intensity, eta_i);
            if (uniform01(state.rng) < w) state.strategies(i, layer) = state.strategies(j, layer);
        }
    }

    for (int i = 0; i < state.nodes(); ++i) {
        for (int l = 0; l < state.layers(); ++l) {
            if (cooperates(state.strategies(i, l))) {
                state.coop_count[static_cast<std::size_t>(i)] += net.degree(l, i);
            }
        }
    }
    ++state.round;
}

bool is_steady(const std::vector<double>& rho, int window, double tolerance) {
    const auto w = static_cast<std::size_t>(window);
    if (w == 0 || rho.size() < 2 * w) return false;
    const auto end = rho.end();
    const double recent = std::accumulate(end - static_cast<std::ptrdiff_t>(w), end, 0.0) / window;
    const double before = std::accumulate(end - static_cast<std::ptrdiff_t>(2 * w),
                                          end - static_cast<std::ptrdiff_t>(w), 0.0) / window;
    return std::abs(recent - before) < tolerance;
}

RunResult run(const EvolutionContext& ctx, const SimulationConfig& config, std::uint64_t seed,
              const RoundObserver& observer) {
    config.validate();
    const MultiplexNetwork& net = *ctx.network;
    RunResult result{{}, init(config, net.node_count(), net.layer_count(), seed)};
    auto& state = result.final_state;
    auto& traj = result.trajectory;
    traj.rho.reserve(static_cast<std::size_t>(config.max_rounds) + 1);
    traj.rho.push_back(density(state));
    if (observer) observer(state);

    for (int r = 0; r < config.max_rounds; ++r) {
        mc_round(state, ctx, config);
        traj.rho.push_back(density(state));
        if (observer) observer(state);
        if (is_steady(traj.rho, config.steady_window, config.steady_tolerance)) {
            traj.converged = true;
            break;
        }
    }
    const auto tail = std::min(traj.rho.size(), static_cast<std::size_t>(config.steady_window));
    traj.steady_rho =
        std::accumulate(traj.rho.end() - static_cast<std::ptrdiff_t>(tail), traj.rho.end(), 0.0) /
        static_cast<double>(tail);
    return result;
}

RunResult run(const MultiplexSpec& spec, const SimulationConfig& config) {
    ReplicaNetwork replica(build_multiplex(spec));
    return run(replica.context, config, config.rng_seed);
}

ReplicaNetwork::ReplicaNetwork(MultiplexNetwork net)
    : network(std::move(net)),
      communicability(Communicability::of(network)),
      context(network, communicability) {}

MultiplexSpec replica_network_spec(const MultiplexSpec& spec, std::uint64_t master_seed, int replica) {
    MultiplexSpec out = spec;
    out.rng_seed = derive_seed(master_seed, {kStreamNetwork, static_cast<std::uint64_t>(replica)});
    return out;
}

std::uint64_t replica_dynamics_seed(std::uint64_t master_seed, std::uint64_t cell, int replica) {
    return derive_seed(master_seed, {kStreamDynamics, cell, static_cast<std::uint64_t>(replica)});
}

std::vector<RunResult> run_replicas(const MultiplexSpec& spec, const SimulationConfig& config, int jobs) {
    config.validate();
    spec.validate();
    std::vector<RunResult> results(static_cast<std::size_t>(config.replicas));
    parallel_for(results.size(), jobs, [&](std::size_t r) {
        const int replica = static_cast<int>(r);
        ReplicaNetwork net(build_multiplex(replica_network_spec(spec, config.rng_seed, replica)));
        results[r] = run(net.context, config, replica_dynamics_seed(config.rng_seed, 0, replica));
    });
    return results;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace megt
