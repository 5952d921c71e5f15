#include "megt/error.hpp"
#include "megt/evolve.hpp"

#include <cmath>
#include <memory>

namespace megt {

namespace {

std::vector<double> lattice(double lo, double hi, int steps) {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        v[static_cast<std::size_t>(k)] = steps == 1 ? lo : lo + (hi - lo) * k / (steps - 1);
    }
    return v;
}

} // namespace

void TsGridSpec::validate() const {
    if (t_steps < 1 || s_steps < 1) throw ParameterError("grid needs at least one point per axis");
    if (!(t_min >= 0.0 && t_max <= 2.0 && t_min <= t_max)) {
        throw ParameterError("T range must lie within [0, 2]");
    }
    if (!(s_min >= -1.0 && s_max <= 1.0 && s_min <= s_max)) {
        throw ParameterError("S range must lie within [-1, 1]");
    }
}

std::vector<double> TsGridSpec::t_values() const { return lattice(t_min, t_max, t_steps); }
std::vector<double> TsGridSpec::s_values() const { return lattice(s_min, s_max, s_steps); }

std::vector<TsCell> sweep_ts(const TsGridSpec& grid, const MultiplexSpec& spec,
                             const SimulationConfig& base, int jobs) {
    grid.validate();
    spec.validate();
    base.validate();
    const auto ts = grid.t_values();
    const auto ss = grid.s_values();
    const std::size_t replicas = static_cast<std::size_t>(base.replicas);

    std::vector<std::unique_ptr<ReplicaNetwork>> networks(replicas);
    parallel_for(replicas, jobs, [&](std::size_t r) {
        networks[r] = std::make_unique<ReplicaNetwork>(
            build_multiplex(replica_network_spec(spec, base.rng_seed, static_cast<int>(r))));
    });

    const std::size_t cells = ts.size() * ss.size();
    std::vector<double> steady(cells * replicas);
    parallel_for(cells * replicas, jobs, [&](std::size_t task) {
        const std::size_t cell = task / replicas;
        const std::size_t r = task % replicas;
        SimulationConfig config = base;
        config.game = from_ts(ts[cell % ts.size()], ss[cell / ts.size()]);
        const auto seed = replica_dynamics_seed(base.rng_seed, cell, static_cast<int>(r));
        steady[task] = run(networks[r]->context, config, seed).trajectory.steady_rho;
    });

    std::vector<TsCell> out(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        double sum = 0.0;
        for (std::size_t r = 0; r < replicas; ++r) sum += steady[cell * replicas + r];
        const double mean = sum / static_cast<double>(replicas);
        double sq = 0.0;
        for (std::size_t r = 0; r < replicas; ++r) {
            const double d = steady[cell * replicas + r] - mean;
            sq += d * d;
        }
        auto& c = out[cell];
        c.temptation = ts[cell % ts.size()];
        c.sucker = ss[cell / ts.size()];
        c.rho_mean = mean;
        c.rho_std = replicas > 1 ? std::sqrt(sq / static_cast<double>(replicas - 1)) : 0.0;
        c.replicas = static_cast<int>(replicas);
    }
    return out;
}

} // namespace megt
