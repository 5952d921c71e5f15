#pragma once

#include "megt/evolve.hpp"
#include "megt/netgen.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <span>

namespace megt {

// Missing values (isolated nodes) are quiet NaNs throughout.

/// gamma_i = NC_i / (rounds * N_nb,i), NaN where N_nb,i = 0.
Eigen::VectorXd social_honesty(std::span<const std::int64_t> coop_counts,
                               std::span<const int> neighbour_counts, int rounds);

/// Uses the state's counters and the summed layer degrees of the network.
Eigen::VectorXd social_honesty(const SimulationState& state, const MultiplexNetwork& net);

/// Mean of the defined entries. Throws ParameterError when none is defined.
double qoi(const Eigen::VectorXd& gamma);

struct Reputation {
    Eigen::VectorXd values;
    bool all_defectors = false;  // qoi == 0; values are then 0
};

/// R_i = gamma_i / QoI.
Reputation behavioural_reputation(const Eigen::VectorXd& gamma, double qoi);

struct BehaviourStats {
    Eigen::VectorXd gamma;
    double qoi = 0.0;
    Reputation reputation;
};

BehaviourStats behaviour_stats(const SimulationState& state, const MultiplexNetwork& net);

} // namespace megt
