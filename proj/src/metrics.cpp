#include "megt/metrics.hpp"

#include "megt/error.hpp"

#include <limits>

namespace megt {

Eigen::VectorXd social_honesty(std::span<const std::int64_t> coop_counts,
                               std::span<const int> neighbour_counts, int rounds) {
    if (rounds < 1) throw ParameterError("social honesty needs at least one round");
    if (coop_counts.size() != neighbour_counts.size()) throw ParameterError("counter size mismatch");
    Eigen::VectorXd gamma(static_cast<Eigen::Index>(coop_counts.size()));
    for (std::size_t i = 0; i < coop_counts.size(); ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        gamma(idx) = neighbour_counts[i] > 0
                         ? static_cast<double>(coop_counts[i]) /
                               (static_cast<double>(rounds) * neighbour_counts[i])
                         : std::numeric_limits<double>::quiet_NaN();
    }
    return gamma;
}

Eigen::VectorXd social_honesty(const SimulationState& state, const MultiplexNetwork& net) {
    std::vector<int> nb(static_cast<std::size_t>(net.node_count()));
    for (int i = 0; i < net.node_count(); ++i) nb[static_cast<std::size_t>(i)] = net.multiplex_degree(i);
    return social_honesty(state.coop_count, nb, state.round);
}

double qoi(const Eigen::VectorXd& gamma) {
    double sum = 0.0;
    Eigen::Index defined = 0;
    for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        if (std::isnan(gamma(i))) continue;
        sum += gamma(i);
        ++defined;
    }
    if (defined == 0) throw ParameterError("QoI needs at least one defined social-honesty value");
    return sum / static_cast<double>(defined);
}

Reputation behavioural_reputation(const Eigen::VectorXd& gamma, double qoi_value) {
    Reputation r;
    if (qoi_value > 0.0) {
        r.values = gamma / qoi_value;
    } else {
        r.all_defectors = true;
        r.values = gamma.unaryExpr([](double g) {
            return std::isnan(g) ? g : 0.0;
        });
    }
    return r;
}

BehaviourStats behaviour_stats(const SimulationState& state, const MultiplexNetwork& net) {
    BehaviourStats s;
    s.gamma = social_honesty(state, net);
    s.qoi = qoi(s.gamma);
    s.reputation = behavioural_reputation(s.gamma, s.qoi);
    return s;
}

} // namespace megt
