#pragma once

#include "megt/games.hpp"
#include "megt/netgen.hpp"

#include <Eigen/Core>

#include <string_view>
#include <vector>

namespace megt {

/// How per-layer strategies are projected onto one strategy per node for the
/// local Nash analysis.
enum class NashProjection {
    MajorityTieC,  // majority across layers, ties -> C
    MajorityTieD,  // majority across layers, ties -> D
    PerLayer,      // no projection: every layer is analysed on its own graph
};

std::string_view to_string(NashProjection p);
NashProjection parse_nash_projection(std::string_view name);

enum class BestResponse { Cooperate, Defect, Both };

struct LocalState {
    double xi = 0.0;     // homophily-weighted local cooperator frequency
    double delta = 0.0;  // (S - P) + (R - T + P - S) xi
    BestResponse best = BestResponse::Both;
};

struct PairVerdict {
    bool nash = false;
    bool weak = false;
};

struct NashReport {
    double alpha = 0.0;
    std::size_t n_pairs = 0;  // weak pairs included
    std::size_t n_weak = 0;
    std::size_t n_edges = 0;
    double weak_fraction = 0.0;
    std::vector<double> per_round;
    std::vector<double> per_round_weak;
};

/// best = C if delta > 0, D if delta < 0, Both otherwise.
LocalState best_response_for(double xi, const PayoffMatrix& game);

bool plays_best_response(Strategy s, BestResponse best);

/// One graph with one strategy per node: the aggregated graph with the
/// projected strategies, or a single layer under PerLayer.
class LocalGameView {
public:
    /// `z` holds h_ij on edges and 0 elsewhere; `adjacency` is 0/1.
    LocalGameView(Eigen::MatrixXd z, const Eigen::MatrixXd& adjacency, std::vector<Strategy> strategies);

    int nodes() const { return static_cast<int>(strategies_.size()); }
    int degree(int i) const { return static_cast<int>(neighbours_[static_cast<std::size_t>(i)].size()); }
    Strategy strategy(int i) const { return strategies_[static_cast<std::size_t>(i)]; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    /// Xi_i = sum_j Z_ij [S_j = C] / k_i. Throws ParameterError for isolated nodes.
    double local_frequency(int i) const;
    LocalState best_response(int i, const PayoffMatrix& game) const;
    PairVerdict is_nash_pair(int i, int j, const PayoffMatrix& game) const;

private:
    Eigen::MatrixXd z_;
    std::vector<Strategy> strategies_;
    std::vector<std::vector<int>> neighbours_;
    std::vector<std::pair<int, int>> edges_;  // i < j
};

/// Majority across layers per node.
std::vector<Strategy> project_strategies(const StrategyTable& strategies, NashProjection projection);

/// Views to analyse: one aggregated view, or one per layer under PerLayer.
std::vector<LocalGameView> local_game_views(const StrategyTable& strategies, const MultiplexNetwork& net,
                                            NashProjection projection);

// Free-function forms over the aggregated view.
double local_frequency(int i, const StrategyTable& strategies, const MultiplexNetwork& net,
                       NashProjection projection = NashProjection::MajorityTieC);
LocalState best_response(int i, const StrategyTable& strategies, const MultiplexNetwork& net,
                         const PayoffMatrix& game,
                         NashProjection projection = NashProjection::MajorityTieC);
PairVerdict is_nash_pair(int i, int j, const StrategyTable& strategies, const MultiplexNetwork& net,
                         const PayoffMatrix& game,
                         NashProjection projection = NashProjection::MajorityTieC);

/// alpha = N_p / E over the aggregated edges (each multiplex link counted
/// once). Throws ParameterError on an edgeless graph.
NashReport nash_pair_density(const StrategyTable& strategies, const MultiplexNetwork& net,
                             const PayoffMatrix& game,
                             NashProjection projection = NashProjection::MajorityTieC);

/// Accumulates alpha(n) when used as a round observer.
class NashTracker {
public:
    NashTracker(const MultiplexNetwork& net, PayoffMatrix game, NashProjection projection)
        : net_(&net), game_(game), projection_(projection) {}

    void observe(const StrategyTable& strategies);
    const NashReport& report() const { return report_; }

private:
    const MultiplexNetwork* net_;
    PayoffMatrix game_;
    NashProjection projection_;
    NashReport report_;
};

/// First window of at least `min_length` consecutive values whose spread
/// (max - min) is below `flatness` and whose values all sit at least `gap`
/// below the final value. Returns the start index, or -1.
long find_plateau_below_final(const std::vector<double>& series, std::size_t min_length,
                              double flatness, double gap);

} // namespace megt
