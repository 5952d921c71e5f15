#include "megt/equilibrium.hpp"

#include "megt/error.hpp"

#include <algorithm>
#include <string>

namespace megt {

std::string_view to_string(NashProjection p) {
    switch (p) {
    case NashProjection::MajorityTieC: return "majority_tie_c";
    case NashProjection::MajorityTieD: return "majority_tie_d";
    case NashProjection::PerLayer: return "per_layer";
    }
    return "?";
}

NashProjection parse_nash_projection(std::string_view name) {
    if (name == "majority_tie_c") return NashProjection::MajorityTieC;
    if (name == "majority_tie_d") return NashProjection::MajorityTieD;
    if (name == "per_layer") return NashProjection::PerLayer;
    throw ParameterError("nash projection must be majority_tie_c, majority_tie_d or per_layer");
}

LocalState best_response_for(double xi, const PayoffMatrix& g) {
    LocalState s;
    s.xi = xi;
    s.delta = (g.sucker - g.punishment) +
              (g.reward - g.temptation + g.punishment - g.sucker) * xi;
    s.best = s.delta > 0.0 ? BestResponse::Cooperate
           : s.delta < 0.0 ? BestResponse::Defect
                           : BestResponse::Both;
    return s;
}

bool plays_best_response(Strategy s, BestResponse best) {
    switch (best) {
    case BestResponse::Both: return true;
    case BestResponse::Cooperate: return cooperates(s);
    case BestResponse::Defect: return !cooperates(s);
    }
    return false;
}

LocalGameView::LocalGameView(Eigen::MatrixXd z, const Eigen::MatrixXd& adjacency,
                             std::vector<Strategy> strategies)
    : z_(std::move(z)), strategies_(std::move(strategies)) {
    const int n = static_cast<int>(strategies_.size());
    if (z_.rows() != n || adjacency.rows() != n) throw ParameterError("view size mismatch");
    neighbours_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (adjacency(i, j) == 0.0) continue;
            neighbours_[static_cast<std::size_t>(i)].push_back(j);
            if (i < j) edges_.emplace_back(i, j);
        }
    }
}

double LocalGameView::local_frequency(int i) const {
    const auto& nb = neighbours_[static_cast<std::size_t>(i)];
    if (nb.empty()) throw ParameterError("local frequency is undefined for isolated node " + std::to_string(i));
    double sum = 0.0;
    for (int j : nb) {
        if (cooperates(strategy(j))) sum += z_(i, j);
    }
    return sum / static_cast<double>(nb.size());
}

LocalState LocalGameView::best_response(int i, const PayoffMatrix& game) const {
    return best_response_for(local_frequency(i), game);
}

PairVerdict LocalGameView::is_nash_pair(int i, int j, const PayoffMatrix& game) const {
    const auto bi = best_response(i, game);
    const auto bj = best_response(j, game);
    PairVerdict v;
    v.nash = plays_best_response(strategy(i), bi.best) && plays_best_response(strategy(j), bj.best);
    v.weak = v.nash && (bi.best == BestResponse::Both || bj.best == BestResponse::Both);
    return v;
}

std::vector<Strategy> project_strategies(const StrategyTable& strategies, NashProjection projection) {
    std::vector<Strategy> out(static_cast<std::size_t>(strategies.nodes()));
    for (int i = 0; i < strategies.nodes(); ++i) {
        int c = 0;
        for (int l = 0; l < strategies.layers(); ++l) c += cooperates(strategies(i, l)) ? 1 : 0;
        const int d = strategies.layers() - c;
        const bool tie_c = projection != NashProjection::MajorityTieD;
        const bool coop = c > d || (c == d && tie_c);
        out[static_cast<std::size_t>(i)] = coop ? Strategy::Cooperate : Strategy::Defect;
    }
    return out;
}

std::vector<LocalGameView> local_game_views(const StrategyTable& strategies, const MultiplexNetwork& net,
                                            NashProjection projection) {
    std::vector<LocalGameView> views;
    if (projection == NashProjection::PerLayer) {
        for (int l = 0; l < net.layer_count(); ++l) {
            std::vector<Strategy> layer(static_cast<std::size_t>(net.node_count()));
            for (int i = 0; i < net.node_count(); ++i) layer[static_cast<std::size_t>(i)] = strategies(i, l);
            views.emplace_back(net.z_layers[static_cast<std::size_t>(l)],
                               net.adjacency[static_cast<std::size_t>(l)], std::move(layer));
        }
    } else {
        views.emplace_back(net.homophily.cwiseProduct(net.aggregated), net.aggregated,
                           project_strategies(strategies, projection));
    }
    return views;
}

namespace {

LocalGameView aggregated_view(const StrategyTable& strategies, const MultiplexNetwork& net,
                              NashProjection projection) {
    if (projection == NashProjection::PerLayer) {
        throw ParameterError("per-layer projection has no single aggregated view");
    }
    return std::move(local_game_views(strategies, net, projection).front());
}

} // namespace

double local_frequency(int i, const StrategyTable& strategies, const MultiplexNetwork& net,
                       NashProjection projection) {
    return aggregated_view(strategies, net, projection).local_frequency(i);
}

LocalState best_response(int i, const StrategyTable& strategies, const MultiplexNetwork& net,
                         const PayoffMatrix& game, NashProjection projection) {
    return aggregated_view(strategies, net, projection).best_response(i, game);
}

PairVerdict is_nash_pair(int i, int j, const StrategyTable& strategies, const MultiplexNetwork& net,
                         const PayoffMatrix& game, NashProjection projection) {
    const auto view = aggregated_view(strategies, net, projection);
    if (net.aggregated(i, j) == 0.0) throw ParameterError("no aggregated edge between the nodes");
    return view.is_nash_pair(i, j, game);
}

NashReport nash_pair_density(const StrategyTable& strategies, const MultiplexNetwork& net,
                             const PayoffMatrix& game, NashProjection projection) {
    NashReport report;
    for (const auto& view : local_game_views(strategies, net, projection)) {
        std::vector<LocalState> local(static_cast<std::size_t>(view.nodes()));
        for (int i = 0; i < view.nodes(); ++i) {
            if (view.degree(i) > 0) local[static_cast<std::size_t>(i)] = view.best_response(i, game);
        }
        for (const auto& [i, j] : view.edges()) {
            const auto& bi = local[static_cast<std::size_t>(i)];
            const auto& bj = local[static_cast<std::size_t>(j)];
            ++report.n_edges;
            if (plays_best_response(view.strategy(i), bi.best) &&
                plays_best_response(view.strategy(j), bj.best)) {
                ++report.n_pairs;
                if (bi.best == BestResponse::Both || bj.best == BestResponse::Both) ++report.n_weak;
            }
        }
    }
    if (report.n_edges == 0) throw ParameterError("Nash-pair density needs at least one edge");
    report.alpha = static_cast<double>(report.n_pairs) / static_cast<double>(report.n_edges);
    report.weak_fraction = static_cast<double>(report.n_weak) / static_cast<double>(report.n_edges);
    return report;
}

void NashTracker::observe(const StrategyTable& strategies) {
    auto now = nash_pair_density(strategies, *net_, game_, projection_);
    now.per_round = std::move(report_.per_round);
    now.per_round_weak = std::move(report_.per_round_weak);
    now.per_round.push_back(now.alpha);
    now.per_round_weak.push_back(now.weak_fraction);
    report_ = std::move(now);
}

long find_plateau_below_final(const std::vector<double>& series, std::size_t min_length,
                              double flatness, double gap) {
    if (series.size() < min_length || min_length == 0) return -1;
    const double final_value = series.back();
    for (std::size_t start = 0; start + min_length <= series.size(); ++start) {
        const auto first = series.begin() + static_cast<std::ptrdiff_t>(start);
        const auto last = first + static_cast<std::ptrdiff_t>(min_length);
        const auto [lo, hi] = std::minmax_element(first, last);
        if (*hi - *lo >= flatness) continue;
        if (*hi <= final_value - gap) return static_cast<long>(start);
    }
    return -1;
}

} // namespace megt
