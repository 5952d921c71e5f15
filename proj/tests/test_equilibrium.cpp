#include "megt/equilibrium.hpp"
#include "megt/error.hpp"

#include <doctest.h>

using namespace megt;

namespace {

const PayoffMatrix kHG{1.0, 0.5, 0.5, 0.0};
const PayoffMatrix kPD{1.0, -0.5, 1.5, 0.0};

Eigen::MatrixXd clique(int n) {
    return Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
}

MultiplexNetwork single_layer(const Eigen::MatrixXd& a, const Eigen::MatrixXd& delta) {
    return assemble_multiplex({a}, delta, 1.0);
}

} // namespace

TEST_CASE("local cooperator frequency") {
    // Node 0 joined to 1 and 2; h(0,1) = 0.5, h(0,2) = 1.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = a(1, 0) = a(0, 2) = a(2, 0) = 1.0;
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(3, 3);
    delta(0, 1) = delta(1, 0) = 1.0;
    const auto net = single_layer(a, delta);

    StrategyTable s(3, 1, Strategy::Defect);
    CHECK(local_frequency(0, s, net) == 0.0);
    s(1, 0) = Strategy::Cooperate;
    CHECK(local_frequency(0, s, net) == doctest::Approx(0.25));

    const auto all_one = single_layer(a, Eigen::MatrixXd::Zero(3, 3));
    s.fill(Strategy::Cooperate);
    CHECK(local_frequency(0, s, all_one) == doctest::Approx(1.0));

    Eigen::MatrixXd iso = Eigen::MatrixXd::Zero(3, 3);
    iso(0, 1) = iso(1, 0) = 1.0;
    CHECK_THROWS_AS(local_frequency(2, s, single_layer(iso, Eigen::MatrixXd::Zero(3, 3))), ParameterError);
}

TEST_CASE("best responses") {
    const auto hg = best_response_for(1.0, kHG);
    CHECK(hg.delta == doctest::Approx(0.5));
    CHECK(hg.best == BestResponse::Cooperate);

    const auto pd = best_response_for(0.0, kPD);
    CHECK(pd.delta == doctest::Approx(-0.5));
    CHECK(pd.best == BestResponse::Defect);

    // SD with S - P = 0.5 and R - T + P - S = -1: indifferent at xi = 0.5.
    const auto sd = best_response_for(0.5, from_ts(1.5, 0.5));
    CHECK(sd.delta == 0.0);
    CHECK(sd.best == BestResponse::Both);
    CHECK(plays_best_response(Strategy::Defect, BestResponse::Both));
    CHECK(plays_best_response(Strategy::Cooperate, BestResponse::Both));
}

TEST_CASE("Nash pairs") {
    Eigen::MatrixXd pair = Eigen::MatrixXd::Zero(2, 2);
    pair(0, 1) = pair(1, 0) = 1.0;
    const auto net = single_layer(pair, Eigen::MatrixXd::Zero(2, 2));
    const StrategyTable dd(2, 1, Strategy::Defect);
    const auto v = is_nash_pair(0, 1, dd, net, kPD);
    CHECK(v.nash);
    CHECK_FALSE(v.weak);

    // i plays D (best), j plays C but its best response is D.
    StrategyTable dc(2, 1, Strategy::Defect);
    dc(1, 0) = Strategy::Cooperate;
    CHECK_FALSE(is_nash_pair(0, 1, dc, net, kPD).nash);

    const auto k5 = single_layer(clique(5), Eigen::MatrixXd::Zero(5, 5));
    const StrategyTable cc(5, 1, Strategy::Cooperate);
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) CHECK(is_nash_pair(i, j, cc, k5, kHG).nash);
    }
}

TEST_CASE("Nash-pair density") {
    const auto k5 = single_layer(clique(5), Eigen::MatrixXd::Zero(5, 5));
    const StrategyTable cc(5, 1, Strategy::Cooperate);
    CHECK(nash_pair_density(cc, k5, kHG).alpha == 1.0);
    CHECK(nash_pair_density(cc, k5, kPD).alpha == 0.0);

    // Two disjoint edges: one DD (Nash in PD), one CC (not Nash).
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
    a(0, 1) = a(1, 0) = a(2, 3) = a(3, 2) = 1.0;
    const auto net = single_layer(a, Eigen::MatrixXd::Zero(4, 4));
    StrategyTable s(4, 1, Strategy::Defect);
    s(2, 0) = s(3, 0) = Strategy::Cooperate;
    const auto r = nash_pair_density(s, net, kPD);
    CHECK(r.alpha == 0.5);
    CHECK(r.n_pairs == 1);
    CHECK(r.n_edges == 2);

    CHECK_THROWS_AS(nash_pair_density(StrategyTable(3, 1), single_layer(Eigen::MatrixXd::Zero(3, 3),
                                                                        Eigen::MatrixXd::Zero(3, 3)),
                                      kPD),
                    ParameterError);
}

TEST_CASE("weak pairs are counted and flagged") {
    // SD at the indifference point: a star centre with one C of two leaves.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = a(1, 0) = a(0, 2) = a(2, 0) = 1.0;
    const auto net = single_layer(a, Eigen::MatrixXd::Zero(3, 3));
    StrategyTable s(3, 1, Strategy::Defect);
    s(1, 0) = Strategy::Cooperate;
    const auto r = nash_pair_density(s, net, from_ts(1.5, 0.5));
    CHECK(r.n_weak >= 1);
    CHECK(r.weak_fraction > 0.0);
}

TEST_CASE("layer projection") {
    StrategyTable s(2, 2, Strategy::Defect);
    s(0, 0) = Strategy::Cooperate;  // node 0 tied
    s(1, 0) = s(1, 1) = Strategy::Cooperate;
    const auto tie_c = project_strategies(s, NashProjection::MajorityTieC);
    const auto tie_d = project_strategies(s, NashProjection::MajorityTieD);
    CHECK(tie_c[0] == Strategy::Cooperate);
    CHECK(tie_d[0] == Strategy::Defect);
    CHECK(tie_c[1] == Strategy::Cooperate);

    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2, 2);
    e(0, 1) = e(1, 0) = 1.0;
    const auto net = assemble_multiplex({e, e}, Eigen::MatrixXd::Zero(2, 2), 1.0);
    CHECK(local_game_views(s, net, NashProjection::PerLayer).size() == 2);
    CHECK(nash_pair_density(s, net, kPD, NashProjection::PerLayer).n_edges == 2);
    CHECK(nash_pair_density(s, net, kPD).n_edges == 1);
    CHECK(parse_nash_projection("per_layer") == NashProjection::PerLayer);
}

TEST_CASE("tracker records one value per observation") {
    const auto k4 = single_layer(clique(4), Eigen::MatrixXd::Zero(4, 4));
    NashTracker tracker(k4, kHG, NashProjection::MajorityTieC);
    tracker.observe(StrategyTable(4, 1, Strategy::Cooperate));
    tracker.observe(StrategyTable(4, 1, Strategy::Defect));
    CHECK(tracker.report().per_round == std::vector<double>{1.0, 0.0});
    CHECK(tracker.report().alpha == 0.0);
}

TEST_CASE("plateau detection") {
    std::vector<double> series(300, 0.8);
    for (std::size_t i = 50; i < 150; ++i) series[i] = 0.5;
    CHECK(find_plateau_below_final(series, 50, 0.02, 0.05) == 50);
    CHECK(find_plateau_below_final(series, 120, 0.02, 0.05) == -1);
    CHECK(find_plateau_below_final(std::vector<double>(100, 0.8), 50, 0.02, 0.05) == -1);
}
