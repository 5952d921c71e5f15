#include "megt/error.hpp"
#include "megt/evolve.hpp"

#include <doctest.h>

#include <cmath>

using namespace megt;

namespace {

MultiplexSpec sf_spec(int layers, std::uint64_t seed) {
    MultiplexSpec spec;
    spec.node_count = 200;
    spec.topologies.assign(static_cast<std::size_t>(layers), LayerTopology::scale_free(2));
    spec.rng_seed = seed;
    return spec;
}

Eigen::MatrixXd path3() {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = a(1, 0) = a(1, 2) = a(2, 1) = 1.0;
    return a;
}

} // namespace

TEST_CASE("initial strategies") {
    SimulationConfig c;
    c.initial_coop_fraction = 1.0;
    CHECK(density(init(c, 50, 2, 1)) == 1.0);
    c.initial_coop_fraction = 0.0;
    CHECK(density(init(c, 50, 2, 1)) == 0.0);
    c.initial_coop_fraction = 0.5;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const double rho = density(init(c, 200, 2, seed));
        CHECK(rho >= 0.4);
        CHECK(rho <= 0.6);
    }
    CHECK(init(c, 30, 2, 3).strategies == init(c, 30, 2, 3).strategies);
}

TEST_CASE("density") {
    StrategyTable t(2, 2);
    CHECK(density(t) == 0.0);
    t(0, 0) = t(1, 1) = Strategy::Cooperate;
    CHECK(density(t) == 0.5);
    t.fill(Strategy::Cooperate);
    CHECK(density(t) == 1.0);
}

TEST_CASE("payoff accumulation") {
    const PayoffMatrix pd{1.0, -0.5, 1.5, 0.0};
    SimulationConfig c;

    // Path 0-1-2 on one layer, unit weights via zero distance and equal-ish centrality
    // replaced by the binary weighting.
    auto net = assemble_multiplex({path3()}, Eigen::MatrixXd::Zero(3, 3), 1.0);
    SimulationState s = init(c, 3, 1, 1);
    s.strategies(0, 0) = Strategy::Cooperate;
    s.strategies(1, 0) = Strategy::Defect;
    s.strategies(2, 0) = Strategy::Cooperate;
    accumulate_payoffs(s, net, pd, PayoffWeighting::Binary);
    CHECK(s.payoffs(1, 0) == doctest::Approx(3.0));
    CHECK(s.payoffs(0, 0) == doctest::Approx(-0.5));

    // Weighted: centre has centrality 1, leaves 1/sqrt(2); h = 1.
    accumulate_payoffs(s, net, pd);
    const double w = 0.5 * (1.0 + 1.0 / std::sqrt(2.0));
    CHECK(s.payoffs(1, 0) == doctest::Approx(2.0 * w * 1.5).epsilon(1e-9));

    // Two connected cooperators with w = 1 and an isolated node.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = a(1, 0) = 1.0;
    auto pair = assemble_multiplex({a}, Eigen::MatrixXd::Zero(3, 3), 1.0);
    SimulationState t = init(c, 3, 1, 1);
    t.strategies.fill(Strategy::Cooperate);
    accumulate_payoffs(t, pair, pd);
    CHECK(t.payoffs(0, 0) == doctest::Approx(1.0));
    CHECK(t.payoffs(1, 0) == doctest::Approx(1.0));
    CHECK(t.payoffs(2, 0) == 0.0);
}

TEST_CASE("Fermi probability") {
    CHECK(fermi_probability(1.0, 1.0, 0.3, 0.1, 0.8) == 0.4);
    CHECK(fermi_probability(0.0, 1.0, 1.0, 0.1, 1.0) == doctest::Approx(1.0 / (1.0 + std::exp(-10.0))));
    CHECK(fermi_probability(0.0, 1.0, 1.0, 0.1, 1.0) == doctest::Approx(0.99995).epsilon(1e-5));
    CHECK(fermi_probability(1e6, 0.0, 1.0, 0.1, 1.0) == doctest::Approx(0.0));
    // Zero distance is floored instead of dividing by zero.
    CHECK(std::isfinite(fermi_probability(0.0, 1.0, 0.0, 0.1, 1.0)));
    CHECK(fermi_probability(1.0, 0.0, 0.0, 0.1, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("absorbing states") {
    auto spec = sf_spec(2, 3);
    spec.node_count = 60;
    ReplicaNetwork net(build_multiplex(spec));

    SimulationConfig c;
    c.game = from_ts(0.5, 0.5);
    c.initial_coop_fraction = 1.0;
    c.max_rounds = 50;
    c.steady_window = 10;
    const auto all_c = run(net.context, c, 1);
    CHECK(all_c.final_state.strategies == StrategyTable(60, 2, Strategy::Cooperate));
    CHECK(all_c.trajectory.steady_rho == 1.0);
    CHECK(all_c.trajectory.converged);

    c.initial_coop_fraction = 0.0;
    const auto all_d = run(net.context, c, 1);
    for (double rho : all_d.trajectory.rho) CHECK(rho == 0.0);
    CHECK(all_d.trajectory.steady_rho == 0.0);
}

TEST_CASE("runs are bit-reproducible under a fixed seed") {
    ReplicaNetwork net(build_multiplex(sf_spec(2, 5)));
    SimulationConfig c;
    c.game = pd_from_bc(1.5, 0.5);
    c.max_rounds = 2000;
    c.steady_window = 2000;
    const auto a = run(net.context, c, 77);
    const auto b = run(net.context, c, 77);
    CHECK(a.trajectory.rho.size() == 2001);
    CHECK(a.trajectory.rho == b.trajectory.rho);
    CHECK(a.final_state.coop_count == b.final_state.coop_count);
    const auto other = run(net.context, c, 78);
    CHECK(other.trajectory.rho != a.trajectory.rho);
}

TEST_CASE("steady-state detection") {
    std::vector<double> flat(400, 0.3);
    CHECK(is_steady(flat, 200, 1e-3));
    CHECK_FALSE(is_steady(std::vector<double>(399, 0.3), 200, 1e-3));
    std::vector<double> step(400, 0.3);
    for (std::size_t i = 200; i < 400; ++i) step[i] = 0.31;
    CHECK_FALSE(is_steady(step, 200, 1e-3));
    CHECK(is_steady(step, 200, 0.02));
}

TEST_CASE("non-convergence is reported, not thrown") {
    auto spec = sf_spec(2, 9);
    spec.node_count = 60;
    ReplicaNetwork net(build_multiplex(spec));
    SimulationConfig c;
    c.game = from_ts(1.5, 0.5);
    c.max_rounds = 20;
    c.steady_window = 20;
    c.steady_tolerance = 0.0;
    const auto r = run(net.context, c, 3);
    CHECK_FALSE(r.trajectory.converged);
    CHECK(r.trajectory.rho.size() == 21);
    CHECK(r.final_state.round == 20);
}

TEST_CASE("cooperation counters count degree-weighted C rounds") {
    auto spec = sf_spec(2, 4);
    spec.node_count = 40;
    ReplicaNetwork net(build_multiplex(spec));
    SimulationConfig c;
    c.initial_coop_fraction = 1.0;
    c.max_rounds = 30;
    c.steady_window = 30;
    const auto r = run(net.context, c, 1);
    for (int i = 0; i < 40; ++i) {
        CHECK(r.final_state.coop_count[static_cast<std::size_t>(i)] ==
              static_cast<std::int64_t>(net.network.multiplex_degree(i)) * r.final_state.round);
    }
}

TEST_CASE("HG drives SF multiplexes towards cooperation") {
    SimulationConfig c;
    c.game = from_ts(0.5, 0.5);
    c.replicas = 3;
    c.rng_seed = 21;
    // Defecting hubs can freeze in, so not every replica reaches rho = 1.
    for (const auto& r : run_replicas(sf_spec(2, 0), c, 3)) CHECK(r.trajectory.steady_rho >= 0.85);
}

TEST_CASE("replica results do not depend on the thread count") {
    auto spec = sf_spec(2, 0);
    spec.node_count = 80;
    SimulationConfig c;
    c.game = pd_from_bc(1.2, 0.2);
    c.replicas = 4;
    c.max_rounds = 300;
    c.rng_seed = 8;
    const auto serial = run_replicas(spec, c, 1);
    const auto threaded = run_replicas(spec, c, 4);
    for (std::size_t r = 0; r < serial.size(); ++r) {
        CHECK(serial[r].trajectory.rho == threaded[r].trajectory.rho);
    }
}

TEST_CASE("T-S sweep layout") {
    TsGridSpec grid{0.0, 0.9, 2, 0.1, 1.0, 3};
    const auto t = grid.t_values();
    const auto s = grid.s_values();
    CHECK(t == std::vector<double>{0.0, 0.9});
    CHECK(s.size() == 3);
    CHECK(s[1] == doctest::Approx(0.55));

    auto spec = sf_spec(2, 0);
    spec.node_count = 60;
    SimulationConfig c;
    c.replicas = 2;
    c.max_rounds = 400;
    c.rng_seed = 5;
    const auto cells = sweep_ts(grid, spec, c, 2);
    REQUIRE(cells.size() == 6);
    CHECK(cells[1].temptation == 0.9);
    CHECK(cells[1].sucker == doctest::Approx(0.1));
    CHECK(cells[2].temptation == 0.0);
    CHECK(cells[2].sucker == doctest::Approx(0.55));
    for (const auto& cell : cells) {
        CHECK(cell.replicas == 2);
        CHECK(cell.rho_mean >= 0.8);  // all cells are HG
    }
    CHECK(sweep_ts(grid, spec, c, 1)[4].rho_mean == cells[4].rho_mean);

    CHECK(TsGridSpec{}.t_values().size() * TsGridSpec{}.s_values().size() == 441);
    CHECK_THROWS_AS((TsGridSpec{0.0, 1.0, 0, 0.0, 1.0, 2}.validate()), ParameterError);
}

TEST_CASE("configuration validation") {
    SimulationConfig c;
    c.selection_intensity = 0.0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.initial_coop_fraction = 1.5;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.max_rounds = 10;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    CHECK(parse_payoff_weighting("binary") == PayoffWeighting::Binary);
    CHECK_THROWS_AS(parse_payoff_weighting("none"), ParameterError);
}

TEST_CASE("parallel_for visits each index once and propagates errors") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 7) throw ParameterError("boom");
                    }),
                    ParameterError);
}
