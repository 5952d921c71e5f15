#include "megt/comm.hpp"
#include "megt/error.hpp"
#include "megt/netgen.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <random>

using namespace megt;

namespace {

Eigen::MatrixXd series_exp(const Eigen::MatrixXd& m, int terms) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd term = sum;
    for (int k = 1; k < terms; ++k) {
        term = term * m / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

MultiplexNetwork two_layer_net(const Eigen::MatrixXd& a0, const Eigen::MatrixXd& a1, double omega) {
    const auto n = a0.rows();
    return assemble_multiplex({a0, a1}, Eigen::MatrixXd::Zero(n, n), omega);
}

} // namespace

TEST_CASE("supra matrix blocks") {
    const Eigen::MatrixXd empty = Eigen::MatrixXd::Zero(2, 2);
    const auto m = build_supra(two_layer_net(empty, empty, 1.0), 1.0);
    Eigen::MatrixXd expected(4, 4);
    expected << 0, 0, 1, 0,
                0, 0, 0, 1,
                1, 0, 0, 0,
                0, 1, 0, 0;
    CHECK(m == expected);

    Eigen::MatrixXd edge(2, 2);
    edge << 0, 1, 1, 0;
    const auto net = two_layer_net(edge, edge, 1.0);
    const auto coupled = build_supra(net, 1.0);
    CHECK((coupled.rowwise().sum().array() == 2.0).all());

    const auto decoupled = build_supra(net, 0.0);
    CHECK(decoupled.topLeftCorner(2, 2) == net.z_layers[0]);
    CHECK(decoupled.bottomRightCorner(2, 2) == net.z_layers[1]);
    CHECK(decoupled.topRightCorner(2, 2).isZero());

    CHECK_THROWS_AS(build_supra(net, -1.0), ParameterError);
}

TEST_CASE("supra matrix is generic over the scalar") {
    std::vector<Eigen::MatrixXf> layers{Eigen::MatrixXf::Zero(3, 3), Eigen::MatrixXf::Ones(3, 3)};
    const auto m = supra_matrix<float>(std::span<const Eigen::MatrixXf>(layers), 0.5f);
    CHECK(m.rows() == 6);
    CHECK(m(0, 3) == doctest::Approx(0.5f));
    CHECK(m(4, 5) == doctest::Approx(1.0f));
}

TEST_CASE("matrix exponential closed forms") {
    CHECK(matrix_exp(Eigen::MatrixXd::Zero(3, 3)).isApprox(Eigen::MatrixXd::Identity(3, 3)));

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 0.7;
    d(1, 1) = -2.5;
    const auto ed = matrix_exp(d);
    CHECK(ed(0, 0) == doctest::Approx(std::exp(0.7)).epsilon(1e-14));
    CHECK(ed(1, 1) == doctest::Approx(std::exp(-2.5)).epsilon(1e-14));
    CHECK(ed(0, 1) == 0.0);

    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0;
    const auto es = matrix_exp(swap);
    CHECK(std::abs(es(0, 0) - std::cosh(1.0)) < 1e-12);
    CHECK(std::abs(es(0, 1) - std::sinh(1.0)) < 1e-12);
    CHECK(std::abs(es(0, 0) - 1.5431) < 1e-4);
    CHECK(std::abs(es(1, 0) - 1.1752) < 1e-4);
}

TEST_CASE("matrix exponential matches the series and Eigen's reference") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd a(6, 6);
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = u(rng);
        const auto mine = matrix_exp(a);
        CHECK((mine - series_exp(a, 30)).cwiseAbs().maxCoeff() < 1e-12);
        const Eigen::MatrixXd reference = a.exp();
        CHECK((mine - reference).cwiseAbs().maxCoeff() < 1e-12);
    }
    // Large norm exercises the squaring phase.
    Eigen::MatrixXd big = Eigen::MatrixXd::Random(8, 8) * 4.0;
    const Eigen::MatrixXd reference = big.exp();
    CHECK(((matrix_exp(big) - reference).cwiseAbs().array() / reference.cwiseAbs().maxCoeff()).maxCoeff() < 1e-12);
}

TEST_CASE("matrix exponential errors") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(matrix_exp(bad), NumericError);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(matrix_exp(bad), NumericError);
    CHECK_THROWS_AS(matrix_exp(Eigen::MatrixXd::Zero(2, 3)), ParameterError);
}

TEST_CASE("communicability blocks") {
    Eigen::MatrixXd edge(2, 2);
    edge << 0, 1, 1, 0;
    const auto net = two_layer_net(edge, Eigen::MatrixXd::Zero(2, 2), 1.0);
    const auto g = Communicability::of(net);
    CHECK(g.nodes() == 2);
    CHECK(g.layers() == 2);
    CHECK(g.matrix().isApprox(matrix_exp(build_supra(net, 1.0))));
    CHECK(g(0, 1, 1, 0) == g.matrix()(1, 2));
    CHECK(g.block(1, 0).isApprox(g.matrix().bottomLeftCorner(2, 2)));
    CHECK(g.matrix().isApprox(g.matrix().transpose()));
}

TEST_CASE("eta from the cross-layer neighbourhood") {
    Eigen::MatrixXd path = Eigen::MatrixXd::Zero(3, 3);
    path(0, 1) = path(1, 0) = path(1, 2) = path(2, 1) = 1.0;
    const auto net = two_layer_net(path, path, 1.0);
    const auto g = Communicability::of(net);
    const CrossLayerNeighbourhood cross(net, g);
    const EtaBounds bounds;

    StrategyTable s(3, 2, Strategy::Cooperate);
    CHECK(eta(1, 0, g, s, net, bounds) == doctest::Approx(0.5));
    CHECK(cross.eta(0, 1, s, bounds) == doctest::Approx(0.5));

    // Node 1 on layer 0 is C; everything on layer 1 is D.
    for (int i = 0; i < 3; ++i) s(i, 1) = Strategy::Defect;
    CHECK(eta(1, 0, g, s, net, bounds) == doctest::Approx(1.0));

    // Counterpart of node 0 is {0} plus its neighbour {1}: make the weighted
    // fraction exactly one half by hand.
    const double g00 = g(0, 0, 1, 0);
    const double g01 = g(0, 0, 1, 1);
    s(0, 1) = Strategy::Cooperate;
    const double fraction = g00 / (g00 + g01);
    CHECK(cross.same_strategy_fraction(0, 0, s) == doctest::Approx(fraction));
    CHECK(eta(0, 0, g, s, net, bounds) == doctest::Approx(1.0 - 0.5 * fraction));
    CHECK(eta_from_fraction(0.5, bounds) == doctest::Approx(0.75));

    // A single layer has no cross-layer neighbourhood.
    const auto single = assemble_multiplex({path}, Eigen::MatrixXd::Zero(3, 3), 1.0);
    const auto gs = Communicability::of(single);
    CHECK(eta(0, 0, gs, StrategyTable(3, 1, Strategy::Cooperate), single, bounds) == 1.0);

    CHECK_THROWS_AS((EtaBounds{0.8, 0.5}.validate()), ParameterError);
}
