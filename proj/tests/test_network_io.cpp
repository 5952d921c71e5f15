#include "megt/error.hpp"
#include "megt/network_io.hpp"

#include <doctest.h>

#include <sstream>

using namespace megt;

TEST_CASE("multiplex files round-trip exactly") {
    MultiplexSpec spec;
    spec.node_count = 40;
    spec.topologies = {LayerTopology::scale_free(2), LayerTopology::watts_strogatz(4, 0.2)};
    spec.interlayer_strength = 0.7;
    spec.rng_seed = 12;
    const auto net = build_multiplex(spec);
    std::stringstream buf;
    write_multiplex(buf, net);
    const auto back = read_multiplex(buf);
    CHECK(back.delta == net.delta);
    CHECK(back.interlayer_strength == 0.7);
    for (int a = 0; a < 2; ++a) {
        CHECK(back.adjacency[static_cast<std::size_t>(a)] == net.adjacency[static_cast<std::size_t>(a)]);
        CHECK(back.weights[static_cast<std::size_t>(a)] == net.weights[static_cast<std::size_t>(a)]);
    }
}

TEST_CASE("malformed multiplex files name the line") {
    auto fails_at = [](const std::string& text, const std::string& where) {
        std::istringstream in(text);
        try {
            (void)read_multiplex(in);
        } catch (const DataError& e) {
            return std::string(e.what()).find(where) != std::string::npos;
        }
        return false;
    };
    CHECK(fails_at("", "no header"));
    CHECK(fails_at("graph 3 1\n", "line 1"));
    CHECK(fails_at("multiplex v1 3 1\nlayer 0 0 5 1\n", "line 2"));
    CHECK(fails_at("multiplex v1 3 1\n# c\nlayer 2 0 1 1\n", "line 3"));
    CHECK(fails_at("multiplex v1 3 1\ndelta 0 1 -1\n", "line 2"));
    CHECK(fails_at("multiplex v1 3 1\nlayer 0 0 1 x\n", "line 2"));

    std::istringstream ok("multiplex v1 3 1\nlayer 0 0 1 1\ndelta 0 1 0.5\n");
    const auto net = read_multiplex(ok);
    CHECK(net.homophily(0, 1) == doctest::Approx(1.0 / 1.5));
}
