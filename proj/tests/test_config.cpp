#include "megt/config.hpp"
#include "megt/error.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace megt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("megt_cfg_" + std::to_string(::getpid()))) {
        fs::create_directories(path / "sub");
    }
    ~TempDir() { fs::remove_all(path); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(path / name) << text; }
};

} // namespace

TEST_CASE("defaults") {
    const Config c;
    CHECK(c.get("topology") == "sf");
    CHECK(c.get_int("nodes") == 200);
    CHECK(c.get_u64("seed") == 42);
    CHECK(c.get_double("K") == 0.1);
    CHECK_FALSE(c.get_bool("dump_comm"));
    const auto spec = network_spec(c);
    CHECK(spec.layer_count() == 2);
    CHECK(spec.topologies[0].kind == TopologyKind::SF);
    CHECK(spec.topologies[0].seed_clique_size == 3);
    CHECK(spec.interlayer_strength == 1.0);

    // The defaults text parses back to the same values.
    CHECK(Config::from_string(defaults_text()).values() == c.values());
}

TEST_CASE("parsing") {
    const auto c = Config::from_string("# comment\nnodes = 50  \n\n  topology=er\ner_p = 0.1 # trailing\n");
    CHECK(c.get_int("nodes") == 50);
    CHECK(network_spec(c).topologies[1].edge_probability == 0.1);
    CHECK(Config::from_string("topology = er\nnodes = 101").get("er_p") == "auto");
    CHECK(network_spec(Config::from_string("topology = er\nnodes = 101")).topologies[0].edge_probability ==
          doctest::Approx(0.04));
    CHECK(Config::from_string("topology = sf, ws, er\nlayers = 3").get_list("topology").size() == 3);

    CHECK_THROWS_AS(Config::from_string("nodez = 3"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("nodes"), ConfigError);
    try {
        (void)Config::from_string("nodes = many").get_int("nodes");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "nodes");
    }
    CHECK_THROWS_AS(Config::from_string("dump_comm = maybe").get_bool("dump_comm"), ConfigError);
}

TEST_CASE("includes resolve relative to the including file") {
    TempDir dir;
    dir.write("sub/base.cfg", "nodes = 60\ngame = pd\n");
    dir.write("run.cfg", "include sub/base.cfg\nb = 1.5\n");
    const auto c = Config::from_file(dir.path / "run.cfg");
    CHECK(c.get_int("nodes") == 60);
    const auto g = game_matrix(c);
    CHECK(g.temptation == 1.5);
    CHECK(g.sucker == -0.2);

    dir.write("loop.cfg", "include loop.cfg\n");
    CHECK_THROWS_AS(Config::from_file(dir.path / "loop.cfg"), ConfigError);
    CHECK_THROWS_AS(Config::from_file(dir.path / "missing.cfg"), ConfigError);
}

TEST_CASE("typed views reject inconsistent values") {
    CHECK_THROWS_AS(game_matrix(Config::from_string("game = sd\nT = 0.5\nS = 0.5")), ConfigError);
    CHECK(game_matrix(Config::from_string("game = sd\nT = 1.5\nS = 0.5")).temptation == 1.5);
    CHECK_THROWS_AS(network_spec(Config::from_string("topology = ws\nws_k = 3")), ConfigError);
    CHECK_THROWS_AS(network_spec(Config::from_string("topology = sf, er, ws")), ConfigError);
    CHECK_THROWS_AS(simulation_config(Config::from_string("init_coop = 2")), ConfigError);
    CHECK_THROWS_AS(grid_spec(Config::from_string("t_steps = 0")), ConfigError);
    CHECK_THROWS_AS(score_config(Config::from_string("mechanism = D")), ConfigError);
    CHECK_THROWS_AS(synth_spec(Config::from_string("honest_frac = 0.9")), ConfigError);

    const auto sc = score_config(Config::from_string("mechanism = B"));
    CHECK(sc.mechanisms.size() == 1);
    CHECK(sc.primary == crowdsense::Mechanism::B);
    CHECK(nash_projection(Config::from_string("nash_projection = per_layer")) == NashProjection::PerLayer);
}
