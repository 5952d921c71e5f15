#include "megt/config.hpp"

#include "megt/error.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace megt {

namespace {

constexpr std::array kKeys{
    // Run
    ConfigKey{"seed", "42", "master seed; MEGT_SEED overrides it"},
    ConfigKey{"replicas", "1", "independent replicas, each on its own network realization"},
    ConfigKey{"jobs", "1", "worker threads"},
    ConfigKey{"output_dir", "out", "directory for outputs and the manifest"},
    // Network
    ConfigKey{"nodes", "200", "nodes per layer"},
    ConfigKey{"layers", "2", "number of layers"},
    ConfigKey{"topology", "sf", "er | ws | sf, or one per layer as a comma list"},
    ConfigKey{"er_p", "auto", "ER link probability; auto gives mean degree 4"},
    ConfigKey{"ws_k", "4", "WS ring degree (even)"},
    ConfigKey{"ws_beta", "0.1", "WS rewiring probability"},
    ConfigKey{"sf_m", "2", "SF links per new node"},
    ConfigKey{"sf_m0", "auto", "SF seed clique size; auto is sf_m + 1"},
    ConfigKey{"sigma", "1", "homophily distance scale"},
    ConfigKey{"omega", "1", "inter-layer coupling in the supra matrix"},
    ConfigKey{"network_file", "", "read this multiplex file instead of generating one"},
    ConfigKey{"dump_comm", "false", "also write the communicability matrix as comm.csv"},
    // Game and dynamics
    ConfigKey{"game", "ts", "pd (uses b, c) | sd | sh | hg | ts (use T, S)"},
    ConfigKey{"b", "1.2", "prisoner's dilemma benefit: T = b"},
    ConfigKey{"c", "0.2", "prisoner's dilemma cost: S = -c"},
    ConfigKey{"T", "0.5", "temptation (R = 1, P = 0)"},
    ConfigKey{"S", "0.5", "sucker's payoff (R = 1, P = 0)"},
    ConfigKey{"K", "0.1", "selection noise in the Fermi rule"},
    ConfigKey{"eta_min", "0.5", "lower bound of the imitation scaling factor"},
    ConfigKey{"eta_max", "1", "upper bound of the imitation scaling factor"},
    ConfigKey{"init_coop", "0.5", "initial probability of cooperating per slot"},
    ConfigKey{"max_rounds", "5000", "Monte Carlo rounds before giving up"},
    ConfigKey{"steady_window", "200", "window length of the steady-state test"},
    ConfigKey{"steady_tolerance", "0.001", "max difference of consecutive window means"},
    ConfigKey{"payoff_weights", "weighted", "weighted | binary"},
    ConfigKey{"nash_projection", "majority_tie_c", "majority_tie_c | majority_tie_d | per_layer"},
    // T-S grid
    ConfigKey{"t_min", "0", "grid T lower bound"},
    ConfigKey{"t_max", "2", "grid T upper bound"},
    ConfigKey{"t_steps", "21", "grid T points"},
    ConfigKey{"s_min", "-1", "grid S lower bound"},
    ConfigKey{"s_max", "1", "grid S upper bound"},
    ConfigKey{"s_steps", "21", "grid S points"},
    // Crowdsensing
    ConfigKey{"reports", "", "report CSV for score"},
    ConfigKey{"budget", "1000", "incentive budget B"},
    ConfigKey{"nu", "0.5", "quantity vs quality preference in the confidence"},
    ConfigKey{"theta", "0.5", "publish threshold"},
    ConfigKey{"epsilon", "0.01", "truthfulness clamp and density floor"},
    ConfigKey{"mechanism", "all", "A | B | C | all; ledger scores follow C under all"},
    // Synthetic corpus
    ConfigKey{"users", "300", "synthetic users"},
    ConfigKey{"days", "7", "synthetic days"},
    ConfigKey{"start_date", "2015-02-23", "first synthetic date"},
    ConfigKey{"honest_frac", "0.6", "share of honest users"},
    ConfigKey{"selfish_frac", "0.25", "share of selfish users"},
    ConfigKey{"malicious_frac", "0.15", "share of malicious users"},
    ConfigKey{"streets", "30", "street names to draw from (max 30)"},
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_as(const std::string& key, const std::string& value, std::string_view what) {
    T v{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key, "key '" + key + "': expected " + std::string(what) + ", got '" + value + "'");
    }
    return v;
}

template <class F>
auto with_key(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const ParameterError& e) {
        throw ConfigError(key, "key '" + key + "': " + e.what());
    }
}

} // namespace

std::span<const ConfigKey> config_keys() { return kKeys; }

std::string defaults_text() {
    std::ostringstream out;
    for (const auto& k : kKeys) {
        out << "# " << k.help << '\n' << k.name << " = " << k.default_value << '\n';
    }
    return out.str();
}

Config::Config() {
    for (const auto& k : kKeys) values_.emplace(k.name, k.default_value);
}

Config Config::from_file(const std::filesystem::path& path) {
    Config c;
    c.merge_file(path);
    return c;
}

Config Config::from_string(std::string_view text, const std::filesystem::path& base_dir) {
    Config c;
    c.merge_string(text, base_dir);
    return c;
}

void Config::merge_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open config file '" + path.string() + "'");
    std::stringstream text;
    text << in.rdbuf();
    merge(text.str(), path.parent_path(), 0);
}

void Config::merge_string(std::string_view text, const std::filesystem::path& base_dir) {
    merge(text, base_dir, 0);
}

void Config::merge(std::string_view text, const std::filesystem::path& base_dir, int depth) {
    if (depth > 16) throw ConfigError("include", "include nesting too deep (cycle?)");
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        if (line.rfind("include", 0) == 0 && (line.size() == 7 || line[7] == ' ' || line[7] == '\t')) {
            const std::string target = trim(std::string_view(line).substr(7));
            if (target.empty()) throw ConfigError("include", "include needs a path");
            const std::filesystem::path p = base_dir / target;  // an absolute target replaces base_dir
            std::ifstream f(p);
            if (!f) throw ConfigError("include", "cannot open included file '" + p.string() + "'");
            std::stringstream body;
            body << f.rdbuf();
            merge(body.str(), p.parent_path(), depth + 1);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        set(trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)));
    }
}

void Config::set(const std::string& key, std::string value) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key, "unknown config key '" + key + "'");
    it->second = std::move(value);
}

const std::string& Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key, "unknown config key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const {
    return parse_as<double>(key, get(key), "a number");
}

int Config::get_int(const std::string& key) const {
    return parse_as<int>(key, get(key), "an integer");
}

std::uint64_t Config::get_u64(const std::string& key) const {
    return parse_as<std::uint64_t>(key, get(key), "a non-negative integer");
}

bool Config::get_bool(const std::string& key) const {
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    std::vector<std::string> out;
    std::istringstream in(get(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

MultiplexSpec network_spec(const Config& config) {
    MultiplexSpec spec;
    spec.node_count = config.get_int("nodes");
    const int layers = config.get_int("layers");
    if (layers < 1) throw ConfigError("layers", "key 'layers': must be >= 1");
    auto kinds = config.get_list("topology");
    if (kinds.size() == 1) kinds.assign(static_cast<std::size_t>(layers), kinds.front());
    if (kinds.size() != static_cast<std::size_t>(layers)) {
        throw ConfigError("topology", "key 'topology': give one kind or exactly 'layers' kinds");
    }
    for (const auto& name : kinds) {
        const auto kind = with_key("topology", [&] { return parse_topology_kind(name); });
        switch (kind) {
        case TopologyKind::ER: {
            const auto& p = config.get("er_p");
            const double prob = p == "auto" ? 4.0 / std::max(1, spec.node_count - 1) : config.get_double("er_p");
            spec.topologies.push_back(LayerTopology::erdos_renyi(prob));
            break;
        }
        case TopologyKind::WS:
            spec.topologies.push_back(
                LayerTopology::watts_strogatz(config.get_int("ws_k"), config.get_double("ws_beta")));
            break;
        case TopologyKind::SF: {
            const int m = config.get_int("sf_m");
            const int m0 = config.get("sf_m0") == "auto" ? m + 1 : config.get_int("sf_m0");
            spec.topologies.push_back(LayerTopology::scale_free(m, m0));
            break;
        }
        }
    }
    spec.homophily_sigma = config.get_double("sigma");
    spec.interlayer_strength = config.get_double("omega");
    spec.rng_seed = config.get_u64("seed");
    with_key("topology", [&] { spec.validate(); return 0; });
    return spec;
}

PayoffMatrix game_matrix(const Config& config) {
    const auto& name = config.get("game");
    if (name == "pd") return pd_from_bc(config.get_double("b"), config.get_double("c"));
    const PayoffMatrix m = from_ts(config.get_double("T"), config.get_double("S"));
    if (name == "ts") return m;
    const std::map<std::string, DilemmaKind> named{
        {"sd", DilemmaKind::SD}, {"sh", DilemmaKind::SH}, {"hg", DilemmaKind::HG}};
    const auto it = named.find(name);
    if (it == named.end()) throw ConfigError("game", "key 'game': expected pd, sd, sh, hg or ts, got '" + name + "'");
    if (classify(m) != it->second) {
        throw ConfigError("game", "key 'game': T and S do not describe a " + name + " game (classified as " +
                                      std::string(to_string(classify(m))) + ")");
    }
    return m;
}

SimulationConfig simulation_config(const Config& config) {
    SimulationConfig sim;
    sim.game = game_matrix(config);
    sim.selection_intensity = config.get_double("K");
    sim.eta_bounds = {config.get_double("eta_min"), config.get_double("eta_max")};
    sim.initial_coop_fraction = config.get_double("init_coop");
    sim.max_rounds = config.get_int("max_rounds");
    sim.steady_window = config.get_int("steady_window");
    sim.steady_tolerance = config.get_double("steady_tolerance");
    sim.replicas = config.get_int("replicas");
    sim.rng_seed = config.get_u64("seed");
    sim.payoff_weighting = with_key("payoff_weights", [&] {
        return parse_payoff_weighting(config.get("payoff_weights"));
    });
    with_key("simulation", [&] { sim.validate(); return 0; });
    return sim;
}

TsGridSpec grid_spec(const Config& config) {
    TsGridSpec g;
    g.t_min = config.get_double("t_min");
    g.t_max = config.get_double("t_max");
    g.t_steps = config.get_int("t_steps");
    g.s_min = config.get_double("s_min");
    g.s_max = config.get_double("s_max");
    g.s_steps = config.get_int("s_steps");
    with_key("grid", [&] { g.validate(); return 0; });
    return g;
}

NashProjection nash_projection(const Config& config) {
    return with_key("nash_projection", [&] { return parse_nash_projection(config.get("nash_projection")); });
}

crowdsense::ScoreConfig score_config(const Config& config) {
    crowdsense::ScoreConfig s;
    s.budget = config.get_double("budget");
    s.nu = config.get_double("nu");
    s.theta = config.get_double("theta");
    s.epsilon = config.get_double("epsilon");
    const auto& mech = config.get("mechanism");
    if (mech != "all") {
        s.primary = with_key("mechanism", [&] { return crowdsense::parse_mechanism(mech); });
        s.mechanisms = {s.primary};
    }
    with_key("crowdsense", [&] { s.validate(); return 0; });
    return s;
}

crowdsense::SynthSpec synth_spec(const Config& config) {
    crowdsense::SynthSpec s;
    s.users = config.get_int("users");
    s.days = config.get_int("days");
    const auto date = crowdsense::parse_date(config.get("start_date"));
    if (!date) throw ConfigError("start_date", "key 'start_date': expected YYYY-MM-DD");
    s.start_date = *date;
    s.honest_fraction = config.get_double("honest_frac");
    s.selfish_fraction = config.get_double("selfish_frac");
    s.malicious_fraction = config.get_double("malicious_frac");
    s.streets = config.get_int("streets");
    s.seed = config.get_u64("seed");
    with_key("synth", [&] { s.validate(); return 0; });
    return s;
}

} // namespace megt
