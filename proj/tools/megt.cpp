// megt: command-line front end for multiplex evolutionary game runs and
// crowdsensing scoring. Every command writes its outputs plus a manifest.json
// into output_dir; `--manifest` replays a run from such a manifest.

#include "megt/config.hpp"
#include "megt/crowdsense.hpp"
#include "megt/equilibrium.hpp"
#include "megt/error.hpp"
#include "megt/evolve.hpp"
#include "megt/manifest.hpp"
#include "megt/metrics.hpp"
#include "megt/network_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>

namespace fs = std::filesystem;
using namespace megt;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kDataError = 3 };

struct Options {
    std::string config_path;
    std::string manifest_path;
    std::string output_dir;
    std::string reports;
    std::string mechanism;
    int jobs = 0;
    bool verify = false;
    bool lenient = false;
};

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string replica_name(std::string_view stem, int r, std::string_view ext) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "_r%03d", r);
    return std::string(stem) + buf + std::string(ext);
}

/// Files written by a command; checksummed into the manifest at the end.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    std::ofstream open(const std::string& name) {
        names_.push_back(name);
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw DataError("cannot open " + (dir_ / name).string() + " for writing");
        return out;
    }

    fs::path path(const std::string& name) {
        names_.push_back(name);
        return dir_ / name;
    }

    const fs::path& dir() const { return dir_; }

    std::map<std::string, std::string> checksums() const {
        std::map<std::string, std::string> out;
        for (const auto& n : names_) out[n] = sha256_file(dir_ / n);
        return out;
    }

private:
    fs::path dir_;
    std::vector<std::string> names_;
};

struct Run {
    std::string command;
    Config config;
    std::optional<RunManifest> replay;
    RunManifest manifest;
    std::unique_ptr<OutputSet> outputs;

    std::uint64_t seed() const { return config.get_u64("seed"); }
    int jobs() const { return config.get_int("jobs"); }

    void record_input(const fs::path& path) { manifest.inputs[path.string()] = sha256_file(path); }
};

Run prepare(const std::string& command, const Options& opt) {
    Run run;
    run.command = command;
    if (!opt.manifest_path.empty()) {
        run.replay = RunManifest::read(opt.manifest_path);
        if (run.replay->command != command) {
            throw ConfigError("manifest", "manifest records command '" + run.replay->command + "', not '" +
                                              command + "'");
        }
        for (const auto& [k, v] : run.replay->config) run.config.set(k, v);
        for (const auto& [path, digest] : run.replay->inputs) {
            if (sha256_file(path) != digest) throw DataError("input " + path + " changed since the manifest was written");
        }
    } else {
        if (!opt.config_path.empty()) run.config.merge_file(opt.config_path);
        if (const char* env = std::getenv("MEGT_SEED"); env && *env) run.config.set("seed", env);
    }
    if (!opt.output_dir.empty()) run.config.set("output_dir", opt.output_dir);
    if (opt.jobs > 0) run.config.set("jobs", std::to_string(opt.jobs));
    if (!opt.reports.empty()) run.config.set("reports", opt.reports);
    if (!opt.mechanism.empty()) run.config.set("mechanism", opt.mechanism);
    run.config.get_u64("seed");  // validate early
    if (run.jobs() < 1) throw ConfigError("jobs", "key 'jobs': must be >= 1");

    run.manifest.version = MEGT_VERSION;
    run.manifest.command = command;
    run.manifest.seed = run.seed();
    run.outputs = std::make_unique<OutputSet>(run.config.get("output_dir"));
    return run;
}

int finish(Run& run, const Options& opt) {
    run.manifest.config = run.config.values();
    run.manifest.outputs = run.outputs->checksums();
    run.manifest.write(run.outputs->dir() / "manifest.json");
    if (opt.verify) {
        if (!run.replay) throw ConfigError("verify", "--verify needs --manifest");
        bool ok = true;
        for (const auto& [name, digest] : run.replay->outputs) {
            const auto it = run.manifest.outputs.find(name);
            if (it == run.manifest.outputs.end() || it->second != digest) {
                std::cerr << "mismatch: " << name << '\n';
                ok = false;
            }
        }
        if (!ok) {
            std::cerr << "verification failed\n";
            return kDataError;
        }
        std::cout << "verified " << run.replay->outputs.size() << " outputs\n";
    }
    return kOk;
}

std::unique_ptr<ReplicaNetwork> replica_network(const Run& run, const MultiplexSpec& spec, int replica) {
    const auto& file = run.config.get("network_file");
    if (!file.empty()) return std::make_unique<ReplicaNetwork>(read_multiplex(fs::path(file)));
    return std::make_unique<ReplicaNetwork>(build_multiplex(replica_network_spec(spec, run.seed(), replica)));
}

void forbid_network_file(const Run& run) {
    if (!run.config.get("network_file").empty()) {
        throw ConfigError("network_file", "key 'network_file': " + run.command + " generates its own networks");
    }
}

/// Pads series to a common length with their last value, then takes
/// per-index means and sample standard deviations.
std::pair<std::vector<double>, std::vector<double>> padded_mean_std(const std::vector<std::vector<double>>& series) {
    std::size_t len = 0;
    for (const auto& s : series) len = std::max(len, s.size());
    std::vector<double> mean(len), sd(len);
    for (std::size_t t = 0; t < len; ++t) {
        double sum = 0.0, sq = 0.0;
        for (const auto& s : series) {
            const double v = t < s.size() ? s[t] : s.back();
            sum += v;
            sq += v * v;
        }
        const double n = static_cast<double>(series.size());
        mean[t] = sum / n;
        sd[t] = n > 1 ? std::sqrt(std::max(0.0, (sq - sum * sum / n) / (n - 1))) : 0.0;
    }
    return {mean, sd};
}

void write_state(std::ostream& out, const SimulationState& state) {
    out << "state v1 " << state.nodes() << ' ' << state.layers() << ' ' << state.round << '\n';
    for (int i = 0; i < state.nodes(); ++i) {
        out << i << ' ';
        for (int l = 0; l < state.layers(); ++l) out << (cooperates(state.strategies(i, l)) ? 'C' : 'D');
        out << ' ' << state.coop_count[static_cast<std::size_t>(i)] << '\n';
    }
}

// ---------------------------------------------------------------------------

int cmd_generate(const Options& opt) {
    auto run = prepare("generate", opt);
    forbid_network_file(run);
    const auto spec = network_spec(run.config);
    const auto net = build_multiplex(replica_network_spec(spec, run.seed(), 0));
    write_multiplex(run.outputs->path("net.mplex"), net);
    if (run.config.get_bool("dump_comm")) {
        write_dense_csv(run.outputs->path("comm.csv"), Communicability::of(net).matrix());
    }
    std::cout << "wrote " << (run.outputs->dir() / "net.mplex").string() << '\n';
    return finish(run, opt);
}

int cmd_evolve(const Options& opt) {
    auto run = prepare("evolve", opt);
    const auto spec = network_spec(run.config);
    const auto sim = simulation_config(run.config);
    if (const auto& f = run.config.get("network_file"); !f.empty()) run.record_input(f);

    const auto n = static_cast<std::size_t>(sim.replicas);
    std::vector<RunResult> results(n);
    std::vector<BehaviourStats> stats(n);
    std::vector<std::int64_t> rounds(n);
    parallel_for(n, run.jobs(), [&](std::size_t r) {
        const int replica = static_cast<int>(r);
        auto net = replica_network(run, spec, replica);
        results[r] = megt::run(net->context, sim, replica_dynamics_seed(run.seed(), 0, replica));
        stats[r] = behaviour_stats(results[r].final_state, net->network);
        if (r == 0 && run.config.get_bool("dump_comm")) {
            write_dense_csv(run.outputs->dir() / "comm.csv", net->communicability.matrix());
        }
    });
    if (run.config.get_bool("dump_comm")) run.outputs->path("comm.csv");

    std::vector<std::vector<double>> series;
    bool all_converged = true;
    for (std::size_t r = 0; r < n; ++r) {
        const auto& traj = results[r].trajectory;
        auto out = run.outputs->open(replica_name("rho", static_cast<int>(r), ".csv"));
        out << "round,rho\n";
        for (std::size_t t = 0; t < traj.rho.size(); ++t) out << t << ',' << num(traj.rho[t]) << '\n';
        auto state = run.outputs->open(replica_name("state", static_cast<int>(r), ".txt"));
        write_state(state, results[r].final_state);
        series.push_back(traj.rho);
        all_converged = all_converged && traj.converged;
    }
    {
        const auto [mean, sd] = padded_mean_std(series);
        auto out = run.outputs->open("rho.csv");
        out << "round,rho_mean,rho_std\n";
        for (std::size_t t = 0; t < mean.size(); ++t) out << t << ',' << num(mean[t]) << ',' << num(sd[t]) << '\n';
    }
    {
        auto out = run.outputs->open("metrics.csv");
        out << "replica,node,gamma,reputation\n";
        for (std::size_t r = 0; r < n; ++r) {
            for (Eigen::Index i = 0; i < stats[r].gamma.size(); ++i) {
                out << r << ',' << i << ',' << num(stats[r].gamma(i)) << ',' << num(stats[r].reputation.values(i))
                    << '\n';
            }
        }
    }
    {
        auto out = run.outputs->open("summary.csv");
        out << "replica,rounds,converged,steady_rho,qoi,all_defectors\n";
        for (std::size_t r = 0; r < n; ++r) {
            const auto& traj = results[r].trajectory;
            out << r << ',' << results[r].final_state.round << ',' << (traj.converged ? "true" : "false") << ','
                << num(traj.steady_rho) << ',' << num(stats[r].qoi) << ','
                << (stats[r].reputation.all_defectors ? "true" : "false") << '\n';
        }
    }
    run.manifest.converged = all_converged;
    double mean_rho = 0.0;
    for (const auto& r : results) mean_rho += r.trajectory.steady_rho / static_cast<double>(n);
    std::cout << "steady rho (replica mean) " << num(mean_rho) << (all_converged ? "" : " [not converged]") << '\n';
    return finish(run, opt);
}

int cmd_sweep(const Options& opt) {
    auto run = prepare("sweep", opt);
    forbid_network_file(run);
    const auto spec = network_spec(run.config);
    const auto sim = simulation_config(run.config);
    const auto grid = grid_spec(run.config);
    const auto cells = sweep_ts(grid, spec, sim, run.jobs());
    auto out = run.outputs->open("grid.csv");
    out << "T,S,rho_mean,rho_std,replicas\n";
    for (const auto& c : cells) {
        out << num(c.temptation) << ',' << num(c.sucker) << ',' << num(c.rho_mean) << ',' << num(c.rho_std) << ','
            << c.replicas << '\n';
    }
    out.close();
    std::cout << "wrote " << cells.size() << " grid cells\n";
    return finish(run, opt);
}

int cmd_nash(const Options& opt) {
    auto run = prepare("nash", opt);
    const auto spec = network_spec(run.config);
    const auto sim = simulation_config(run.config);
    const auto projection = nash_projection(run.config);
    if (const auto& f = run.config.get("network_file"); !f.empty()) run.record_input(f);

    const auto n = static_cast<std::size_t>(sim.replicas);
    std::vector<NashReport> reports(n);
    std::vector<bool> converged(n);
    parallel_for(n, run.jobs(), [&](std::size_t r) {
        const int replica = static_cast<int>(r);
        auto net = replica_network(run, spec, replica);
        NashTracker tracker(net->network, sim.game, projection);
        const auto result = megt::run(net->context, sim, replica_dynamics_seed(run.seed(), 0, replica),
                                      [&](const SimulationState& s) { tracker.observe(s.strategies); });
        reports[r] = tracker.report();
        converged[r] = result.trajectory.converged;
    });

    std::vector<std::vector<double>> alpha, weak;
    for (std::size_t r = 0; r < n; ++r) {
        const auto& rep = reports[r];
        auto out = run.outputs->open(replica_name("alpha", static_cast<int>(r), ".csv"));
        out << "round,alpha,weak_fraction\n";
        for (std::size_t t = 0; t < rep.per_round.size(); ++t) {
            out << t << ',' << num(rep.per_round[t]) << ',' << num(rep.per_round_weak[t]) << '\n';
        }
        alpha.push_back(rep.per_round);
        weak.push_back(rep.per_round_weak);
    }
    const auto a = padded_mean_std(alpha).first;
    const auto w = padded_mean_std(weak).first;
    auto out = run.outputs->open("alpha.csv");
    out << "round,alpha,weak_fraction\n";
    for (std::size_t t = 0; t < a.size(); ++t) out << t << ',' << num(a[t]) << ',' << num(w[t]) << '\n';
    out.close();
    run.manifest.converged = std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
    std::cout << "final alpha (replica mean) " << num(a.back()) << '\n';
    return finish(run, opt);
}

int cmd_score(const Options& opt) {
    namespace cs = crowdsense;
    auto run = prepare("score", opt);
    const auto cfg = score_config(run.config);
    const auto& path = run.config.get("reports");
    if (path.empty()) throw ConfigError("reports", "key 'reports': score needs a report CSV (--reports)");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open reports file " + path);
    run.record_input(path);
    const auto parsed = cs::parse_reports(in);
    for (const auto& rej : parsed.rejections) {
        if (rej.reason != cs::RejectReason::Malformed) continue;
        if (!opt.lenient) throw DataError("row " + std::to_string(rej.row) + " (" + rej.detail + ")");
        std::cerr << "skipping row " << rej.row << ": " << rej.detail << '\n';
    }
    const auto result = cs::score_corpus(parsed.kept, cfg);
    const auto primary = cs::mechanism_slot(cfg.primary);

    {
        auto out = run.outputs->open("ledger.csv");
        out << "user_id,rs_raw,rs_norm,gamma_emp,incentive_A,incentive_B,incentive_C\n";
        for (const auto& l : result.ledgers) {
            out << l.user_id << ',' << num(l.rs_raw[primary]) << ',' << num(l.rs_norm[primary]) << ','
                << num(l.gamma[primary]);
            for (const auto& inc : l.incentive) out << ',' << (inc ? num(*inc) : "");
            out << '\n';
        }
    }
    {
        auto out = run.outputs->open("decisions.csv");
        out << "date,segment,street,event_type,confidence,decision\n";
        for (const auto& d : result.decisions) {
            out << cs::format_date(d.window.date) << ',' << d.window.segment << ',' << d.street << ','
                << cs::to_string(d.decision.event_type) << ',' << num(d.decision.confidence) << ','
                << (d.decision.publish ? "publish" : "drop") << '\n';
        }
    }
    {
        auto out = run.outputs->open("rejections.csv");
        out << "row,object_id,reason\n";
        for (const auto& rej : parsed.rejections) {
            out << rej.row << ',' << rej.object_id << ',' << cs::to_string(rej.reason) << '\n';
        }
    }
    std::cout << result.ledgers.size() << " users, " << parsed.kept.size() << " kept reports, "
              << parsed.rejections.size() << " rejected\n";
    return finish(run, opt);
}

int cmd_synth(const Options& opt) {
    namespace cs = crowdsense;
    auto run = prepare("synth", opt);
    const auto corpus = cs::synth_corpus(synth_spec(run.config));
    {
        auto out = run.outputs->open("reports.csv");
        cs::write_reports(out, corpus.rows);
    }
    {
        auto out = run.outputs->open("archetypes.csv");
        out << "user_id,archetype\n";
        for (const auto& [user, kind] : corpus.archetypes) out << user << ',' << cs::to_string(kind) << '\n';
    }
    std::cout << "wrote " << corpus.rows.size() << " reports\n";
    return finish(run, opt);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiplex evolutionary games, Nash analysis and crowdsensing incentives"};
    app.set_version_flag("--version", std::string(MEGT_VERSION));
    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "Print every config key with its default and exit");

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opt.config_path, "Config file (key = value)");
        sub->add_option("--manifest", opt.manifest_path, "Replay the run recorded in this manifest");
        sub->add_option("-o,--output-dir", opt.output_dir, "Output directory (overrides output_dir)");
        sub->add_option("-j,--jobs", opt.jobs, "Worker threads (overrides jobs)");
        sub->add_flag("--verify", opt.verify, "With --manifest: fail unless outputs match byte for byte");
        return sub;
    };
    const std::map<std::string, int (*)(const Options&)> commands{
        {"generate", cmd_generate}, {"evolve", cmd_evolve}, {"sweep", cmd_sweep},
        {"nash", cmd_nash},         {"score", cmd_score},   {"synth", cmd_synth}};
    add_common(app.add_subcommand("generate", "Generate a multiplex network (net.mplex)"));
    add_common(app.add_subcommand("evolve", "Run the evolutionary dynamics"));
    add_common(app.add_subcommand("sweep", "Sweep the T-S plane (grid.csv)"));
    add_common(app.add_subcommand("nash", "Track the Nash-pair density per round (alpha.csv)"));
    auto* score = add_common(app.add_subcommand("score", "Score a report corpus under mechanisms A, B, C"));
    score->add_option("--reports", opt.reports, "Report CSV (overrides reports)");
    score->add_option("--mechanism", opt.mechanism, "A, B, C or all (overrides mechanism)");
    score->add_flag("--lenient", opt.lenient, "Skip malformed rows instead of failing");
    add_common(app.add_subcommand("synth", "Generate a synthetic report corpus (reports.csv)"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }
    if (print_defaults) {
        std::cout << defaults_text();
        return kOk;
    }
    const auto chosen = app.get_subcommands();
    if (chosen.empty()) {
        std::cerr << app.help();
        return kConfigError;
    }

    try {
        return commands.at(chosen.front()->get_name())(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
        return kConfigError;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
