#pragma once

#include "megt/crowdsense.hpp"
#include "megt/equilibrium.hpp"
#include "megt/evolve.hpp"
#include "megt/netgen.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace megt {

struct ConfigKey {
    std::string_view name;
    std::string_view default_value;
    std::string_view help;
};

/// Every recognised key with its default, in documentation order.
std::span<const ConfigKey> config_keys();

/// `key = value` lines for all defaults, with help as comments.
std::string defaults_text();

/// Flat key/value configuration. Lines are `key = value`; `#` starts a
/// comment; `include <path>` splices another file, resolved relative to the
/// including file. Later assignments win. Unknown keys throw ConfigError.
class Config {
public:
    /// All keys at their defaults.
    Config();

    static Config from_file(const std::filesystem::path& path);
    static Config from_string(std::string_view text, const std::filesystem::path& base_dir = ".");

    void merge_file(const std::filesystem::path& path);
    void merge_string(std::string_view text, const std::filesystem::path& base_dir = ".");
    void set(const std::string& key, std::string value);

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<std::string> get_list(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    void merge(std::string_view text, const std::filesystem::path& base_dir, int depth);

    std::map<std::string, std::string> values_;
};

// Typed views. Each throws ConfigError naming the offending key.
MultiplexSpec network_spec(const Config& config);
PayoffMatrix game_matrix(const Config& config);
SimulationConfig simulation_config(const Config& config);
TsGridSpec grid_spec(const Config& config);
NashProjection nash_projection(const Config& config);
crowdsense::ScoreConfig score_config(const Config& config);
crowdsense::SynthSpec synth_spec(const Config& config);

} // namespace megt
