#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace megt {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// What a run needs to be replayed and checked. Contains no timestamps or
/// host data, so equal runs produce equal manifests.
struct RunManifest {
    std::string tool = "megt";
    std::string version;
    std::string command;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config;   // every resolved key
    std::map<std::string, std::string> inputs;   // path -> sha256
    std::map<std::string, std::string> outputs;  // name relative to output_dir -> sha256
    bool converged = true;

    std::string to_json() const;
    static RunManifest from_json(std::string_view text);

    void write(const std::filesystem::path& path) const;
    static RunManifest read(const std::filesystem::path& path);
};

struct VerifyReport {
    std::vector<std::string> missing;
    std::vector<std::string> mismatched;
    bool ok() const { return missing.empty() && mismatched.empty(); }
};

/// Compares the recorded output checksums against the files in `dir`.
VerifyReport verify_outputs(const RunManifest& manifest, const std::filesystem::path& dir);

} // namespace megt
