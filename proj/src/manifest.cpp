#include "megt/manifest.hpp"

#include "megt/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <sstream>

namespace megt {

namespace {

using Json = nlohmann::ordered_json;

struct DigestDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("SHA-256 initialisation failed");
        }
    }

    void update(const char* data, std::size_t size) {
        if (EVP_DigestUpdate(ctx_.get(), data, size) != 1) throw std::runtime_error("SHA-256 update failed");
    }

    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_.get(), digest.data(), &len) != 1) {
            throw std::runtime_error("SHA-256 finalisation failed");
        }
        static constexpr char kHex[] = "0123456789abcdef";
        std::string out;
        out.reserve(2 * len);
        for (unsigned int i = 0; i < len; ++i) {
            out += kHex[digest[i] >> 4];
            out += kHex[digest[i] & 0xf];
        }
        return out;
    }

private:
    std::unique_ptr<EVP_MD_CTX, DigestDeleter> ctx_;
};

} // namespace

std::string sha256_hex(std::string_view bytes) {
    Sha256 h;
    h.update(bytes.data(), bytes.size());
    return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    Sha256 h;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

std::string RunManifest::to_json() const {
    Json j;
    j["tool"] = tool;
    j["version"] = version;
    j["command"] = command;
    j["seed"] = seed;
    j["converged"] = converged;
    j["config"] = config;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
    try {
        const auto j = Json::parse(text);
        RunManifest m;
        m.tool = j.at("tool").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.converged = j.at("converged").get<bool>();
        m.config = j.at("config").get<std::map<std::string, std::string>>();
        m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
        m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
        return m;
    } catch (const Json::exception& e) {
        throw ConfigError("manifest", std::string("malformed manifest: ") + e.what());
    }
}

void RunManifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << to_json();
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("manifest", "cannot open manifest '" + path.string() + "'");
    std::stringstream text;
    text << in.rdbuf();
    return from_json(text.str());
}

VerifyReport verify_outputs(const RunManifest& manifest, const std::filesystem::path& dir) {
    VerifyReport report;
    for (const auto& [name, digest] : manifest.outputs) {
        const auto path = dir / name;
        if (!std::filesystem::exists(path)) {
            report.missing.push_back(name);
        } else if (sha256_file(path) != digest) {
            report.mismatched.push_back(name);
        }
    }
    return report;
}

} // namespace megt
