#include "megt/network_io.hpp"

#include "megt/error.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace megt {

void write_multiplex(std::ostream& out, const MultiplexNetwork& net) {
    const int n = net.node_count();
    const int m = net.layer_count();
    out << "multiplex v1 " << n << ' ' << m << '\n';
    out << std::setprecision(17);
    out << "omega " << net.interlayer_strength << '\n';
    for (int l = 0; l < m; ++l) {
        const auto& a = net.adjacency[static_cast<std::size_t>(l)];
        const auto& w = net.weights[static_cast<std::size_t>(l)];
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (a(i, j) != 0.0) out << "layer " << l << ' ' << i << ' ' << j << ' ' << w(i, j) << '\n';
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (net.delta(i, j) != 0.0) out << "delta " << i << ' ' << j << ' ' << net.delta(i, j) << '\n';
        }
    }
}

void write_multiplex(const std::filesystem::path& path, const MultiplexNetwork& net) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    write_multiplex(out, net);
}

namespace {

struct WeightEntry {
    int layer, i, j;
    double value;
};

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw DataError("multiplex line " + std::to_string(line_no) + ": " + what);
}

} // namespace

MultiplexNetwork read_multiplex(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    int n = -1, m = -1;
    double omega = 1.0;
    std::vector<Eigen::MatrixXd> layers;
    Eigen::MatrixXd delta;
    std::vector<WeightEntry> weights;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        if (n < 0) {
            std::string version;
            if (tag != "multiplex" || !(fields >> version >> n >> m) || version != "v1" || n < 2 || m < 1) {
                fail(line_no, "expected header 'multiplex v1 N M'");
            }
            layers.assign(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(n, n));
            delta = Eigen::MatrixXd::Zero(n, n);
            continue;
        }
        auto in_range = [&](int v, int bound) { return v >= 0 && v < bound; };
        if (tag == "omega") {
            if (!(fields >> omega) || omega < 0.0) fail(line_no, "bad omega");
        } else if (tag == "layer") {
            WeightEntry e{};
            if (!(fields >> e.layer >> e.i >> e.j >> e.value) || !in_range(e.layer, m) ||
                !in_range(e.i, n) || !in_range(e.j, n) || e.i == e.j) {
                fail(line_no, "bad layer edge");
            }
            auto& a = layers[static_cast<std::size_t>(e.layer)];
            a(e.i, e.j) = a(e.j, e.i) = 1.0;
            weights.push_back(e);
        } else if (tag == "delta") {
            int i = 0, j = 0;
            double v = 0.0;
            if (!(fields >> i >> j >> v) || !in_range(i, n) || !in_range(j, n) || i == j || v < 0.0) {
                fail(line_no, "bad delta entry");
            }
            delta(i, j) = delta(j, i) = v;
        } else {
            fail(line_no, "unknown record '" + tag + "'");
        }
    }
    if (n < 0) throw DataError("multiplex file has no header");

    auto net = assemble_multiplex(std::move(layers), std::move(delta), omega);
    for (const auto& e : weights) {
        auto& w = net.weights[static_cast<std::size_t>(e.layer)];
        w(e.i, e.j) = w(e.j, e.i) = e.value;
    }
    return net;
}

MultiplexNetwork read_multiplex(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_multiplex(in);
}

} // namespace megt
