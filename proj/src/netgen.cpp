#include "megt/netgen.hpp"

#include "megt/error.hpp"
#include "megt/rng.hpp"

#include <algorithm>
#include <string>

namespace megt {

std::string_view to_string(TopologyKind kind) {
    switch (kind) {
    case TopologyKind::ER: return "er";
    case TopologyKind::WS: return "ws";
    case TopologyKind::SF: return "sf";
    }
    return "?";
}

TopologyKind parse_topology_kind(std::string_view name) {
    if (name == "er") return TopologyKind::ER;
    if (name == "ws" || name == "sw") return TopologyKind::WS;
    if (name == "sf" || name == "ba") return TopologyKind::SF;
    throw ParameterError("unknown topology '" + std::string(name) + "' (expected er, ws or sf)");
}

LayerTopology LayerTopology::erdos_renyi(double p) {
    LayerTopology t;
    t.kind = TopologyKind::ER;
    t.edge_probability = p;
    return t;
}

LayerTopology LayerTopology::watts_strogatz(int k, double beta) {
    LayerTopology t;
    t.kind = TopologyKind::WS;
    t.ring_degree = k;
    t.rewire_probability = beta;
    return t;
}

LayerTopology LayerTopology::scale_free(int m, int m0) {
    LayerTopology t;
    t.kind = TopologyKind::SF;
    t.attachment_count = m;
    t.seed_clique_size = m0;
    return t;
}

namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

void check_node_count(int n) {
    if (n < 2) throw ParameterError("node count must be at least 2, got " + std::to_string(n));
}

void add_edge(Eigen::MatrixXd& a, int i, int j) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
}

} // namespace

void LayerTopology::validate(int n) const {
    check_node_count(n);
    switch (kind) {
    case TopologyKind::ER:
        check_probability(edge_probability, "ER edge probability");
        break;
    case TopologyKind::WS:
        if (ring_degree < 2 || ring_degree % 2 != 0) {
            throw ParameterError("WS ring degree must be even and >= 2, got " +
                                 std::to_string(ring_degree));
        }
        if (ring_degree >= n) {
            throw ParameterError("WS ring degree must be below the node count");
        }
        check_probability(rewire_probability, "WS rewiring probability");
        break;
    case TopologyKind::SF:
        if (attachment_count < 1) throw ParameterError("SF attachment count must be >= 1");
        if (attachment_count > seed_clique_size) {
            throw ParameterError("SF attachment count m=" + std::to_string(attachment_count) +
                                 " exceeds seed clique size m0=" +
                                 std::to_string(seed_clique_size));
        }
        if (seed_clique_size >= n) {
            throw ParameterError("SF seed clique size must be below the node count");
        }
        break;
    }
}

void MultiplexSpec::validate() const {
    check_node_count(node_count);
    if (topologies.empty()) throw ParameterError("a multiplex needs at least one layer");
    for (const auto& t : topologies) t.validate(node_count);
    if (!(homophily_sigma >= 0.0)) throw ParameterError("homophily sigma must be >= 0");
    if (!(interlayer_strength >= 0.0)) throw ParameterError("inter-layer strength must be >= 0");
}

Eigen::MatrixXd generate_er(int n, double p, std::uint64_t seed) {
    LayerTopology::erdos_renyi(p).validate(n);
    Rng rng(seed);
    std::bernoulli_distribution coin(p);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (coin(rng)) add_edge(a, i, j);
        }
    }
    return a;
}

Eigen::MatrixXd generate_ws(int n, int k, double beta, std::uint64_t seed) {
    LayerTopology::watts_strogatz(k, beta).validate(n);
    Rng rng(seed);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int d = 1; d <= k / 2; ++d) add_edge(a, i, (i + d) % n);
    }

    // Rewire each lattice edge (i, i+d) at its i end, keeping the edge count.
    std::vector<int> candidates;
    candidates.reserve(static_cast<std::size_t>(n));
    for (int d = 1; d <= k / 2; ++d) {
        for (int i = 0; i < n; ++i) {
            const int j = (i + d) % n;
            if (a(i, j) == 0.0 || !bernoulli(rng, beta)) continue;
            candidates.clear();
            for (int t = 0; t < n; ++t) {
                if (t != i && a(i, t) == 0.0) candidates.push_back(t);
            }
            if (candidates.empty()) continue;
            const int target = candidates[uniform_index(rng, candidates.size())];
            a(i, j) = a(j, i) = 0.0;
            add_edge(a, i, target);
        }
    }
    return a;
}

Eigen::MatrixXd generate_sf(int n, int m, int m0, std::uint64_t seed) {
    LayerTopology::scale_free(m, m0).validate(n);
    Rng rng(seed);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);

    // One entry per edge end, so a uniform draw is degree-proportional.
    std::vector<int> ends;
    ends.reserve(static_cast<std::size_t>(m0 * (m0 - 1) + 2 * m * n));
    for (int i = 0; i < m0; ++i) {
        for (int j = i + 1; j < m0; ++j) {
            add_edge(a, i, j);
            ends.push_back(i);
            ends.push_back(j);
        }
    }

    std::vector<int> targets;
    for (int v = m0; v < n; ++v) {
        targets.clear();
        while (static_cast<int>(targets.size()) < m) {
            const int t = ends.empty() ? static_cast<int>(uniform_index(rng, static_cast<std::size_t>(v)))
                                       : ends[uniform_index(rng, ends.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        for (int t : targets) {
            add_edge(a, v, t);
            ends.push_back(v);
            ends.push_back(t);
        }
    }
    return a;
}

Eigen::MatrixXd generate_layer(int n, const LayerTopology& topology, std::uint64_t seed) {
    switch (topology.kind) {
    case TopologyKind::ER: return generate_er(n, topology.edge_probability, seed);
    case TopologyKind::WS:
        return generate_ws(n, topology.ring_degree, topology.rewire_probability, seed);
    case TopologyKind::SF:
        return generate_sf(n, topology.attachment_count, topology.seed_clique_size, seed);
    }
    throw ParameterError("unknown topology kind");
}

Homophily sample_homophily(int n, double sigma, std::uint64_t seed) {
    check_node_count(n);
    if (!(sigma >= 0.0)) throw ParameterError("homophily sigma must be >= 0");
    Homophily out;
    out.delta = Eigen::MatrixXd::Zero(n, n);
    if (sigma > 0.0) {
        Rng rng(seed);
        std::normal_distribution<double> normal(0.0, sigma);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                out.delta(i, j) = out.delta(j, i) = std::abs(normal(rng));
            }
        }
    }
    out.similarity = homophily_from_distance(out.delta);
    return out;
}

int MultiplexNetwork::multiplex_degree(int node) const {
    int total = 0;
    for (int l = 0; l < layer_count(); ++l) total += degree(l, node);
    return total;
}

int MultiplexNetwork::aggregated_degree(int node) const {
    return static_cast<int>(std::llround(aggregated.row(node).sum()));
}

double MultiplexNetwork::mean_degree(int layer) const {
    return adjacency[static_cast<std::size_t>(layer)].sum() / node_count();
}

MultiplexNetwork assemble_multiplex(std::vector<Eigen::MatrixXd> adjacency, Eigen::MatrixXd delta,
                                    double interlayer_strength) {
    if (adjacency.empty()) throw ParameterError("a multiplex needs at least one layer");
    const Eigen::Index n = delta.rows();
    if (delta.cols() != n) throw ParameterError("distance matrix must be square");
    for (const auto& a : adjacency) {
        if (a.rows() != n || a.cols() != n) throw ParameterError("layer size mismatch");
    }
    if (!(interlayer_strength >= 0.0)) throw ParameterError("inter-layer strength must be >= 0");

    MultiplexNetwork net;
    net.adjacency = std::move(adjacency);
    net.delta = std::move(delta);
    net.homophily = homophily_from_distance(net.delta);
    net.interlayer_strength = interlayer_strength;
    net.aggregated = Eigen::MatrixXd::Zero(n, n);

    for (const auto& a : net.adjacency) {
        const auto c = eigenvector_centrality(a).values;
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                if (a(i, j) != 0.0) w(i, j) = link_weight(net.homophily(i, j), c(i), c(j));
            }
        }
        net.centrality.push_back(c);
        net.weights.push_back(std::move(w));
        net.z_layers.push_back(net.homophily.cwiseProduct(a));
        net.aggregated = net.aggregated.cwiseMax(a);

        std::vector<std::vector<int>> lists(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (a(i, j) != 0.0) lists[static_cast<std::size_t>(i)].push_back(static_cast<int>(j));
            }
        }
        net.neighbours.push_back(std::move(lists));
    }
    return net;
}

MultiplexNetwork build_multiplex(const MultiplexSpec& spec) {
    spec.validate();
    std::vector<Eigen::MatrixXd> layers;
    layers.reserve(spec.topologies.size());
    for (std::size_t l = 0; l < spec.topologies.size(); ++l) {
        layers.push_back(generate_layer(spec.node_count, spec.topologies[l],
                                        derive_seed(spec.rng_seed, {kStreamTopology, l})));
    }
    auto homophily = sample_homophily(spec.node_count, spec.homophily_sigma,
                                      derive_seed(spec.rng_seed, {kStreamHomophily}));
    return assemble_multiplex(std::move(layers), std::move(homophily.delta),
                              spec.interlayer_strength);
}

} // namespace megt
