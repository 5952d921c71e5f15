#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace megt {

// ---------------------------------------------------------------------------
// Layer topologies
// ---------------------------------------------------------------------------

enum class TopologyKind { ER, WS, SF };

std::string_view to_string(TopologyKind kind);
TopologyKind parse_topology_kind(std::string_view name);

struct LayerTopology {
    TopologyKind kind = TopologyKind::SF;
    double edge_probability = 0.02;   // ER
    int ring_degree = 4;              // WS, even
    double rewire_probability = 0.1;  // WS
    int attachment_count = 2;         // SF
    int seed_clique_size = 3;         // SF, defaults to attachment_count + 1

    static LayerTopology erdos_renyi(double p);
    static LayerTopology watts_strogatz(int k, double beta = 0.1);
    static LayerTopology scale_free(int m, int m0);
    static LayerTopology scale_free(int m) { return scale_free(m, m + 1); }

    /// Throws ParameterError when the parameters are invalid for `n` nodes.
    void validate(int n) const;
};

struct MultiplexSpec {
    int node_count = 200;
    std::vector<LayerTopology> topologies;
    double homophily_sigma = 1.0;
    double interlayer_strength = 1.0;
    std::uint64_t rng_seed = 0;

    int layer_count() const { return static_cast<int>(topologies.size()); }
    void validate() const;
};

// ---------------------------------------------------------------------------
// Generators. All return a symmetric 0/1 matrix with zero diagonal.
// ---------------------------------------------------------------------------

Eigen::MatrixXd generate_er(int n, double p, std::uint64_t seed);
Eigen::MatrixXd generate_ws(int n, int k, double beta, std::uint64_t seed);
Eigen::MatrixXd generate_sf(int n, int m, int m0, std::uint64_t seed);
Eigen::MatrixXd generate_layer(int n, const LayerTopology& topology, std::uint64_t seed);

struct Homophily {
    Eigen::MatrixXd delta;       // half-normal distances, symmetric, zero diagonal
    Eigen::MatrixXd similarity;  // h = 1 / (1 + delta)
};

Homophily sample_homophily(int n, double sigma, std::uint64_t seed);

inline double homophily_from_distance(double delta) { return 1.0 / (1.0 + delta); }

template <typename Derived>
auto homophily_from_distance(const Eigen::MatrixBase<Derived>& delta) {
    using Scalar = typename Derived::Scalar;
    return (Scalar(1) + delta.array()).inverse().matrix();
}

inline std::size_t edge_count(const Eigen::MatrixXd& adjacency) {
    return static_cast<std::size_t>(std::llround(adjacency.sum() / 2.0));
}

// ---------------------------------------------------------------------------
// Eigenvector centrality
// ---------------------------------------------------------------------------

template <typename Scalar>
struct CentralityResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;  // max entry 1, or all zero
    bool degenerate = false;                          // no edges
    bool converged = false;
    int iterations = 0;
};

/// Dominant eigenvector of a symmetric nonnegative adjacency matrix,
/// normalized to unit maximum.
///
/// Iterates on A + I rather than A: the shift leaves eigenvectors unchanged
/// and separates the dominant eigenvalue from -lambda on bipartite graphs
/// (stars, trees), where plain power iteration oscillates. Nodes outside the
/// dominant component decay towards zero.
template <typename Derived>
CentralityResult<typename Derived::Scalar>
eigenvector_centrality(const Eigen::MatrixBase<Derived>& adjacency,
                       typename Derived::Scalar tolerance = typename Derived::Scalar(1e-10),
                       int max_iterations = 10000) {
    using Scalar = typename Derived::Scalar;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const Eigen::Index n = adjacency.rows();
    CentralityResult<Scalar> result;
    result.values = Vector::Zero(n);
    if (n == 0 || adjacency.cwiseAbs().maxCoeff() == Scalar(0)) {
        result.degenerate = true;
        result.converged = true;
        return result;
    }

    Vector x = Vector::Ones(n);
    Vector next(n);
    for (int it = 1; it <= max_iterations; ++it) {
        next.noalias() = adjacency * x;
        next += x;
        next /= next.maxCoeff();
        const Scalar change = (next - x).cwiseAbs().maxCoeff();
        x.swap(next);
        result.iterations = it;
        if (change <= tolerance) {
            result.converged = true;
            break;
        }
    }
    // Components that lost the race keep a residue of order
    // ((lambda2 + 1) / (lambda1 + 1))^iterations; flush it.
    result.values = (x.array() < tolerance).select(Scalar(0), x);
    return result;
}

// ---------------------------------------------------------------------------
// Multiplex network
// ---------------------------------------------------------------------------

/// Link weight of an existing edge on one layer: homophily times the mean
/// centrality of the endpoints.
inline double link_weight(double homophily, double centrality_i, double centrality_j) {
    return homophily * 0.5 * (centrality_i + centrality_j);
}

struct MultiplexNetwork {
    std::vector<Eigen::MatrixXd> adjacency;   // per layer, 0/1
    Eigen::MatrixXd delta;
    Eigen::MatrixXd homophily;
    std::vector<Eigen::VectorXd> centrality;  // per layer, unit max
    std::vector<Eigen::MatrixXd> weights;     // per layer, zero off-edge
    std::vector<Eigen::MatrixXd> z_layers;    // h o A_alpha
    Eigen::MatrixXd aggregated;               // 0/1, edge on any layer
    double interlayer_strength = 1.0;

    // neighbours[layer][node], ascending node ids
    std::vector<std::vector<std::vector<int>>> neighbours;

    int node_count() const { return static_cast<int>(delta.rows()); }
    int layer_count() const { return static_cast<int>(adjacency.size()); }

    const std::vector<int>& neighbours_of(int layer, int node) const {
        return neighbours[static_cast<std::size_t>(layer)][static_cast<std::size_t>(node)];
    }
    int degree(int layer, int node) const {
        return static_cast<int>(neighbours_of(layer, node).size());
    }
    /// Sum of layer degrees.
    int multiplex_degree(int node) const;
    /// Degree on the aggregated graph.
    int aggregated_degree(int node) const;
    double mean_degree(int layer) const;
};

/// Derives everything else (h, centralities, weights, Z, aggregated graph,
/// neighbour lists) from the layer adjacencies and the distance matrix.
MultiplexNetwork assemble_multiplex(std::vector<Eigen::MatrixXd> adjacency,
                                    Eigen::MatrixXd delta, double interlayer_strength);

MultiplexNetwork build_multiplex(const MultiplexSpec& spec);

} // namespace megt
