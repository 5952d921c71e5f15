#include "megt/comm.hpp"

#include <fstream>
#include <iomanip>

namespace megt {

Eigen::MatrixXd build_supra(const MultiplexNetwork& net, double omega) {
    if (!(omega >= 0.0)) throw ParameterError("inter-layer strength must be >= 0");
    return supra_matrix<double>(std::span<const Eigen::MatrixXd>(net.z_layers), omega);
}

Communicability::Communicability(Eigen::MatrixXd g, int nodes, int layers)
    : g_(std::move(g)), nodes_(nodes), layers_(layers) {
    if (g_.rows() != static_cast<Eigen::Index>(nodes) * layers || g_.cols() != g_.rows()) {
        throw ParameterError("communicability matrix has the wrong shape");
    }
}

Communicability Communicability::of(const MultiplexNetwork& net) {
    return Communicability(matrix_exp(build_supra(net, net.interlayer_strength)), net.node_count(),
                           net.layer_count());
}

void write_dense_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

CrossLayerNeighbourhood::CrossLayerNeighbourhood(const MultiplexNetwork& net,
                                                 const Communicability& comm)
    : nodes_(net.node_count()) {
    const int m = net.layer_count();
    offsets_.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(nodes_) + 1);
    offsets_.push_back(0);
    for (int alpha = 0; alpha < m; ++alpha) {
        for (int i = 0; i < nodes_; ++i) {
            for (int beta = 0; beta < m; ++beta) {
                if (beta == alpha) continue;
                entries_.push_back({beta, i, comm(alpha, i, beta, i)});
                for (int j : net.neighbours_of(beta, i)) {
                    entries_.push_back({beta, j, comm(alpha, i, beta, j)});
                }
            }
            offsets_.push_back(entries_.size());
        }
    }
}

double CrossLayerNeighbourhood::same_strategy_fraction(int layer, int node,
                                                       const StrategyTable& strategies) const {
    const Strategy own = strategies(node, layer);
    double same = 0.0;
    double total = 0.0;
    for (const auto& e : of(layer, node)) {
        total += e.communicability;
        if (strategies(e.node, e.layer) == own) same += e.communicability;
    }
    return total > 0.0 ? same / total : 0.0;
}

double eta(int node, int layer, const Communicability& comm, const StrategyTable& strategies,
           const MultiplexNetwork& net, const EtaBounds& bounds) {
    bounds.validate();
    const Strategy own = strategies(node, layer);
    double same = 0.0;
    double total = 0.0;
    for (int beta = 0; beta < net.layer_count(); ++beta) {
        if (beta == layer) continue;
        auto visit = [&](int j) {
            const double g = comm(layer, node, beta, j);
            total += g;
            if (strategies(j, beta) == own) same += g;
        };
        visit(node);
        for (int j : net.neighbours_of(beta, node)) visit(j);
    }
    if (!(total > 0.0)) return 1.0;
    return eta_from_fraction(same / total, bounds);
}

} // namespace megt
