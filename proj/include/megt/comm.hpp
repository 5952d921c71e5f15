#pragma once

#include "megt/error.hpp"
#include "megt/games.hpp"
#include "megt/netgen.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <span>
#include <vector>

namespace megt {

// ---------------------------------------------------------------------------
// Supra-matrix
// ---------------------------------------------------------------------------

/// Block matrix with the per-layer matrices on the diagonal and omega * I in
/// every off-diagonal block.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
supra_matrix(std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> layers,
             Scalar omega) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (layers.empty()) return Matrix();
    const Eigen::Index n = layers.front().rows();
    const Eigen::Index m = static_cast<Eigen::Index>(layers.size());
    Matrix out = Matrix::Zero(n * m, n * m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            if (a == b) {
                out.block(a * n, a * n, n, n) = layers[static_cast<std::size_t>(a)];
            } else {
                out.block(a * n, b * n, n, n).diagonal().setConstant(omega);
            }
        }
    }
    return out;
}

/// Supra-matrix of the homophily-masked layers Z_alpha.
Eigen::MatrixXd build_supra(const MultiplexNetwork& net, double omega);

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

namespace detail {

/// Taylor polynomial sum_{k<=degree} X^k / k! by Paterson-Stockmeyer.
template <typename Matrix>
Matrix taylor_polynomial(const Matrix& x, int degree) {
    using Scalar = typename Matrix::Scalar;
    const Eigen::Index n = x.rows();
    const int block = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(degree)))));

    std::vector<Scalar> coeff(static_cast<std::size_t>(degree) + 1);
    coeff[0] = Scalar(1);
    for (int k = 1; k <= degree; ++k) coeff[static_cast<std::size_t>(k)] = coeff[static_cast<std::size_t>(k) - 1] / Scalar(k);

    std::vector<Matrix> powers;  // X^0 .. X^block
    powers.reserve(static_cast<std::size_t>(block) + 1);
    powers.push_back(Matrix::Identity(n, n));
    powers.push_back(x);
    for (int k = 2; k <= block; ++k) {
        Matrix next(n, n);
        next.noalias() = powers.back() * x;
        powers.push_back(std::move(next));
    }

    // sum_j (X^block)^j * B_j with B_j = sum_{r<block} c_{j*block+r} X^r
    const int chunks = degree / block;
    auto chunk = [&](int j) {
        Matrix b = Matrix::Zero(n, n);
        for (int r = 0; r < block; ++r) {
            const int k = j * block + r;
            if (k > degree) break;
            b += coeff[static_cast<std::size_t>(k)] * powers[static_cast<std::size_t>(r)];
        }
        return b;
    };
    Matrix acc = chunk(chunks);
    Matrix tmp(n, n);
    for (int j = chunks - 1; j >= 0; --j) {
        tmp.noalias() = acc * powers.back();
        acc = tmp + chunk(j);
    }
    return acc;
}

} // namespace detail

/// exp(A) by scaling and squaring: A is scaled by 2^-s so its 1-norm is at
/// most 1/2, a degree-16 Taylor polynomial is evaluated (truncation error
/// below 1e-19 relative), and the result is squared s times.
template <typename Derived>
typename Derived::PlainObject matrix_exp(const Eigen::MatrixBase<Derived>& a) {
    using Matrix = typename Derived::PlainObject;
    using Scalar = typename Derived::Scalar;
    if (a.rows() != a.cols()) throw ParameterError("matrix_exp needs a square matrix");
    if (!a.allFinite()) throw NumericError("matrix_exp input has non-finite entries");
    const Eigen::Index n = a.rows();
    if (n == 0) return Matrix(0, 0);

    const Scalar norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > Scalar(0.5)) {
        squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(norm) / 0.5)));
    }
    const Matrix scaled = a.derived() * std::ldexp(Scalar(1), -squarings);
    Matrix result = detail::taylor_polynomial(scaled, 16);
    Matrix tmp(n, n);
    for (int s = 0; s < squarings; ++s) {
        tmp.noalias() = result * result;
        result.swap(tmp);
    }
    if (!result.allFinite()) throw NumericError("matrix_exp overflowed");
    return result;
}

// ---------------------------------------------------------------------------
// Communicability
// ---------------------------------------------------------------------------

class Communicability {
public:
    Communicability() = default;
    Communicability(Eigen::MatrixXd g, int nodes, int layers);

    /// exp of the network's supra-matrix.
    static Communicability of(const MultiplexNetwork& net);

    int nodes() const { return nodes_; }
    int layers() const { return layers_; }
    const Eigen::MatrixXd& matrix() const { return g_; }

    /// [G_alpha_beta]
    auto block(int alpha, int beta) const {
        return g_.block(alpha * nodes_, beta * nodes_, nodes_, nodes_);
    }
    /// [G_alpha_beta]_ij
    double operator()(int alpha, int i, int beta, int j) const {
        return g_(alpha * nodes_ + i, beta * nodes_ + j);
    }

private:
    Eigen::MatrixXd g_;
    int nodes_ = 0;
    int layers_ = 0;
};

/// Dense CSV, row-major, 17 significant digits.
void write_dense_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

// ---------------------------------------------------------------------------
// Inter-layer scaling factor eta
// ---------------------------------------------------------------------------

struct EtaBounds {
    double eta_min = 0.5;
    double eta_max = 1.0;

    void validate() const {
        if (!(eta_min > 0.0 && eta_min <= eta_max && eta_max <= 1.0)) {
            throw ParameterError("eta bounds must satisfy 0 < eta_min <= eta_max <= 1");
        }
    }
    double range() const { return eta_max - eta_min; }
};

inline double eta_from_fraction(double same_strategy_fraction, const EtaBounds& bounds) {
    return 1.0 - bounds.range() * same_strategy_fraction;
}

/// For every (layer alpha, node i), the communicability entries towards the
/// cross-layer neighbourhood of i: on each layer beta != alpha, the
/// counterpart of i and the neighbours of that counterpart. G does not depend
/// on strategies, so this is built once per network.
class CrossLayerNeighbourhood {
public:
    struct Entry {
        int layer;
        int node;
        double communicability;
    };

    CrossLayerNeighbourhood() = default;
    CrossLayerNeighbourhood(const MultiplexNetwork& net, const Communicability& comm);

    std::span<const Entry> of(int layer, int node) const {
        const auto k = slot(layer, node);
        return {entries_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }

    /// Communicability-weighted fraction of the neighbourhood playing the
    /// same strategy as (node, layer). Zero when the neighbourhood is empty.
    double same_strategy_fraction(int layer, int node, const StrategyTable& strategies) const;

    double eta(int layer, int node, const StrategyTable& strategies, const EtaBounds& bounds) const {
        return eta_from_fraction(same_strategy_fraction(layer, node, strategies), bounds);
    }

private:
    std::size_t slot(int layer, int node) const {
        return static_cast<std::size_t>(layer) * static_cast<std::size_t>(nodes_) +
               static_cast<std::size_t>(node);
    }

    int nodes_ = 0;
    std::vector<Entry> entries_;
    std::vector<std::size_t> offsets_;
};

/// eta_i on layer alpha. Returns 1 (neutral) when i has no cross-layer
/// neighbourhood or its communicability sums to zero.
double eta(int node, int layer, const Communicability& comm, const StrategyTable& strategies,
           const MultiplexNetwork& net, const EtaBounds& bounds);

} // namespace megt
