#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace megt {

/// Two-player payoff matrix: reward R, sucker S, temptation T, punishment P.
struct PayoffMatrix {
    double reward = 1.0;
    double sucker = 0.0;
    double temptation = 1.0;
    double punishment = 0.0;

    PayoffMatrix scaled(double factor) const {
        return {reward * factor, sucker * factor, temptation * factor, punishment * factor};
    }
    PayoffMatrix shifted(double offset) const {
        return {reward + offset, sucker + offset, temptation + offset, punishment + offset};
    }
};

enum class DilemmaKind { PD, SD, SH, HG, Other };

std::string_view to_string(DilemmaKind kind);

enum class Strategy : std::uint8_t { Defect = 0, Cooperate = 1 };

inline constexpr bool cooperates(Strategy s) { return s == Strategy::Cooperate; }

/// Column encoding: (1,0) for C, (0,1) for D.
inline Eigen::Vector2d encode(Strategy s) {
    return cooperates(s) ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
}

/// Strict payoff ranking. Any tie that breaks a ranking yields Other.
DilemmaKind classify(const PayoffMatrix& m);

/// T-S plane point with R = 1, P = 0.
PayoffMatrix from_ts(double temptation, double sucker);

/// Weak prisoner's dilemma parameterization: R = 1, P = 0, T = b, S = -c.
PayoffMatrix pd_from_bc(double benefit, double cost);

/// Payoffs to (row player, column player).
std::pair<double, double> pairwise_payoff(Strategy row, Strategy col, const PayoffMatrix& m);

/// Payoff to the row player only.
inline double row_payoff(Strategy row, Strategy col, const PayoffMatrix& m) {
    if (cooperates(row)) return cooperates(col) ? m.reward : m.sucker;
    return cooperates(col) ? m.temptation : m.punishment;
}

/// Per-(node, layer) strategies, node-major.
class StrategyTable {
public:
    StrategyTable() = default;
    StrategyTable(int nodes, int layers, Strategy fill = Strategy::Defect)
        : nodes_(nodes), layers_(layers),
          data_(static_cast<std::size_t>(nodes) * static_cast<std::size_t>(layers), fill) {}

    int nodes() const { return nodes_; }
    int layers() const { return layers_; }
    std::size_t size() const { return data_.size(); }

    Strategy& operator()(int node, int layer) { return data_[index(node, layer)]; }
    Strategy operator()(int node, int layer) const { return data_[index(node, layer)]; }

    std::size_t cooperator_count() const;
    void fill(Strategy s) { std::fill(data_.begin(), data_.end(), s); }

    bool operator==(const StrategyTable&) const = default;

private:
    std::size_t index(int node, int layer) const {
        return static_cast<std::size_t>(node) * static_cast<std::size_t>(layers_) +
               static_cast<std::size_t>(layer);
    }

    int nodes_ = 0;
    int layers_ = 0;
    std::vector<Strategy> data_;
};

} // namespace megt
