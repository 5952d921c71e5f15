#include "megt/games.hpp"

#include <algorithm>

namespace megt {

std::string_view to_string(DilemmaKind kind) {
    switch (kind) {
    case DilemmaKind::PD: return "PD";
    case DilemmaKind::SD: return "SD";
    case DilemmaKind::SH: return "SH";
    case DilemmaKind::HG: return "HG";
    case DilemmaKind::Other: return "OTHER";
    }
    return "OTHER";
}

DilemmaKind classify(const PayoffMatrix& m) {
    const double r = m.reward, s = m.sucker, t = m.temptation, p = m.punishment;
    if (t > r && r > p && p > s) return DilemmaKind::PD;
    if (t > r && r > s && s > p) return DilemmaKind::SD;
    if (r > t && t > p && p > s) return DilemmaKind::SH;
    if (r > s && s > p && r > t && t > p) return DilemmaKind::HG;
    return DilemmaKind::Other;
}

PayoffMatrix from_ts(double temptation, double sucker) {
    return {1.0, sucker, temptation, 0.0};
}

PayoffMatrix pd_from_bc(double benefit, double cost) {
    return {1.0, -cost, benefit, 0.0};
}

std::pair<double, double> pairwise_payoff(Strategy row, Strategy col, const PayoffMatrix& m) {
    return {row_payoff(row, col, m), row_payoff(col, row, m)};
}

std::size_t StrategyTable::cooperator_count() const {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), Strategy::Cooperate));
}

} // namespace megt
