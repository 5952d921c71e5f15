#include "megt/crowdsense.hpp"

#include "megt/error.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace megt::crowdsense {

namespace {

template <class Map, class Key>
const typename Map::mapped_type& at_or_empty(const Map& map, const Key& key) {
    static const typename Map::mapped_type empty{};
    const auto it = map.find(key);
    return it == map.end() ? empty : it->second;
}

} // namespace

std::string_view to_string(IncidentType t) {
    switch (t) {
    case IncidentType::Accident: return "accident";
    case IncidentType::Jam: return "jam";
    case IncidentType::RoadClosure: return "road_closure";
    case IncidentType::WeatherHazard: return "weather_hazard";
    }
    return "?";
}

std::optional<IncidentType> parse_incident_type(std::string_view name) {
    for (auto t : kIncidentTypes) {
        if (to_string(t) == name) return t;
    }
    return std::nullopt;
}

std::string_view to_string(RejectReason r) {
    switch (r) {
    case RejectReason::ZeroRating: return "zero_rating";
    case RejectReason::Duplicate: return "duplicate";
    case RejectReason::Malformed: return "malformed";
    }
    return "?";
}

std::string_view to_string(Mechanism m) {
    switch (m) {
    case Mechanism::A: return "A";
    case Mechanism::B: return "B";
    case Mechanism::C: return "C";
    }
    return "?";
}

Mechanism parse_mechanism(std::string_view name) {
    if (name == "A" || name == "a") return Mechanism::A;
    if (name == "B" || name == "b") return Mechanism::B;
    if (name == "C" || name == "c") return Mechanism::C;
    throw ParameterError("mechanism must be A, B or C");
}

WindowIndex assign_window(const ReportRecord& r) {
    const auto secs = r.day_time.count();
    if (secs < 0 || secs >= 24 * 3600) throw ParameterError("time of day outside [00:00, 24:00)");
    return {r.generation_date, static_cast<int>(secs / (3 * 3600))};
}

ParsedReports filter_reports(std::vector<ReportRecord> records, std::vector<Rejection> rejections,
                             std::span<const std::size_t> row_numbers) {
    ParsedReports out;
    out.rejections = std::move(rejections);
    std::set<std::tuple<std::string, WindowIndex, IncidentType>> seen;
    for (std::size_t k = 0; k < records.size(); ++k) {
        auto& r = records[k];
        const std::size_t row = k < row_numbers.size() ? row_numbers[k] : k + 1;
        if (r.report_rating == 0.0) {
            out.rejections.push_back({row, r.object_id, RejectReason::ZeroRating, ""});
            continue;
        }
        if (!seen.emplace(r.uuid, assign_window(r), r.incident_type).second) {
            out.rejections.push_back({row, r.object_id, RejectReason::Duplicate, ""});
            continue;
        }
        out.kept.push_back(std::move(r));
    }
    std::stable_sort(out.rejections.begin(), out.rejections.end(),
                     [](const Rejection& a, const Rejection& b) { return a.row < b.row; });
    return out;
}

double truthfulness(double rating, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ParameterError("epsilon must lie in (0, 0.5)");
    return std::clamp(rating / 5.0, epsilon, 1.0 - epsilon);
}

double qoc(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw NumericError("qoc needs tau in (0, 1)");
    return std::log(tau / (1.0 - tau));
}

std::vector<std::pair<std::string, std::string>> neighbours(const WindowStats& window) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (auto a = window.users.begin(); a != window.users.end(); ++a) {
        for (auto b = std::next(a); b != window.users.end(); ++b) pairs.emplace_back(*a, *b);
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// CorpusIndex
// ---------------------------------------------------------------------------

CorpusIndex::CorpusIndex(std::span<const ReportRecord> kept, double epsilon) : reports_(kept) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ParameterError("epsilon must lie in (0, 0.5)");
    if (kept.empty()) return;

    double sum = 0.0;
    for (const auto& r : kept) sum += r.report_rating;
    mean_rating_ = sum / static_cast<double>(kept.size());

    auto [first, last] = std::minmax_element(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return std::chrono::sys_days{a.generation_date} < std::chrono::sys_days{b.generation_date};
    });
    const auto days = (std::chrono::sys_days{last->generation_date} -
                       std::chrono::sys_days{first->generation_date}).count() + 1;
    window_count_ = static_cast<std::size_t>(days) * kSegmentsPerDay;

    for (std::size_t k = 0; k < kept.size(); ++k) {
        const auto& r = kept[k];
        const auto w = assign_window(r);
        auto& stats = windows_[w];
        ++stats.kept_reports;
        stats.users.insert(r.uuid);
        auto [it, fresh] = by_user_.try_emplace(r.uuid);
        if (fresh) users_.push_back(r.uuid);
        it->second.push_back(k);
        if (coop_flag(r.report_rating, mean_rating_)) {
            ++stats.coop_reports;
            coop_windows_[r.uuid].insert(w);
        }
    }

    double total = 0.0;
    for (const auto& [w, stats] : windows_) {
        const double raw = 1.0 / std::max(stats.coop_density(), epsilon);
        weights_[w] = raw;
        total += raw;
    }
    const double mean = total / static_cast<double>(windows_.size());
    for (auto& [w, v] : weights_) v /= mean;
}

double CorpusIndex::density_weight(const WindowIndex& w) const {
    const auto it = weights_.find(w);
    return it == weights_.end() ? 0.0 : it->second;
}

const std::vector<std::size_t>& CorpusIndex::reports_of(const std::string& user) const {
    return at_or_empty(by_user_, user);
}

const std::set<WindowIndex>& CorpusIndex::coop_windows_of(const std::string& user) const {
    return at_or_empty(coop_windows_, user);
}

double empirical_gamma(const std::string& user, Mechanism mechanism, const CorpusIndex& index) {
    if (mechanism == Mechanism::A) return 1.0;
    if (index.window_count() == 0) throw ParameterError("empirical gamma needs at least one window");
    const auto& coop = index.coop_windows_of(user);
    const auto n_w = static_cast<double>(index.window_count());
    if (mechanism == Mechanism::B) return static_cast<double>(coop.size()) / n_w;
    double weighted = 0.0;
    for (const auto& w : coop) weighted += index.density_weight(w);
    return weighted / n_w;
}

CompositeScore composite_rs(std::span<const double> extended_qocs) {
    CompositeScore s;
    s.raw = std::accumulate(extended_qocs.begin(), extended_qocs.end(), 0.0);
    s.normalized = logistic(s.raw);
    return s;
}

// ---------------------------------------------------------------------------
// Decision support
// ---------------------------------------------------------------------------

std::map<IncidentType, double> confidences(const RegionReports& region,
                                           const std::map<std::string, double>& rs_norm, double nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) throw ParameterError("preference factor nu must lie in [0, 1]");
    auto rs_of = [&](const std::string& u) {
        const auto it = rs_norm.find(u);
        return it == rs_norm.end() ? kPositiveReputation : it->second;
    };

    std::size_t positive = 0;
    for (const auto& u : region.users) positive += rs_of(u) >= kPositiveReputation ? 1 : 0;

    std::map<IncidentType, double> rs_agg;
    double rs_total = 0.0;
    for (const auto& [type, users] : region.contributors) {
        double s = 0.0;
        for (const auto& u : users) s += rs_of(u);
        rs_agg[type] = s;
        rs_total += s;
    }

    std::map<IncidentType, double> out;
    for (const auto& [type, users] : region.contributors) {
        if (positive == 0) {
            out[type] = 0.0;
            continue;
        }
        const double quantity = static_cast<double>(users.size()) / static_cast<double>(positive);
        const double quality = rs_total > 0.0 ? rs_agg[type] / rs_total : 0.0;
        out[type] = nu * quantity + (1.0 - nu) * quality;
    }
    return out;
}

double confidence(IncidentType type, const RegionReports& region,
                  const std::map<std::string, double>& rs_norm, double nu) {
    const auto all = confidences(region, rs_norm, nu);
    const auto it = all.find(type);
    return it == all.end() ? 0.0 : it->second;
}

Decision decide_publish(const std::map<IncidentType, double>& confidences, double theta) {
    Decision d;
    bool any = false;
    for (auto t : kIncidentTypes) {
        const auto it = confidences.find(t);
        if (it == confidences.end()) continue;
        if (!any || it->second > d.confidence) {
            d.event_type = t;
            d.confidence = it->second;
            any = true;
        }
    }
    d.publish = any && d.confidence >= theta;
    return d;
}

std::vector<double> incentives(std::span<const double> rs_norm, double budget) {
    if (!(budget >= 0.0)) throw ParameterError("budget must be >= 0");
    std::vector<double> out(rs_norm.size(), 0.0);
    if (rs_norm.empty()) return out;
    double positive_sum = 0.0;
    std::size_t positive = 0;
    for (double r : rs_norm) {
        if (r >= kPositiveReputation) {
            positive_sum += r;
            ++positive;
        }
    }
    if (positive == 0) return out;
    const double pot = budget * static_cast<double>(positive) / static_cast<double>(rs_norm.size());
    for (std::size_t i = 0; i < rs_norm.size(); ++i) {
        if (rs_norm[i] >= kPositiveReputation) out[i] = rs_norm[i] / positive_sum * pot;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

void ScoreConfig::validate() const {
    if (!(budget >= 0.0)) throw ParameterError("budget must be >= 0");
    if (!(nu >= 0.0 && nu <= 1.0)) throw ParameterError("nu must lie in [0, 1]");
    if (!(theta >= 0.0 && theta <= 1.0)) throw ParameterError("theta must lie in [0, 1]");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ParameterError("epsilon must lie in (0, 0.5)");
    if (mechanisms.empty()) throw ParameterError("at least one mechanism is required");
    if (std::find(mechanisms.begin(), mechanisms.end(), primary) == mechanisms.end()) {
        throw ParameterError("primary mechanism must be among the scored mechanisms");
    }
}

ScoreResult score_corpus(std::span<const ReportRecord> kept, const ScoreConfig& config) {
    config.validate();
    const CorpusIndex index(kept, config.epsilon);

    ScoreResult result;
    result.mean_rating = index.mean_rating();
    result.window_count = index.window_count();
    result.ledgers.resize(index.users().size());

    std::vector<double> qocs(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        qocs[k] = qoc(truthfulness(kept[k].report_rating, config.epsilon));
    }

    for (auto mech : config.mechanisms) {
        const auto slot = mechanism_slot(mech);
        std::vector<double> rs(index.users().size());
        std::vector<double> extended;
        for (std::size_t u = 0; u < index.users().size(); ++u) {
            const auto& user = index.users()[u];
            auto& ledger = result.ledgers[u];
            ledger.user_id = user;
            const double gamma = empirical_gamma(user, mech, index);
            extended.clear();
            for (auto k : index.reports_of(user)) extended.push_back(qoc_extended(qocs[k], gamma));
            const auto score = composite_rs(extended);
            ledger.gamma[slot] = gamma;
            ledger.rs_raw[slot] = score.raw;
            ledger.rs_norm[slot] = score.normalized;
            rs[u] = score.normalized;
        }
        const auto pay = incentives(rs, config.budget);
        for (std::size_t u = 0; u < pay.size(); ++u) result.ledgers[u].incentive[slot] = pay[u];
    }

    std::map<std::string, double> primary_rs;
    for (const auto& l : result.ledgers) primary_rs[l.user_id] = l.rs_norm[mechanism_slot(config.primary)];

    std::map<std::pair<WindowIndex, std::string>, RegionReports> regions;
    for (const auto& r : kept) {
        auto& region = regions[{assign_window(r), r.street}];
        region.contributors[r.incident_type].insert(r.uuid);
        region.users.insert(r.uuid);
    }
    result.decisions.reserve(regions.size());
    for (const auto& [key, region] : regions) {
        result.decisions.push_back(
            {key.first, key.second, decide_publish(confidences(region, primary_rs, config.nu), config.theta)});
    }
    return result;
}

std::size_t distinct_levels(std::span<const double> values, double resolution) {
    if (!(resolution > 0.0)) throw ParameterError("resolution must be > 0");
    if (values.empty()) return 0;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t levels = 1;
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        if (sorted[k] - sorted[k - 1] > resolution) ++levels;
    }
    return levels;
}

} // namespace megt::crowdsense
