#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace megt::crowdsense {

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

/// Declared in lexicographic order of their names, which is the tie-break
/// order of the publish decision.
enum class IncidentType { Accident, Jam, RoadClosure, WeatherHazard };

inline constexpr std::array<IncidentType, 4> kIncidentTypes{
    IncidentType::Accident, IncidentType::Jam, IncidentType::RoadClosure, IncidentType::WeatherHazard};

std::string_view to_string(IncidentType t);
std::optional<IncidentType> parse_incident_type(std::string_view name);

using Date = std::chrono::year_month_day;

std::string format_date(const Date& d);
std::optional<Date> parse_date(std::string_view text);                    // YYYY-MM-DD
std::optional<std::chrono::seconds> parse_time_of_day(std::string_view);  // HH:MM[:SS]
std::string format_time_of_day(std::chrono::seconds t);

struct ReportRecord {
    std::string object_id;
    Date generation_date;
    std::chrono::seconds day_time{0};  // since midnight, UTC
    std::string street;
    IncidentType incident_type = IncidentType::Jam;
    std::string uuid;
    double report_rating = 0.0;  // [0, 5]
};

/// One calendar date and one of eight 3-hour segments.
struct WindowIndex {
    Date date;
    int segment = 0;

    auto operator<=>(const WindowIndex&) const = default;
};

inline constexpr int kSegmentsPerDay = 8;

WindowIndex assign_window(const ReportRecord& r);

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

enum class RejectReason { ZeroRating, Duplicate, Malformed };

std::string_view to_string(RejectReason r);

struct Rejection {
    std::size_t row = 0;  // 1-based data row (header excluded)
    std::string object_id;
    RejectReason reason = RejectReason::Malformed;
    std::string detail;
};

struct ParsedReports {
    std::vector<ReportRecord> kept;
    std::vector<Rejection> rejections;
};

inline constexpr std::string_view kReportHeader =
    "object_id,generation_date,day_time,street,incident_type,uuid,report_rating";

/// Drops zero-rated reports, then keeps only the first report per
/// (user, window, incident type). Input order is preserved.
ParsedReports filter_reports(std::vector<ReportRecord> records, std::vector<Rejection> rejections = {},
                             std::span<const std::size_t> row_numbers = {});

/// Parses the CSV (header required, exact column order) and filters it.
/// A wrong header throws DataError; malformed rows are logged and skipped.
ParsedReports parse_reports(std::istream& in);

void write_reports(std::ostream& out, std::span<const ReportRecord> records);

// ---------------------------------------------------------------------------
// Per-report quantities
// ---------------------------------------------------------------------------

inline constexpr double kDefaultEpsilon = 0.01;

/// clamp(rating / 5, eps, 1 - eps)
double truthfulness(double rating, double epsilon = kDefaultEpsilon);

/// ln(tau / (1 - tau)); NumericError outside (0, 1).
double qoc(double tau);

inline double qoc_extended(double q, double gamma) { return gamma * q; }

/// Strictly above the corpus mean.
inline bool coop_flag(double rating, double mean_rating) { return rating > mean_rating; }

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---------------------------------------------------------------------------
// Windows and users
// ---------------------------------------------------------------------------

enum class Mechanism { A, B, C };

inline constexpr std::array<Mechanism, 3> kMechanisms{Mechanism::A, Mechanism::B, Mechanism::C};

std::string_view to_string(Mechanism m);
Mechanism parse_mechanism(std::string_view name);

struct WindowStats {
    std::size_t kept_reports = 0;
    std::size_t coop_reports = 0;
    std::set<std::string> users;
    double coop_density() const {
        return kept_reports ? static_cast<double>(coop_reports) / static_cast<double>(kept_reports) : 0.0;
    }
};

/// All unordered pairs of distinct users active in a window.
std::vector<std::pair<std::string, std::string>> neighbours(const WindowStats& window);

/// Window statistics of a filtered corpus.
class CorpusIndex {
public:
    explicit CorpusIndex(std::span<const ReportRecord> kept, double epsilon = kDefaultEpsilon);

    double mean_rating() const { return mean_rating_; }
    /// Eight windows per calendar day from the first to the last date.
    std::size_t window_count() const { return window_count_; }
    const std::map<WindowIndex, WindowStats>& windows() const { return windows_; }

    /// 1 / max(d_k, eps), rescaled to unit mean over windows with reports.
    double density_weight(const WindowIndex& w) const;

    /// Users in first-appearance order.
    const std::vector<std::string>& users() const { return users_; }
    /// Indices into the kept corpus, per user.
    const std::vector<std::size_t>& reports_of(const std::string& user) const;
    /// Windows in which the user filed at least one cooperative report.
    const std::set<WindowIndex>& coop_windows_of(const std::string& user) const;

    std::span<const ReportRecord> reports() const { return reports_; }

private:
    std::span<const ReportRecord> reports_;
    double mean_rating_ = 0.0;
    std::size_t window_count_ = 0;
    std::map<WindowIndex, WindowStats> windows_;
    std::map<WindowIndex, double> weights_;
    std::vector<std::string> users_;
    std::map<std::string, std::vector<std::size_t>> by_user_;
    std::map<std::string, std::set<WindowIndex>> coop_windows_;
};

/// A: 1. B: share of windows with a cooperative report by the user.
/// C: as B, each window weighted by its inverse cooperative density.
double empirical_gamma(const std::string& user, Mechanism mechanism, const CorpusIndex& index);

struct CompositeScore {
    double raw = 0.0;
    double normalized = 0.5;
};

/// Sum of the extended QoCs, squashed by the logistic map.
CompositeScore composite_rs(std::span<const double> extended_qocs);

inline constexpr double kPositiveReputation = 0.5;

// ---------------------------------------------------------------------------
// Decision support
// ---------------------------------------------------------------------------

/// Reports of one sensing region (street) in one window.
struct RegionReports {
    std::map<IncidentType, std::set<std::string>> contributors;
    std::set<std::string> users;
};

/// C_j = nu * N_agg(j) / U+ + (1 - nu) * RS_agg(j) / sum_j' RS_agg(j').
/// Zero for every type when the region has no positive-reputation user.
std::map<IncidentType, double> confidences(const RegionReports& region,
                                           const std::map<std::string, double>& rs_norm, double nu);

double confidence(IncidentType type, const RegionReports& region,
                  const std::map<std::string, double>& rs_norm, double nu);

struct Decision {
    IncidentType event_type = IncidentType::Accident;  // argmax
    double confidence = 0.0;
    bool publish = false;
};

/// argmax (ties to the lexicographically first type), published iff >= theta.
Decision decide_publish(const std::map<IncidentType, double>& confidences, double theta);

/// I_i = rs_i / sum_{U+} rs * B * U+ / U for rs_i >= 0.5, else 0. U = rs.size().
std::vector<double> incentives(std::span<const double> rs_norm, double budget);

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct ScoreConfig {
    double budget = 1000.0;
    double nu = 0.5;
    double theta = 0.5;
    double epsilon = kDefaultEpsilon;
    std::vector<Mechanism> mechanisms{kMechanisms.begin(), kMechanisms.end()};
    Mechanism primary = Mechanism::C;  // ledger score columns and decisions

    void validate() const;
};

struct UserLedger {
    std::string user_id;
    std::array<double, 3> gamma{};
    std::array<double, 3> rs_raw{};
    std::array<double, 3> rs_norm{0.5, 0.5, 0.5};
    std::array<std::optional<double>, 3> incentive{};
};

struct DecisionRecord {
    WindowIndex window;
    std::string street;
    Decision decision;
};

struct ScoreResult {
    std::vector<UserLedger> ledgers;  // user first-appearance order
    std::vector<DecisionRecord> decisions;
    double mean_rating = 0.0;
    std::size_t window_count = 0;
};

ScoreResult score_corpus(std::span<const ReportRecord> kept, const ScoreConfig& config);

inline std::size_t mechanism_slot(Mechanism m) { return static_cast<std::size_t>(m); }

/// Single-linkage clusters: sorted values split wherever consecutive
/// values are more than `resolution` apart.
std::size_t distinct_levels(std::span<const double> values, double resolution);

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

struct SynthSpec {
    int users = 300;
    int days = 7;
    Date start_date{std::chrono::year{2015}, std::chrono::month{2}, std::chrono::day{23}};
    double honest_fraction = 0.6;
    double selfish_fraction = 0.25;
    double malicious_fraction = 0.15;
    int streets = 30;  // at most the size of the built-in street list
    std::uint64_t seed = 2015;

    void validate() const;
};

enum class Archetype { Honest, Selfish, Malicious };

std::string_view to_string(Archetype a);

struct SyntheticCorpus {
    std::vector<ReportRecord> rows;  // unfiltered, zero ratings and duplicates included
    std::map<std::string, Archetype> archetypes;
};

SyntheticCorpus synth_corpus(const SynthSpec& spec);

} // namespace megt::crowdsense
