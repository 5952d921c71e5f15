#include "megt/crowdsense.hpp"

#include "megt/error.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <iterator>
#include <ostream>

namespace megt::crowdsense {

namespace {

template <class T>
std::optional<T> parse_number(std::string_view s) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// RFC 4180 records: quoted fields may hold commas, doubled quotes and
/// line breaks. Yields (first physical line, fields) per record.
class CsvReader {
public:
    explicit CsvReader(std::istream& in)
        : text_(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()) {}

    bool next(std::vector<std::string>& fields, std::size_t& line, std::string& error) {
        fields.clear();
        error.clear();
        // Skip blank lines.
        while (pos_ < text_.size() && (text_[pos_] == '\n' || text_[pos_] == '\r')) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
        if (pos_ >= text_.size()) return false;
        line = line_;
        std::string field;
        bool quoted = false;
        bool was_quoted = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_++];
            if (quoted) {
                if (c == '"') {
                    if (pos_ < text_.size() && text_[pos_] == '"') {
                        field += '"';
                        ++pos_;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') ++line_;
                    field += c;
                }
                continue;
            }
            if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                was_quoted = false;
            } else if (c == '"') {
                if (!field.empty() || was_quoted) error = "stray quote";
                quoted = was_quoted = true;
            } else if (c == '\n') {
                ++line_;
                break;
            } else if (c != '\r') {
                if (was_quoted) error = "text after closing quote";
                field += c;
            }
        }
        if (quoted) error = "unterminated quote";
        fields.push_back(std::move(field));
        return true;
    }

private:
    std::string text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::optional<ReportRecord> parse_row(const std::vector<std::string>& f, std::string& why) {
    if (f.size() != 7) {
        why = "expected 7 fields, got " + std::to_string(f.size());
        return std::nullopt;
    }
    ReportRecord r;
    r.object_id = f[0];
    r.street = f[3];
    r.uuid = f[5];
    if (r.object_id.empty()) why = "empty object_id";
    else if (r.uuid.empty()) why = "empty uuid";
    if (!why.empty()) return std::nullopt;

    const auto date = parse_date(f[1]);
    if (!date) {
        why = "bad generation_date '" + f[1] + "'";
        return std::nullopt;
    }
    r.generation_date = *date;
    const auto time = parse_time_of_day(f[2]);
    if (!time) {
        why = "bad day_time '" + f[2] + "'";
        return std::nullopt;
    }
    r.day_time = *time;
    const auto type = parse_incident_type(f[4]);
    if (!type) {
        why = "unknown incident_type '" + f[4] + "'";
        return std::nullopt;
    }
    r.incident_type = *type;
    const auto rating = parse_number<double>(f[6]);
    if (!rating || !(*rating >= 0.0 && *rating <= 5.0)) {
        why = "report_rating '" + f[6] + "' outside [0, 5]";
        return std::nullopt;
    }
    r.report_rating = *rating;
    return r;
}

} // namespace

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    const auto y = parse_number<int>(text.substr(0, 4));
    const auto m = parse_number<unsigned>(text.substr(5, 2));
    const auto d = parse_number<unsigned>(text.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    const Date date{std::chrono::year{*y}, std::chrono::month{*m}, std::chrono::day{*d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::optional<std::chrono::seconds> parse_time_of_day(std::string_view text) {
    if (text.size() != 5 && text.size() != 8) return std::nullopt;
    if (text[2] != ':' || (text.size() == 8 && text[5] != ':')) return std::nullopt;
    const auto h = parse_number<int>(text.substr(0, 2));
    const auto m = parse_number<int>(text.substr(3, 2));
    const auto s = text.size() == 8 ? parse_number<int>(text.substr(6, 2)) : std::optional<int>(0);
    if (!h || !m || !s || *h < 0 || *h > 23 || *m < 0 || *m > 59 || *s < 0 || *s > 59) return std::nullopt;
    return std::chrono::seconds{*h * 3600 + *m * 60 + *s};
}

std::string format_time_of_day(std::chrono::seconds t) {
    const auto s = t.count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", static_cast<long long>(s / 3600),
                  static_cast<long long>(s / 60 % 60), static_cast<long long>(s % 60));
    return buf;
}

ParsedReports parse_reports(std::istream& in) {
    CsvReader csv(in);
    std::vector<std::string> fields;
    std::size_t line = 0;
    std::string error;
    if (!csv.next(fields, line, error)) return {};

    std::string header;
    for (std::size_t k = 0; k < fields.size(); ++k) header += (k ? "," : "") + fields[k];
    if (!error.empty() || header != kReportHeader) {
        throw DataError("line " + std::to_string(line) + ": header must be '" + std::string(kReportHeader) + "'");
    }

    std::vector<ReportRecord> records;
    std::vector<std::size_t> rows;
    std::vector<Rejection> rejections;
    std::size_t row = 0;
    while (csv.next(fields, line, error)) {
        ++row;
        std::string why = error;
        std::optional<ReportRecord> rec;
        if (why.empty()) rec = parse_row(fields, why);
        if (!rec) {
            rejections.push_back({row, fields.empty() ? "" : fields[0], RejectReason::Malformed,
                                  "line " + std::to_string(line) + ": " + why});
            continue;
        }
        records.push_back(std::move(*rec));
        rows.push_back(row);
    }
    return filter_reports(std::move(records), std::move(rejections), rows);
}

void write_reports(std::ostream& out, std::span<const ReportRecord> records) {
    out << kReportHeader << '\n';
    char rating[32];
    for (const auto& r : records) {
        std::snprintf(rating, sizeof rating, "%g", r.report_rating);
        out << csv_field(r.object_id) << ',' << format_date(r.generation_date) << ','
            << format_time_of_day(r.day_time) << ',' << csv_field(r.street) << ','
            << to_string(r.incident_type) << ',' << csv_field(r.uuid) << ',' << rating << '\n';
    }
}

} // namespace megt::crowdsense
