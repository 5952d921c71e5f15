#include "megt/crowdsense.hpp"

#include "megt/error.hpp"
#include "megt/rng.hpp"

#include <algorithm>
#include <cstdio>

namespace megt::crowdsense {

namespace {

constexpr std::array<std::string_view, 30> kStreets{
    "Massachusetts Ave", "Boylston St",       "Commonwealth Ave", "Beacon St",     "Tremont St",
    "Washington St",     "Cambridge St",      "Huntington Ave",   "Columbus Ave",  "Storrow Dr",
    "Atlantic Ave",      "Congress St",       "Summer St",        "Dorchester Ave", "Blue Hill Ave",
    "Centre St",         "Hyde Park Ave",     "Morrissey Blvd",   "Columbia Rd",   "Brookline Ave",
    "Park Dr",           "Jamaicaway",        "Arborway",         "Soldiers Field Rd", "Charles St",
    "Hanover St",        "Seaport Blvd",      "Melnea Cass Blvd", "American Legion Hwy", "VFW Pkwy"};

// Relative activity per 3-hour segment; peaks at the morning and evening rush.
constexpr std::array<double, kSegmentsPerDay> kSegmentActivity{0.25, 0.5, 1.6, 1.0, 1.0, 1.6, 1.1, 0.6};

struct Incident {
    std::string_view street;
    IncidentType type;
};

IncidentType draw_type(Rng& rng) {
    const double u = uniform01(rng);
    if (u < 0.55) return IncidentType::Jam;
    if (u < 0.75) return IncidentType::Accident;
    if (u < 0.9) return IncidentType::WeatherHazard;
    return IncidentType::RoadClosure;
}

struct Profile {
    Archetype kind;
    double rate;  // report probability per window at unit activity
};

double draw_rating(Archetype kind, Rng& rng) {
    const double u = uniform01(rng);
    switch (kind) {
    case Archetype::Honest: return u < 0.65 ? 5.0 : 4.0;
    case Archetype::Selfish: return u < 0.5 ? 4.0 : 5.0;
    case Archetype::Malicious: return u < 0.3 ? 0.0 : u < 0.65 ? 1.0 : 2.0;
    }
    return 0.0;
}

std::string hex_id(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

std::string_view to_string(Archetype a) {
    switch (a) {
    case Archetype::Honest: return "honest";
    case Archetype::Selfish: return "selfish";
    case Archetype::Malicious: return "malicious";
    }
    return "?";
}

void SynthSpec::validate() const {
    if (users < 0) throw ParameterError("users must be >= 0");
    if (days < 1) throw ParameterError("days must be >= 1");
    if (!start_date.ok()) throw ParameterError("start date is not a valid calendar date");
    for (double f : {honest_fraction, selfish_fraction, malicious_fraction}) {
        if (!(f >= 0.0)) throw ParameterError("archetype fractions must be >= 0");
    }
    const double total = honest_fraction + selfish_fraction + malicious_fraction;
    if (std::abs(total - 1.0) > 1e-9) throw ParameterError("archetype fractions must sum to 1");
    if (streets < 1 || streets > static_cast<int>(kStreets.size())) {
        throw ParameterError("streets must lie in [1, " + std::to_string(kStreets.size()) + "]");
    }
}

SyntheticCorpus synth_corpus(const SynthSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, {kStreamCorpus}));
    SyntheticCorpus corpus;

    // Archetype counts are rounded; any remainder goes to honest users.
    const int n_selfish = static_cast<int>(std::lround(spec.selfish_fraction * spec.users));
    const int n_malicious = std::min(spec.users - n_selfish,
                                     static_cast<int>(std::lround(spec.malicious_fraction * spec.users)));
    std::vector<Profile> profiles;
    std::vector<std::string> ids;
    for (int u = 0; u < spec.users; ++u) {
        Profile p{Archetype::Honest, 0.0};
        if (u < n_malicious) p.kind = Archetype::Malicious;
        else if (u < n_malicious + n_selfish) p.kind = Archetype::Selfish;
        switch (p.kind) {
        case Archetype::Honest: p.rate = 0.15 + 0.2 * uniform01(rng); break;
        case Archetype::Selfish: p.rate = 0.01 + 0.03 * uniform01(rng); break;
        case Archetype::Malicious: p.rate = 0.2 + 0.2 * uniform01(rng); break;
        }
        profiles.push_back(p);
    }
    // Shuffle so archetypes are not contiguous in the output.
    std::shuffle(profiles.begin(), profiles.end(), rng);
    for (int u = 0; u < spec.users; ++u) {
        ids.push_back(hex_id(derive_seed(spec.seed, {kStreamCorpus, static_cast<std::uint64_t>(u)})));
        corpus.archetypes[ids.back()] = profiles[static_cast<std::size_t>(u)].kind;
    }

    const auto streets = std::span(kStreets).first(static_cast<std::size_t>(spec.streets));
    std::size_t serial = 0;
    auto emit = [&](const Date& date, int segment, std::string_view street, IncidentType type,
                    const std::string& uuid, double rating) {
        ReportRecord r;
        char id[24];
        std::snprintf(id, sizeof id, "r%08zu", ++serial);
        r.object_id = id;
        r.generation_date = date;
        r.day_time = std::chrono::seconds{segment * 3 * 3600 + static_cast<int>(uniform_index(rng, 3 * 3600))};
        r.street = std::string(street);
        r.incident_type = type;
        r.uuid = uuid;
        r.report_rating = rating;
        corpus.rows.push_back(std::move(r));
    };

    for (int d = 0; d < spec.days; ++d) {
        const Date date{std::chrono::sys_days{spec.start_date} + std::chrono::days{d}};
        for (int seg = 0; seg < kSegmentsPerDay; ++seg) {
            const double activity = kSegmentActivity[static_cast<std::size_t>(seg)];
            // Incidents actually happening in this window; honest users report these.
            std::vector<Incident> incidents(1 + uniform_index(rng, static_cast<std::size_t>(2 + 4 * activity)));
            for (auto& inc : incidents) inc = {streets[uniform_index(rng, streets.size())], draw_type(rng)};

            for (int u = 0; u < spec.users; ++u) {
                const auto& p = profiles[static_cast<std::size_t>(u)];
                if (!bernoulli(rng, std::min(0.95, p.rate * activity))) continue;
                const auto& uuid = ids[static_cast<std::size_t>(u)];
                if (p.kind == Archetype::Malicious) {
                    const Incident fake{streets[uniform_index(rng, streets.size())], draw_type(rng)};
                    emit(date, seg, fake.street, fake.type, uuid, draw_rating(p.kind, rng));
                    if (bernoulli(rng, 0.25)) emit(date, seg, fake.street, fake.type, uuid, draw_rating(p.kind, rng));
                } else {
                    const auto& inc = incidents[uniform_index(rng, incidents.size())];
                    emit(date, seg, inc.street, inc.type, uuid, draw_rating(p.kind, rng));
                }
            }
        }
    }
    return corpus;
}

} // namespace megt::crowdsense
