#include "ingest.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include <json.hpp>

#include "io_util.hpp"

namespace engage {

namespace {

const std::vector<std::string> kColumns = {
    "user_id", "timestamp", "app_id", "category", "duration_seconds",
    "age_band", "gender", "device_type", "os"};

std::int64_t parse_i64(const std::string& s, const char* what, std::size_t row) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DataError("row " + std::to_string(row) + ": unparseable " + what + " '" + s + "'");
    return v;
}

double parse_f64(const std::string& s, const char* what, std::size_t row) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(s, &consumed);
        if (consumed != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("row " + std::to_string(row) + ": unparseable " + what + " '" + s + "'");
    }
}

struct RawRow {
    std::string user_id, app_id, category;
    std::int64_t timestamp = 0;
    double duration = 0.0;
    UserProfile profile;
    bool user_triggered = true;
};

bool parse_bool(const std::string& s, std::size_t row) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw DataError("row " + std::to_string(row) + ": unparseable user_triggered '" + s + "'");
}

RawRow row_from_fields(const std::vector<std::string>& f, bool has_triggered, std::size_t row) {
    RawRow r;
    r.user_id = f[0];
    r.timestamp = parse_i64(f[1], "timestamp", row);
    r.app_id = f[2];
    r.category = f[3];
    r.duration = parse_f64(f[4], "duration_seconds", row);
    if (r.duration < 0.0)
        throw DataError("row " + std::to_string(row) + ": negative duration_seconds");
    try {
        r.profile.user_id = r.user_id;
        r.profile.age_band = parse_age_band(f[5]);
        r.profile.gender = parse_gender(f[6]);
        r.profile.device_type = parse_device_type(f[7]);
        r.profile.os = parse_os(f[8]);
    } catch (const DataError& e) {
        throw DataError("row " + std::to_string(row) + ": " + e.what());
    }
    if (has_triggered) r.user_triggered = parse_bool(f[9], row);
    return r;
}

RawRow row_from_json(const std::string& line, std::size_t row) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
        throw DataError("row " + std::to_string(row) + ": invalid JSON: " + e.what());
    }
    std::vector<std::string> f;
    for (const auto& col : kColumns) {
        if (!j.contains(col))
            throw DataError("row " + std::to_string(row) + ": missing column '" + col + "'");
        const auto& v = j.at(col);
        if (v.is_string())
            f.push_back(v.get<std::string>());
        else
            f.push_back(v.dump());
    }
    const bool has_triggered = j.contains("user_triggered");
    if (has_triggered) f.push_back(j.at("user_triggered").is_boolean()
                                       ? (j.at("user_triggered").get<bool>() ? "true" : "false")
                                       : j.at("user_triggered").dump());
    return row_from_fields(f, has_triggered, row);
}

} // namespace

LogFormat parse_log_format(const std::string& s) {
    if (s == "csv") return LogFormat::Csv;
    if (s == "jsonl") return LogFormat::Jsonl;
    throw UsageError("unknown log format: '" + s + "'");
}

std::size_t Corpus::event_count() const {
    std::size_t n = 0;
    for (const auto& [user, evs] : events) n += evs.size();
    return n;
}

Corpus parse_log(const std::filesystem::path& path, LogFormat format,
                 const ParseOptions& options) {
    const std::string content = read_file(path);

    Corpus corpus;
    corpus.source_digest = fnv1a_hex(content);

    std::istringstream in(content);
    std::string line;
    std::size_t row = 0;
    bool has_triggered = false;

    if (format == LogFormat::Csv) {
        if (!std::getline(in, line)) throw DataError("empty log file: " + path.string());
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto header = split_csv_line(line);
        if (header.size() < kColumns.size())
            throw DataError("missing column: header has " + std::to_string(header.size()) +
                            " fields, expected at least " + std::to_string(kColumns.size()));
        for (std::size_t i = 0; i < kColumns.size(); ++i)
            if (header[i] != kColumns[i])
                throw DataError("missing column '" + kColumns[i] + "' at position " +
                                std::to_string(i) + " (got '" + header[i] + "')");
        has_triggered = header.size() > kColumns.size() && header[kColumns.size()] == "user_triggered";
        row = 1;
    }

    std::vector<RawRow> rows;
    std::set<std::string> category_names;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            RawRow r;
            if (format == LogFormat::Csv) {
                const auto f = split_csv_line(line);
                const std::size_t expected = kColumns.size() + (has_triggered ? 1 : 0);
                if (f.size() != expected)
                    throw DataError("row " + std::to_string(row) + ": expected " +
                                    std::to_string(expected) + " fields, got " +
                                    std::to_string(f.size()));
                r = row_from_fields(f, has_triggered, row);
            } else {
                r = row_from_json(line, row);
            }
            corpus.row_count++;
            if (!r.user_triggered) {
                corpus.dropped_background_rows++;
                continue;
            }
            category_names.insert(r.category);
            rows.push_back(std::move(r));
        } catch (const DataError& e) {
            corpus.malformed_rows++;
            if (corpus.malformed_rows > options.malformed_tolerance)
                throw DataError(std::string(e.what()) + " (malformed rows exceed tolerance " +
                                std::to_string(options.malformed_tolerance) + ")");
        }
    }

    if (!options.taxonomy_names.empty()) {
        corpus.taxonomy = Taxonomy(options.taxonomy_names);
    } else {
        corpus.taxonomy = Taxonomy(
            std::vector<std::string>(category_names.begin(), category_names.end()));
    }

    for (auto& r : rows) {
        const int cat = corpus.taxonomy.find(r.category);
        if (cat < 0) throw DataError("unknown category '" + r.category + "' not in taxonomy");
        UsageEvent ev;
        ev.user_id = r.user_id;
        ev.timestamp = r.timestamp;
        ev.app_id = std::move(r.app_id);
        ev.category = cat;
        ev.duration_seconds = r.duration;
        corpus.events[ev.user_id].push_back(std::move(ev));
        corpus.profiles.emplace(r.user_id, r.profile);
    }
    // Stable sort keeps input order on timestamp ties.
    for (auto& [user, evs] : corpus.events)
        std::stable_sort(evs.begin(), evs.end(),
                         [](const UsageEvent& a, const UsageEvent& b) { return a.timestamp < b.timestamp; });
    return corpus;
}

Corpus filter_engaged_users(const Corpus& corpus, int min_categories) {
    if (min_categories < 1) throw UsageError("min_categories must be >= 1");
    Corpus out;
    out.taxonomy = corpus.taxonomy;
    out.source_digest = corpus.source_digest;
    out.row_count = corpus.row_count;
    out.malformed_rows = corpus.malformed_rows;
    out.dropped_background_rows = corpus.dropped_background_rows;
    for (const auto& [user, evs] : corpus.events) {
        std::set<int> cats;
        for (const auto& e : evs) cats.insert(e.category);
        if (static_cast<int>(cats.size()) >= min_categories) {
            out.events.emplace(user, evs);
            out.profiles.emplace(user, corpus.profiles.at(user));
        }
    }
    return out;
}

} // namespace engage
