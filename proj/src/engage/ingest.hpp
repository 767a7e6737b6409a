#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "taxonomy.hpp"
#include "types.hpp"

namespace engage {

enum class LogFormat { Csv, Jsonl };

LogFormat parse_log_format(const std::string& s);

struct Corpus {
    Taxonomy taxonomy;
    std::map<std::string, UserProfile> profiles;
    // Per-user event sequences, time-sorted (stable on ties).
    std::map<std::string, std::vector<UsageEvent>> events;
    std::string source_digest;
    std::size_t row_count = 0;
    std::size_t malformed_rows = 0;
    std::size_t dropped_background_rows = 0;

    std::size_t event_count() const;
};

struct ParseOptions {
    // Malformed rows beyond this count abort the parse.
    std::size_t malformed_tolerance = 0;
    // Empty -> taxonomy inferred from the file (sorted unique category names).
    std::vector<std::string> taxonomy_names;
};

/// CSV columns (exact order): user_id, timestamp, app_id, category,
/// duration_seconds, age_band, gender, device_type, os[, user_triggered].
/// JSONL carries the same keys, one object per line.
Corpus parse_log(const std::filesystem::path& path, LogFormat format,
                 const ParseOptions& options = {});

/// Keep only users whose events span >= min_categories distinct categories.
Corpus filter_engaged_users(const Corpus& corpus, int min_categories = 5);

} // namespace engage
