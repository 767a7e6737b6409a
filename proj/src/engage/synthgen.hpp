#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace engage {

/// Trace generator with planted, manifest-declared structure:
///  - an hour-of-day category routine (the signal the population model learns)
///  - a gender dwell multiplier on one category (descriptive-analytics check)
///  - a daily re-access habit on one category (interval-histogram check)
///  - a pair rule in the evening hours: the category that follows the anchor
///    depends on the engagement level of the anchor usage, which generic
///    features cannot see but engagement features can.
struct GeneratorConfig {
    std::uint64_t seed = 42;
    int num_users = 96;
    int num_days = 7;
    std::int64_t start_timestamp = 1767571200; // 2026-01-05 Mon 00:00 UTC

    std::vector<std::string> categories = {"habit",   "pair_alpha", "pair_beta", "books",
                                           "fitness", "games",      "maps",      "music",
                                           "news",    "shopping",   "social",    "video"};

    int normal_sessions_per_day = 4;
    int min_records_per_session = 3;
    int max_records_per_session = 7;
    std::vector<double> habit_levels = {0.4, 1.0, 2.5};
    double dwell_median_seconds = 90.0;
    double dwell_sigma = 0.65;
    double background_noise_rate = 0.01; // user_triggered=false rows

    std::string gender_plant_category = "shopping";
    double gender_plant_multiplier = 2.0;

    std::string periodic_plant_category = "news";
    int periodic_jitter_minutes = 10;

    std::string pair_anchor = "habit";
    std::string pair_alpha = "pair_alpha";
    std::string pair_beta = "pair_beta";
    int pair_hour_min = 20;
    int pair_hour_max = 23;
    double pair_fidelity = 0.95;
    std::vector<double> anchor_modes_seconds = {8.0, 60.0, 450.0};
    double anchor_sigma = 0.2;
    int pair_session_records = 16; // anchor/pair alternation, even count

    std::string to_json() const;
    static GeneratorConfig from_json(const std::string& json);
};

struct GeneratedTrace {
    std::string csv;      // ingest-ready log
    std::string manifest; // JSON: config echo, planted expectations, digests
    std::size_t row_count = 0;
};

GeneratedTrace generate(const GeneratorConfig& config);

/// Writes <dir>/events.csv and <dir>/manifest.json.
GeneratedTrace generate_to_dir(const GeneratorConfig& config, const std::string& dir);

} // namespace engage
