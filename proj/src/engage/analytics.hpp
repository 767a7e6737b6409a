#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "quantiles.hpp"
#include "sessionize.hpp"

namespace engage {

/// Engagement levels per user, parallel to SessionizedUser::records.
struct LabeledCorpus {
    const SessionizedCorpus* base = nullptr;
    std::map<std::string, std::vector<EngagementLevel>> levels;
};

LabeledCorpus label_corpus(const SessionizedCorpus& corpus, const QuantileTable& table);

struct EffectEntry {
    double effect = 1.0;          // larger-mean group in the numerator
    std::string favored_group;
    std::size_t n_favored = 0;    // records in the favored group
    std::size_t n_other = 0;      // records in the comparison group
    bool low_support = false;     // fewer than 30 records in the category
};

struct EffectReport {
    std::map<int, EffectEntry> per_category;
    std::vector<int> skipped; // categories missing one of the groups
};

/// GE(C) = mean dwell of the longer-dwell gender / the other, per category.
EffectReport gender_effect(const SessionizedCorpus& corpus);

/// AG(C) = max over age bands of mean dwell(band) / mean dwell(all users).
EffectReport age_effect(const SessionizedCorpus& corpus);

/// DTE(C), phone vs tablet, analogous to gender_effect.
EffectReport device_effect(const SessionizedCorpus& corpus);

struct DispersionEntry {
    double index = 0.0;   // sigma^2 / mu over the 24 hourly mean dwells
    int populated_hours = 24;
    bool partial_coverage = false;
};

struct DispersionReport {
    std::map<int, DispersionEntry> per_category;
    DispersionEntry global;
};

DispersionReport dispersion_index(const SessionizedCorpus& corpus);

/// Rows: last category i. Columns: dense (next category j, level e), j*3+e.
struct JointTransitionMatrix {
    int num_categories = 0;
    std::map<int, std::vector<double>> rows; // each present row sums to 1
};

struct SigmaReport {
    std::map<std::pair<int, int>, double> sigma_ij; // stddev of P_ij over levels
    std::map<int, double> sigma_j;                  // mean of sigma_ij over rows i
};

/// Transitions between session-adjacent dwell records.
std::pair<JointTransitionMatrix, SigmaReport>
last_app_transitions(const LabeledCorpus& corpus);

/// Per-category 3x3 level transitions between consecutive usages of the same
/// category by the same user. Rows without mass stay zero and are flagged.
struct LevelTransitionMatrix {
    std::array<std::array<double, 3>, 3> p{};       // row-stochastic where counted
    std::array<std::size_t, 3> row_counts{};        // 0 -> row flagged, not a distribution
};

std::map<int, LevelTransitionMatrix>
level_transitions_same_app(const LabeledCorpus& corpus);

/// Re-access intervals of the same category, rounded half-up to whole hours
/// and clamped to 168, split by the level of the next usage.
struct IntervalHistogram {
    std::array<std::vector<std::size_t>, 3> counts_by_level; // each sized 169
};

std::map<int, IntervalHistogram> interval_histograms(const LabeledCorpus& corpus);

int interval_hour_bucket(double interval_seconds); // round half-up, clamp 0..168

} // namespace engage
