#pragma once

#include <map>
#include <string>
#include <vector>

#include "types.hpp"

namespace engage {

/// Chronological per-user split: the first ceil(0.7 * n) records train.
std::map<std::string, std::size_t>
split_per_user(const std::map<std::string, std::size_t>& record_counts, double train_fraction = 0.7);

struct ClassMetrics {
    std::size_t support = 0;
    std::size_t true_positives = 0;
    std::size_t predicted = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricReport {
    std::size_t n = 0;
    double accuracy = 0.0;
    double precision = 0.0; // support weighted
    double recall = 0.0;
    double f1 = 0.0;
    std::map<std::string, ClassMetrics> per_class;
};

/// Support-weighted precision / recall / F1 over arbitrary string labels.
MetricReport score(const std::vector<std::string>& truth,
                   const std::vector<std::string>& predicted);

struct JointOutcome {
    bool app_correct = false;
    bool level_correct = false;
    bool joint_correct = false; // app_correct && level_correct, by construction
};

/// 3x3 level confusion with the share of errors landing on an adjacent level.
struct LevelConfusion {
    std::array<std::array<std::size_t, 3>, 3> counts{};
    std::size_t errors = 0;
    std::size_t adjacent_errors = 0;
    double adjacent_share = 0.0;
};

LevelConfusion confusion_level(const std::vector<EngagementLevel>& truth,
                               const std::vector<EngagementLevel>& predicted);

/// How a corrected model's category calls moved relative to a reference
/// model on the same instances.
struct ErrorAttribution {
    std::size_t n = 0;
    std::size_t reference_wrong = 0;
    std::size_t corrected = 0;   // reference wrong, candidate right
    std::size_t broken = 0;      // reference right, candidate wrong
    std::size_t both_wrong = 0;
    double net_correction_rate = 0.0; // (corrected - broken) / reference_wrong
};

ErrorAttribution error_attribution(const std::vector<int>& truth,
                                   const std::vector<int>& reference,
                                   const std::vector<int>& candidate);

} // namespace engage
