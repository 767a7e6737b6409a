#pragma once

#include <map>
#include <string>
#include <vector>

#include "analytics.hpp"

namespace engage {

struct BaselinePrediction {
    std::string app;
    EngagementLevel level = EngagementLevel::Light;
    bool has_level = false; // only the tuple baselines predict a level
};

/// Per-user predictions keyed by record index (every index >= 1 gets one).
struct BaselineOutputs {
    std::string name;
    std::map<std::string, std::map<int, BaselinePrediction>> predictions;
};

/// mfu, mru, cpd, bn, svm_context, tuple_mfu, tuple_mru.
const std::vector<std::string>& baseline_names();

/// Replays each user's records in time order. Models that learn (counts,
/// per-user SVMs) see only the user's first train_counts records; context
/// such as the previous app is taken causally from the full stream.
BaselineOutputs run_baseline(const std::string& name, const LabeledCorpus& corpus,
                             const std::map<std::string, std::size_t>& train_counts,
                             std::uint64_t seed = 0);

} // namespace engage
