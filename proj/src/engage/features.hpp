#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "analytics.hpp"
#include "quantiles.hpp"
#include "sessionize.hpp"

namespace engage {

/// Interval features are capped at one week and scaled to [0, 1]; "never
/// used" encodes as the cap.
constexpr double kIntervalCapHours = 168.0;

struct FeatureBlock {
    std::string name;
    int width = 1;
    bool numeric = false; // true -> candidate for 2*std coefficient scaling
};

struct FeatureSchema {
    std::vector<FeatureBlock> blocks;
    int dimension() const;
    std::string digest() const;
    /// Per-slot flag: true when the slot holds a numeric (non-binary) value.
    std::vector<bool> numeric_mask() const;
    /// Slot index -> owning block name.
    std::vector<std::string> slot_block_names() const;
};

/// Population-level next-category schema; fixed by the taxonomy size.
FeatureSchema generic_schema(int num_categories);

/// Engagement-level schema; common slots plus predicted-category slots.
FeatureSchema engagement_schema(int num_categories);

/// Per-user next-app schema over that user's training app vocabulary.
struct PersonalSchema {
    std::vector<std::string> apps; // sorted, stable
    FeatureSchema schema;
    int app_index(const std::string& app) const; // -1 -> unknown slot
};

PersonalSchema fit_personal_schema(const std::vector<std::string>& train_apps);

/// Predicted-category-independent slice of the engagement features, kept so a
/// model-chosen category can be substituted at prediction time.
struct EngagementSnapshot {
    std::vector<double> common;                       // shared slots, in schema order
    std::vector<int> last_level_code;                 // per category, 0 none / 1..3
    std::vector<double> hours_since;                  // per category, capped, /168
    std::vector<std::array<double, 3>> level_counts;  // per category histogram
};

std::vector<double> assemble_engagement_vector(const EngagementSnapshot& snapshot,
                                               int predicted_category);

/// Causal per-user replay state. Consume records in time order; every query
/// reflects only records consumed so far (the strict past of the target).
class PredictionContext {
public:
    PredictionContext(int num_categories, const UserProfile& profile);

    void consume(const DwellRecord& record, EngagementLevel level);

    std::vector<double> generic_features(std::int64_t now, int hour, int weekday) const;
    EngagementSnapshot engagement_snapshot(std::int64_t now, int hour, int weekday) const;
    std::vector<double> personal_features(const PersonalSchema& schema, std::int64_t now,
                                          int hour, int weekday) const;

    int records_consumed() const { return records_consumed_; }
    int last_category() const { return last_category_; }
    const std::string& last_app() const { return last_app_; }

private:
    int num_categories_;
    UserProfile profile_;
    int records_consumed_ = 0;

    double total_dwell_ = 0.0;
    std::map<std::string, int> app_counts_; // also the unique-app set
    std::map<std::string, std::int64_t> app_last_use_;

    int last_category_ = -1;
    int second_last_category_ = -1;
    std::string last_app_;
    std::string second_last_app_;

    std::vector<std::int64_t> category_last_use_;     // -1 when never
    std::vector<double> category_counts_;
    std::vector<int> category_last_level_;            // 0 none, 1..3
    std::vector<double> category_level_sum_;
    std::vector<std::array<double, 3>> category_level_counts_;

    std::deque<std::pair<std::int64_t, int>> recent_; // (start, category), last 24h window
    int current_session_ = -1;
    std::vector<double> current_session_counts_;
    std::vector<double> previous_session_counts_;
};

struct PredictionInstance {
    std::string user_id;
    int record_index = -1; // into SessionizedUser::records
    bool is_train = false;

    std::vector<double> x_generic;
    std::vector<double> x_personal;
    EngagementSnapshot engagement;

    int label_category = -1;
    std::string label_app;
    EngagementLevel label_level = EngagementLevel::Light;

    std::int64_t start = 0;
    int hour = 0;
    int weekday = 0;
};

struct InstanceSet {
    FeatureSchema generic;
    FeatureSchema engagement;
    std::map<std::string, PersonalSchema> personal; // users with any train records
    std::vector<PredictionInstance> instances;      // grouped by user, time order

    std::vector<const PredictionInstance*> train() const;
    std::vector<const PredictionInstance*> test() const;
};

/// One instance per dwell record with at least one preceding record for its
/// user. train_counts gives, per user, how many of the user's first records
/// belong to the training split; personal vocabularies come from those.
InstanceSet make_instances(const SessionizedCorpus& corpus, const QuantileTable& table,
                           const std::map<std::string, std::size_t>& train_counts);

/// Columnar CSV for external inspection (schema header row).
std::string instances_to_csv(const InstanceSet& set);

/// Round-trippable JSON form of one instance, used by the prediction API.
std::string instance_to_json(const PredictionInstance& instance);
PredictionInstance instance_from_json(const std::string& json);

} // namespace engage
