#include "features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

#include "io_util.hpp"

namespace engage {

namespace {

void one_hot(std::vector<double>& out, int index, int width) {
    const std::size_t base = out.size();
    out.resize(base + static_cast<std::size_t>(width), 0.0);
    if (index >= 0 && index < width) out[base + static_cast<std::size_t>(index)] = 1.0;
}

// Capped and scaled to [0, 1] so the margin learners stay well conditioned.
double hours_between(std::int64_t now, std::int64_t then) {
    if (then < 0) return 1.0;
    const double h = static_cast<double>(now - then) / 3600.0;
    return std::min(std::max(h, 0.0), kIntervalCapHours) / kIntervalCapHours;
}

} // namespace

int FeatureSchema::dimension() const {
    int d = 0;
    for (const auto& b : blocks) d += b.width;
    return d;
}

std::string FeatureSchema::digest() const {
    std::ostringstream os;
    for (const auto& b : blocks) os << b.name << ':' << b.width << ':' << b.numeric << ';';
    return fnv1a_hex(os.str());
}

std::vector<bool> FeatureSchema::numeric_mask() const {
    std::vector<bool> mask;
    for (const auto& b : blocks)
        for (int i = 0; i < b.width; ++i) mask.push_back(b.numeric);
    return mask;
}

std::vector<std::string> FeatureSchema::slot_block_names() const {
    std::vector<std::string> names;
    for (const auto& b : blocks)
        for (int i = 0; i < b.width; ++i) names.push_back(b.name);
    return names;
}

FeatureSchema generic_schema(int num_categories) {
    const int C = num_categories;
    FeatureSchema s;
    s.blocks = {
        {"age", kNumAgeBands, false},
        {"gender", 2, false},
        {"device_type", 2, false},
        {"os", 2, false},
        {"total_app_usage_duration", 1, true},
        {"total_app_usage_frequency", 1, true},
        {"total_unique_app_amount", 1, true},
        {"hour", 24, false},
        {"weekday", 7, false},
        {"app_preference_last_day", C, true},
        {"app_preference_last_hour", C, true},
        {"app_preference_last_session", C, true},
        {"last_used_app", C + 1, false},
        {"second_last_used_app", C + 1, false},
        {"periodic_feature", C, true},
        {"historical_app_preference", C, true},
    };
    return s;
}

FeatureSchema engagement_schema(int num_categories) {
    const int C = num_categories;
    FeatureSchema s;
    s.blocks = {
        {"age", kNumAgeBands, false},
        {"gender", 2, false},
        {"device_type", 2, false},
        {"total_app_usage_duration", 1, true},
        {"total_app_usage_frequency", 1, true},
        {"total_unique_app_amount", 1, true},
        {"hour", 24, false},
        {"weekday", 7, false},
        {"last_used_app", C + 1, false},
        {"last_engagement_level", C, true},
        {"periodic_feature", C, true},
        {"historical_engagement_levels", C, true},
        // Predicted-category slots follow; they are rebuilt when a model
        // substitutes its own category at prediction time.
        {"last_engagement_level_predicted", 1, true},
        {"periodic_feature_predicted", 1, true},
        {"historical_level_light", 1, true},
        {"historical_level_medium", 1, true},
        {"historical_level_intensive", 1, true},
    };
    return s;
}

int PersonalSchema::app_index(const std::string& app) const {
    auto it = std::lower_bound(apps.begin(), apps.end(), app);
    if (it == apps.end() || *it != app) return -1;
    return static_cast<int>(it - apps.begin());
}

PersonalSchema fit_personal_schema(const std::vector<std::string>& train_apps) {
    PersonalSchema p;
    std::set<std::string> uniq(train_apps.begin(), train_apps.end());
    p.apps.assign(uniq.begin(), uniq.end());
    const int V = static_cast<int>(p.apps.size());
    p.schema.blocks = {
        {"hour", 24, false},
        {"weekday", 7, false},
        {"last_used_app", V + 1, false},
        {"second_last_used_app", V + 1, false},
        {"periodic_feature", V, true},
    };
    return p;
}

std::vector<double> assemble_engagement_vector(const EngagementSnapshot& snapshot,
                                               int predicted_category) {
    const int C = static_cast<int>(snapshot.last_level_code.size());
    if (predicted_category < 0 || predicted_category >= C)
        throw DataError("unknown predicted category: " + std::to_string(predicted_category));
    std::vector<double> x = snapshot.common;
    x.push_back(static_cast<double>(snapshot.last_level_code[predicted_category]));
    x.push_back(snapshot.hours_since[predicted_category]);
    const auto& counts = snapshot.level_counts[predicted_category];
    x.push_back(std::log1p(counts[0]));
    x.push_back(std::log1p(counts[1]));
    x.push_back(std::log1p(counts[2]));
    return x;
}

PredictionContext::PredictionContext(int num_categories, const UserProfile& profile)
    : num_categories_(num_categories),
      profile_(profile),
      category_last_use_(num_categories, -1),
      category_counts_(num_categories, 0.0),
      category_last_level_(num_categories, 0),
      category_level_sum_(num_categories, 0.0),
      category_level_counts_(num_categories, {0.0, 0.0, 0.0}),
      current_session_counts_(num_categories, 0.0),
      previous_session_counts_(num_categories, 0.0) {}

void PredictionContext::consume(const DwellRecord& record, EngagementLevel level) {
    records_consumed_++;
    total_dwell_ += record.dwell_seconds;
    app_counts_[record.app_id] += 1;
    app_last_use_[record.app_id] = record.start;

    second_last_category_ = last_category_;
    last_category_ = record.category;
    second_last_app_ = last_app_;
    last_app_ = record.app_id;

    const auto cat = static_cast<std::size_t>(record.category);
    category_last_use_[cat] = record.start;
    category_counts_[cat] += 1.0;
    category_last_level_[cat] = static_cast<int>(level) + 1;
    category_level_sum_[cat] += static_cast<double>(static_cast<int>(level) + 1);
    category_level_counts_[cat][static_cast<std::size_t>(level)] += 1.0;

    recent_.emplace_back(record.start, record.category);
    while (!recent_.empty() && recent_.front().first < record.start - 86400)
        recent_.pop_front();

    if (record.session_index != current_session_) {
        previous_session_counts_ = current_session_counts_;
        std::fill(current_session_counts_.begin(), current_session_counts_.end(), 0.0);
        current_session_ = record.session_index;
    }
    current_session_counts_[cat] += 1.0;
}

std::vector<double> PredictionContext::generic_features(std::int64_t now, int hour,
                                                        int weekday) const {
    const int C = num_categories_;
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(generic_schema(C).dimension()));

    one_hot(x, static_cast<int>(profile_.age_band), kNumAgeBands);
    one_hot(x, static_cast<int>(profile_.gender), 2);
    one_hot(x, static_cast<int>(profile_.device_type), 2);
    one_hot(x, static_cast<int>(profile_.os), 2);
    x.push_back(std::log1p(total_dwell_));
    x.push_back(std::log1p(static_cast<double>(records_consumed_)));
    x.push_back(std::log1p(static_cast<double>(app_counts_.size())));
    one_hot(x, hour, 24);
    one_hot(x, weekday, 7);

    std::vector<double> last_day(C, 0.0), last_hour(C, 0.0);
    for (const auto& [t, cat] : recent_) {
        if (t >= now) continue; // strict past only
        if (t >= now - 86400) last_day[static_cast<std::size_t>(cat)] += 1.0;
        if (t >= now - 3600) last_hour[static_cast<std::size_t>(cat)] += 1.0;
    }
    x.insert(x.end(), last_day.begin(), last_day.end());
    x.insert(x.end(), last_hour.begin(), last_hour.end());
    // "Last session": the most recently completed session before the target's
    // current one.
    x.insert(x.end(), previous_session_counts_.begin(), previous_session_counts_.end());
    one_hot(x, last_category_ < 0 ? C : last_category_, C + 1);
    one_hot(x, second_last_category_ < 0 ? C : second_last_category_, C + 1);
    for (int c = 0; c < C; ++c)
        x.push_back(hours_between(now, category_last_use_[static_cast<std::size_t>(c)]));
    for (int c = 0; c < C; ++c)
        x.push_back(std::log1p(category_counts_[static_cast<std::size_t>(c)]));
    return x;
}

EngagementSnapshot PredictionContext::engagement_snapshot(std::int64_t now, int hour,
                                                          int weekday) const {
    const int C = num_categories_;
    EngagementSnapshot snap;
    auto& x = snap.common;
    one_hot(x, static_cast<int>(profile_.age_band), kNumAgeBands);
    one_hot(x, static_cast<int>(profile_.gender), 2);
    one_hot(x, static_cast<int>(profile_.device_type), 2);
    x.push_back(std::log1p(total_dwell_));
    x.push_back(std::log1p(static_cast<double>(records_consumed_)));
    x.push_back(std::log1p(static_cast<double>(app_counts_.size())));
    one_hot(x, hour, 24);
    one_hot(x, weekday, 7);
    one_hot(x, last_category_ < 0 ? C : last_category_, C + 1);
    for (int c = 0; c < C; ++c)
        x.push_back(static_cast<double>(category_last_level_[static_cast<std::size_t>(c)]));
    for (int c = 0; c < C; ++c)
        x.push_back(hours_between(now, category_last_use_[static_cast<std::size_t>(c)]));
    for (int c = 0; c < C; ++c) {
        const auto& counts = category_level_counts_[static_cast<std::size_t>(c)];
        const double n = counts[0] + counts[1] + counts[2];
        x.push_back(n == 0.0 ? 0.0 : category_level_sum_[static_cast<std::size_t>(c)] / n);
    }

    snap.last_level_code = category_last_level_;
    snap.hours_since.reserve(static_cast<std::size_t>(C));
    for (int c = 0; c < C; ++c)
        snap.hours_since.push_back(hours_between(now, category_last_use_[static_cast<std::size_t>(c)]));
    snap.level_counts = category_level_counts_;
    return snap;
}

std::vector<double> PredictionContext::personal_features(const PersonalSchema& schema,
                                                         std::int64_t now, int hour,
                                                         int weekday) const {
    const int V = static_cast<int>(schema.apps.size());
    std::vector<double> x;
    one_hot(x, hour, 24);
    one_hot(x, weekday, 7);
    const int last = last_app_.empty() ? -1 : schema.app_index(last_app_);
    one_hot(x, last < 0 ? V : last, V + 1);
    const int second = second_last_app_.empty() ? -1 : schema.app_index(second_last_app_);
    one_hot(x, second < 0 ? V : second, V + 1);
    for (const auto& app : schema.apps) {
        auto it = app_last_use_.find(app);
        x.push_back(hours_between(now, it == app_last_use_.end() ? -1 : it->second));
    }
    return x;
}

std::vector<const PredictionInstance*> InstanceSet::train() const {
    std::vector<const PredictionInstance*> out;
    for (const auto& i : instances)
        if (i.is_train) out.push_back(&i);
    return out;
}

std::vector<const PredictionInstance*> InstanceSet::test() const {
    std::vector<const PredictionInstance*> out;
    for (const auto& i : instances)
        if (!i.is_train) out.push_back(&i);
    return out;
}

InstanceSet make_instances(const SessionizedCorpus& corpus, const QuantileTable& table,
                           const std::map<std::string, std::size_t>& train_counts) {
    const int C = corpus.taxonomy.size();
    InstanceSet set;
    set.generic = generic_schema(C);
    set.engagement = engagement_schema(C);

    for (const auto& [user, su] : corpus.users) {
        auto tc = train_counts.find(user);
        if (tc == train_counts.end()) continue;
        const std::size_t n_train = tc->second;

        std::vector<std::string> train_apps;
        for (std::size_t k = 0; k < std::min(n_train, su.records.size()); ++k)
            train_apps.push_back(su.records[k].app_id);
        const PersonalSchema personal = fit_personal_schema(train_apps);

        PredictionContext ctx(C, corpus.profiles.at(user));
        for (std::size_t k = 0; k < su.records.size(); ++k) {
            const auto& rec = su.records[k];
            const EngagementLevel level = label_engagement(rec, table);
            if (k > 0) {
                PredictionInstance inst;
                inst.user_id = user;
                inst.record_index = static_cast<int>(k);
                inst.is_train = k < n_train;
                inst.start = rec.start;
                inst.hour = rec.hour_of_day;
                inst.weekday = rec.day_of_week;
                inst.x_generic = ctx.generic_features(rec.start, rec.hour_of_day, rec.day_of_week);
                inst.x_personal =
                    ctx.personal_features(personal, rec.start, rec.hour_of_day, rec.day_of_week);
                inst.engagement =
                    ctx.engagement_snapshot(rec.start, rec.hour_of_day, rec.day_of_week);
                inst.label_category = rec.category;
                inst.label_app = rec.app_id;
                inst.label_level = level;
                set.instances.push_back(std::move(inst));
            }
            ctx.consume(rec, level);
        }
        set.personal.emplace(user, personal);
    }
    return set;
}

std::string instances_to_csv(const InstanceSet& set) {
    std::ostringstream os;
    os << "user_id,record_index,is_train,label_category,label_app,label_level";
    const auto names = set.generic.slot_block_names();
    std::map<std::string, int> seen;
    for (const auto& n : names) os << ",g_" << n << '_' << seen[n]++;
    os << '\n';
    for (const auto& i : set.instances) {
        os << i.user_id << ',' << i.record_index << ',' << (i.is_train ? 1 : 0) << ','
           << i.label_category << ',' << i.label_app << ','
           << static_cast<int>(i.label_level);
        for (double v : i.x_generic) os << ',' << format_double(v);
        os << '\n';
    }
    return os.str();
}

std::string instance_to_json(const PredictionInstance& instance) {
    nlohmann::ordered_json j;
    j["user_id"] = instance.user_id;
    j["record_index"] = instance.record_index;
    j["is_train"] = instance.is_train;
    j["x_generic"] = instance.x_generic;
    j["x_personal"] = instance.x_personal;
    j["engagement"]["common"] = instance.engagement.common;
    j["engagement"]["last_level_code"] = instance.engagement.last_level_code;
    j["engagement"]["hours_since"] = instance.engagement.hours_since;
    nlohmann::ordered_json counts = nlohmann::ordered_json::array();
    for (const auto& c : instance.engagement.level_counts)
        counts.push_back(std::vector<double>(c.begin(), c.end()));
    j["engagement"]["level_counts"] = std::move(counts);
    j["label_category"] = instance.label_category;
    j["label_app"] = instance.label_app;
    j["label_level"] = static_cast<int>(instance.label_level);
    j["start"] = instance.start;
    j["hour"] = instance.hour;
    j["weekday"] = instance.weekday;
    return j.dump();
}

PredictionInstance instance_from_json(const std::string& json) {
    PredictionInstance inst;
    try {
        const auto j = nlohmann::json::parse(json);
        inst.user_id = j.at("user_id").get<std::string>();
        inst.record_index = j.value("record_index", -1);
        inst.is_train = j.value("is_train", false);
        inst.x_generic = j.at("x_generic").get<std::vector<double>>();
        inst.x_personal = j.value("x_personal", std::vector<double>{});
        const auto& e = j.at("engagement");
        inst.engagement.common = e.at("common").get<std::vector<double>>();
        inst.engagement.last_level_code = e.at("last_level_code").get<std::vector<int>>();
        inst.engagement.hours_since = e.at("hours_since").get<std::vector<double>>();
        for (const auto& c : e.at("level_counts")) {
            const auto v = c.get<std::vector<double>>();
            if (v.size() != 3) throw DataError("level_counts rows must have 3 entries");
            inst.engagement.level_counts.push_back({v[0], v[1], v[2]});
        }
        inst.label_category = j.value("label_category", -1);
        inst.label_app = j.value("label_app", std::string());
        const int level = j.value("label_level", 0);
        if (level < 0 || level > 2) throw DataError("label_level out of range");
        inst.label_level = static_cast<EngagementLevel>(level);
        inst.start = j.value("start", std::int64_t{0});
        inst.hour = j.value("hour", 0);
        inst.weekday = j.value("weekday", 0);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("instance is not valid JSON: ") + e.what());
    }
    const std::size_t c = inst.engagement.last_level_code.size();
    if (inst.engagement.hours_since.size() != c || inst.engagement.level_counts.size() != c)
        throw DataError("engagement snapshot arrays disagree on category count");
    return inst;
}

} // namespace engage
