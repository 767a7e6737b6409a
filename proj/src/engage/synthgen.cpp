#include "synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "errors.hpp"
#include "io_util.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace engage {

namespace {

struct Row {
    std::int64_t timestamp;
    std::string app;
    std::string category;
    double duration;
    bool user_triggered;
};

struct UserPlan {
    UserProfile profile;
    std::map<std::string, double> habit;         // per-category dwell multiplier
    std::map<std::string, std::string> app;      // primary app per category
    std::string preferred_category;
    std::string preferred_alt_app;               // secondary app, 30% share
    double periodic_hour = 12.0;
};

std::string profile_csv(const UserProfile& p) {
    return to_string(p.age_band) + "," + to_string(p.gender) + "," + to_string(p.device_type) +
           "," + to_string(p.os);
}

void validate_config(const GeneratorConfig& c) {
    if (c.num_users < 1 || c.num_days < 1) throw DataError("generator needs users and days");
    if (c.min_records_per_session < 1 || c.max_records_per_session < c.min_records_per_session)
        throw DataError("bad records-per-session range");
    std::set<std::string> uniq(c.categories.begin(), c.categories.end());
    if (uniq.size() != c.categories.size()) throw DataError("duplicate category names");
    for (const auto& name : {c.gender_plant_category, c.periodic_plant_category, c.pair_anchor,
                             c.pair_alpha, c.pair_beta})
        if (!uniq.count(name)) throw DataError("plant category '" + name + "' not in taxonomy");
    if (c.pair_hour_min < 0 || c.pair_hour_max > 23 || c.pair_hour_min > c.pair_hour_max)
        throw DataError("bad pair hour window");
    if (c.anchor_modes_seconds.size() < 2) throw DataError("anchor needs at least 2 dwell modes");
    if (c.pair_session_records % 2 != 0) throw DataError("pair session record count must be even");
}

} // namespace

std::string GeneratorConfig::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["num_users"] = num_users;
    j["num_days"] = num_days;
    j["start_timestamp"] = start_timestamp;
    j["categories"] = categories;
    j["normal_sessions_per_day"] = normal_sessions_per_day;
    j["min_records_per_session"] = min_records_per_session;
    j["max_records_per_session"] = max_records_per_session;
    j["habit_levels"] = habit_levels;
    j["dwell_median_seconds"] = dwell_median_seconds;
    j["dwell_sigma"] = dwell_sigma;
    j["background_noise_rate"] = background_noise_rate;
    j["gender_plant_category"] = gender_plant_category;
    j["gender_plant_multiplier"] = gender_plant_multiplier;
    j["periodic_plant_category"] = periodic_plant_category;
    j["periodic_jitter_minutes"] = periodic_jitter_minutes;
    j["pair_anchor"] = pair_anchor;
    j["pair_alpha"] = pair_alpha;
    j["pair_beta"] = pair_beta;
    j["pair_hour_min"] = pair_hour_min;
    j["pair_hour_max"] = pair_hour_max;
    j["pair_fidelity"] = pair_fidelity;
    j["anchor_modes_seconds"] = anchor_modes_seconds;
    j["anchor_sigma"] = anchor_sigma;
    j["pair_session_records"] = pair_session_records;
    return j.dump(2);
}

GeneratorConfig GeneratorConfig::from_json(const std::string& json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("generator config is not valid JSON: ") + e.what());
    }
    GeneratorConfig c;
    c.seed = j.value("seed", c.seed);
    c.num_users = j.value("num_users", c.num_users);
    c.num_days = j.value("num_days", c.num_days);
    c.start_timestamp = j.value("start_timestamp", c.start_timestamp);
    c.categories = j.value("categories", c.categories);
    c.normal_sessions_per_day = j.value("normal_sessions_per_day", c.normal_sessions_per_day);
    c.min_records_per_session = j.value("min_records_per_session", c.min_records_per_session);
    c.max_records_per_session = j.value("max_records_per_session", c.max_records_per_session);
    c.habit_levels = j.value("habit_levels", c.habit_levels);
    c.dwell_median_seconds = j.value("dwell_median_seconds", c.dwell_median_seconds);
    c.dwell_sigma = j.value("dwell_sigma", c.dwell_sigma);
    c.background_noise_rate = j.value("background_noise_rate", c.background_noise_rate);
    c.gender_plant_category = j.value("gender_plant_category", c.gender_plant_category);
    c.gender_plant_multiplier = j.value("gender_plant_multiplier", c.gender_plant_multiplier);
    c.periodic_plant_category = j.value("periodic_plant_category", c.periodic_plant_category);
    c.periodic_jitter_minutes = j.value("periodic_jitter_minutes", c.periodic_jitter_minutes);
    c.pair_anchor = j.value("pair_anchor", c.pair_anchor);
    c.pair_alpha = j.value("pair_alpha", c.pair_alpha);
    c.pair_beta = j.value("pair_beta", c.pair_beta);
    c.pair_hour_min = j.value("pair_hour_min", c.pair_hour_min);
    c.pair_hour_max = j.value("pair_hour_max", c.pair_hour_max);
    c.pair_fidelity = j.value("pair_fidelity", c.pair_fidelity);
    c.anchor_modes_seconds = j.value("anchor_modes_seconds", c.anchor_modes_seconds);
    c.anchor_sigma = j.value("anchor_sigma", c.anchor_sigma);
    c.pair_session_records = j.value("pair_session_records", c.pair_session_records);

    validate_config(c);
    return c;
}

namespace {

class Generator {
public:
    explicit Generator(const GeneratorConfig& config) : cfg_(config), rng_(config.seed) {
        for (const auto& cat : cfg_.categories)
            if (cat != cfg_.pair_anchor && cat != cfg_.pair_alpha && cat != cfg_.pair_beta &&
                cat != cfg_.periodic_plant_category)
                normal_.push_back(cat);
        if (normal_.empty()) throw DataError("no categories left for routine sessions");
        for (std::size_t i = 0; i < normal_.size(); ++i)
            home_hour_[normal_[i]] =
                6.0 + (static_cast<double>(i) + 0.5) * 14.0 / static_cast<double>(normal_.size());
    }

    GeneratedTrace run() {
        std::ostringstream csv;
        csv << "user_id,timestamp,app_id,category,duration_seconds,age_band,gender,device_type,"
               "os,user_triggered\n";
        std::size_t rows = 0;
        for (int u = 0; u < cfg_.num_users; ++u) {
            Rng user_rng = rng_.fork(static_cast<std::uint64_t>(u) + 1);
            const auto plan = make_plan(u, user_rng);
            auto user_rows = simulate_user(plan, user_rng);
            std::stable_sort(user_rows.begin(), user_rows.end(),
                             [](const Row& a, const Row& b) { return a.timestamp < b.timestamp; });
            const std::string prof = profile_csv(plan.profile);
            for (const auto& r : user_rows) {
                csv << plan.profile.user_id << ',' << r.timestamp << ',' << r.app << ','
                    << r.category << ',' << format_double(r.duration) << ',' << prof << ','
                    << (r.user_triggered ? "true" : "false") << '\n';
                ++rows;
            }
        }

        GeneratedTrace out;
        out.csv = csv.str();
        out.row_count = rows;

        nlohmann::ordered_json m;
        m["version"] = 1;
        m["config"] = nlohmann::ordered_json::parse(cfg_.to_json());
        m["rows"] = rows;
        m["expected"]["gender_effect"]["category"] = cfg_.gender_plant_category;
        m["expected"]["gender_effect"]["favored_group"] = "female";
        m["expected"]["gender_effect"]["value"] = cfg_.gender_plant_multiplier;
        m["expected"]["periodic_interval"]["category"] = cfg_.periodic_plant_category;
        m["expected"]["periodic_interval"]["peak_bucket_hours"] = 24;
        m["expected"]["pair_rule"]["anchor"] = cfg_.pair_anchor;
        m["expected"]["pair_rule"]["alpha"] = cfg_.pair_alpha;
        m["expected"]["pair_rule"]["beta"] = cfg_.pair_beta;
        m["expected"]["pair_rule"]["hours"] = {cfg_.pair_hour_min, cfg_.pair_hour_max};
        m["expected"]["pair_rule"]["fidelity"] = cfg_.pair_fidelity;
        m["csv_digest"] = fnv1a_hex(out.csv);
        out.manifest = m.dump(2) + "\n";
        return out;
    }

private:
    UserPlan make_plan(int u, Rng& rng) {
        UserPlan plan;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "u%03d", u);
        plan.profile.user_id = buf;
        plan.profile.age_band = static_cast<AgeBand>(rng.uniform_int(0, kNumAgeBands - 1));
        plan.profile.gender = rng.uniform() < 0.5 ? Gender::Male : Gender::Female;
        plan.profile.device_type = rng.uniform() < 0.8 ? DeviceType::Phone : DeviceType::Tablet;
        plan.profile.os = rng.uniform() < 0.7 ? Os::Android : Os::Ios;

        for (const auto& cat : cfg_.categories) {
            plan.app[cat] = cat + "#" + plan.profile.user_id;
            if (cat == cfg_.pair_anchor) {
                plan.habit[cat] = 1.0; // anchor dwell carries no per-user factor
            } else {
                plan.habit[cat] = cfg_.habit_levels[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<int>(cfg_.habit_levels.size()) - 1))];
            }
        }
        plan.preferred_category =
            normal_[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(normal_.size()) - 1))];
        plan.preferred_alt_app = plan.preferred_category + "#" + plan.profile.user_id + "b";
        plan.periodic_hour = rng.uniform(9.0, 17.0);
        return plan;
    }

    double dwell_for(const UserPlan& plan, const std::string& cat, Rng& rng) const {
        double median = cfg_.dwell_median_seconds * plan.habit.at(cat);
        if (cat == cfg_.gender_plant_category && plan.profile.gender == Gender::Female)
            median *= cfg_.gender_plant_multiplier;
        return rng.lognormal(std::log(median), cfg_.dwell_sigma);
    }

    std::string app_for(const UserPlan& plan, const std::string& cat, Rng& rng) const {
        if (cat == plan.preferred_category && rng.uniform() < 0.3) return plan.preferred_alt_app;
        return plan.app.at(cat);
    }

    std::string pick_normal_category(double hour, const UserPlan& plan,
                                     const std::string& previous, Rng& rng) const {
        std::vector<double> weights(normal_.size());
        for (std::size_t i = 0; i < normal_.size(); ++i) {
            const double d = hour - home_hour_.at(normal_[i]);
            double w = 0.55 * std::exp(-0.5 * (d / 1.5) * (d / 1.5));
            if (normal_[i] == plan.preferred_category) w += 0.3;
            w += 0.15 / static_cast<double>(normal_.size());
            weights[i] = w;
        }
        for (int attempt = 0; attempt < 10; ++attempt) {
            const auto& cat = normal_[static_cast<std::size_t>(rng.categorical(weights))];
            if (cat != previous) return cat;
        }
        return normal_[static_cast<std::size_t>(rng.categorical(weights))];
    }

    /// Emits one dwell as 1-3 consecutive raw events of the same app, and
    /// occasionally a background row that ingest must drop. Returns the
    /// timestamp just after the last event.
    std::int64_t emit_record(std::vector<Row>& rows, std::int64_t t, const std::string& app,
                             const std::string& cat, double dwell, Rng& rng) const {
        const int pieces = rng.uniform_int(1, 3);
        std::vector<double> cuts;
        for (int i = 0; i < pieces - 1; ++i) cuts.push_back(rng.uniform(0.2, 0.8));
        std::sort(cuts.begin(), cuts.end());
        double prev = 0.0;
        for (int i = 0; i < pieces; ++i) {
            const double frac = (i == pieces - 1 ? 1.0 : cuts[static_cast<std::size_t>(i)]) - prev;
            prev += frac;
            const double dur = std::max(0.5, dwell * frac);
            rows.push_back({t, app, cat, dur, true});
            t += static_cast<std::int64_t>(std::ceil(dur));
            if (i != pieces - 1) t += rng.uniform_int(5, 60);
        }
        if (rng.uniform() < cfg_.background_noise_rate)
            rows.push_back({t + 1, "system.updater", cat, 0.5, false});
        return t;
    }

    std::vector<Row> simulate_user(const UserPlan& plan, Rng& rng) const {
        std::vector<Row> rows;
        for (int day = 0; day < cfg_.num_days; ++day) {
            const std::int64_t day_start =
                cfg_.start_timestamp + static_cast<std::int64_t>(day) * 86400;

            // (start offset seconds, kind) with kind 0 routine, 1 periodic, 2 pair
            std::vector<std::pair<std::int64_t, int>> slots;
            for (int s = 0; s < cfg_.normal_sessions_per_day; ++s)
                slots.push_back({static_cast<std::int64_t>(rng.uniform(6.0, 19.5) * 3600.0), 0});
            const double jitter =
                rng.uniform(-1.0, 1.0) * static_cast<double>(cfg_.periodic_jitter_minutes) * 60.0;
            slots.push_back(
                {static_cast<std::int64_t>(plan.periodic_hour * 3600.0 + jitter), 1});
            slots.push_back({static_cast<std::int64_t>(
                                 rng.uniform(static_cast<double>(cfg_.pair_hour_min),
                                             static_cast<double>(cfg_.pair_hour_max) + 0.5) *
                                 3600.0),
                             2});
            std::sort(slots.begin(), slots.end());

            std::int64_t cursor = 0;
            for (const auto& [offset, kind] : slots) {
                std::int64_t t = day_start + std::max(offset, cursor);
                switch (kind) {
                    case 0: t = routine_session(rows, t, plan, rng); break;
                    case 1: t = periodic_session(rows, t, plan, rng); break;
                    default: t = pair_session(rows, t, plan, rng); break;
                }
                // next session starts well after the inactivity gap
                cursor = t - day_start + 400 + rng.uniform_int(0, 600);
            }
        }
        return rows;
    }

    std::int64_t routine_session(std::vector<Row>& rows, std::int64_t t, const UserPlan& plan,
                                 Rng& rng) const {
        const int n = rng.uniform_int(cfg_.min_records_per_session, cfg_.max_records_per_session);
        std::string previous;
        for (int k = 0; k < n; ++k) {
            const double hour = static_cast<double>((t / 3600) % 24);
            const auto cat = pick_normal_category(hour, plan, previous, rng);
            const double dwell = dwell_for(plan, cat, rng);
            t = emit_record(rows, t, app_for(plan, cat, rng), cat, dwell, rng);
            t += rng.uniform_int(10, 250);
            previous = cat;
        }
        return t;
    }

    std::int64_t periodic_session(std::vector<Row>& rows, std::int64_t t, const UserPlan& plan,
                                  Rng& rng) const {
        const auto& cat = cfg_.periodic_plant_category;
        return emit_record(rows, t, app_for(plan, cat, rng), cat, dwell_for(plan, cat, rng), rng);
    }

    std::int64_t pair_session(std::vector<Row>& rows, std::int64_t t, const UserPlan& plan,
                              Rng& rng) const {
        const int num_modes = static_cast<int>(cfg_.anchor_modes_seconds.size());
        int mode = 0;
        for (int k = 0; k < cfg_.pair_session_records; ++k) {
            if (k % 2 == 0) {
                mode = rng.uniform_int(0, num_modes - 1);
                const double dwell = rng.lognormal(
                    std::log(cfg_.anchor_modes_seconds[static_cast<std::size_t>(mode)]),
                    cfg_.anchor_sigma);
                t = emit_record(rows, t, plan.app.at(cfg_.pair_anchor), cfg_.pair_anchor, dwell,
                                rng);
            } else {
                // shortest anchor dwell -> beta, any longer mode -> alpha
                std::string cat = mode == 0 ? cfg_.pair_beta : cfg_.pair_alpha;
                if (rng.uniform() > cfg_.pair_fidelity)
                    cat = cat == cfg_.pair_alpha ? cfg_.pair_beta : cfg_.pair_alpha;
                t = emit_record(rows, t, plan.app.at(cat), cat, dwell_for(plan, cat, rng), rng);
            }
            t += rng.uniform_int(10, 250);
        }
        return t;
    }

    const GeneratorConfig& cfg_;
    Rng rng_;
    std::vector<std::string> normal_;
    std::map<std::string, double> home_hour_;
};

} // namespace

GeneratedTrace generate(const GeneratorConfig& config) {
    validate_config(config);
    return Generator(config).run();
}

GeneratedTrace generate_to_dir(const GeneratorConfig& config, const std::string& dir) {
    auto trace = generate(config);
    namespace fs = std::filesystem;
    write_file(fs::path(dir) / "events.csv", trace.csv);
    write_file(fs::path(dir) / "manifest.json", trace.manifest);
    return trace;
}

} // namespace engage
