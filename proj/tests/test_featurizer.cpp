#include "doctest.h"

#include <cmath>

#include "engage/features.hpp"
#include "helpers.hpp"

using namespace engage;

namespace {

int block_offset(const FeatureSchema& s, const std::string& name) {
    int off = 0;
    for (const auto& b : s.blocks) {
        if (b.name == name) return off;
        off += b.width;
    }
    return -1;
}

DwellRecord record(const std::string& user, const std::string& app, int category,
                   std::int64_t start, double dwell, int session = 0) {
    DwellRecord r;
    r.user_id = user;
    r.app_id = app;
    r.category = category;
    r.start = start;
    r.dwell_seconds = dwell;
    r.session_index = session;
    const auto [hour, weekday] = local_time_fields(start, 0);
    r.hour_of_day = hour;
    r.day_of_week = weekday;
    return r;
}

} // namespace

TEST_CASE("schemas are self-consistent and distinguishable") {
    const auto g = generic_schema(12);
    const auto e = engagement_schema(12);
    CHECK(g.dimension() > 0);
    CHECK(g.numeric_mask().size() == static_cast<std::size_t>(g.dimension()));
    CHECK(g.slot_block_names().size() == static_cast<std::size_t>(g.dimension()));
    CHECK(g.digest() != e.digest());
    CHECK(g.digest() != generic_schema(13).digest());
    CHECK(g.digest() == generic_schema(12).digest());

    PredictionContext ctx(12, testutil::profile("u"));
    CHECK(ctx.generic_features(0, 0, 0).size() == static_cast<std::size_t>(g.dimension()));
    const auto snap = ctx.engagement_snapshot(0, 0, 0);
    CHECK(assemble_engagement_vector(snap, 0).size() == static_cast<std::size_t>(e.dimension()));
}

TEST_CASE("a fresh context encodes profile, empty history and interval caps") {
    const int C = 3;
    const auto schema = generic_schema(C);
    PredictionContext ctx(C, testutil::profile("u", Gender::Female, AgeBand::A18_24));
    const auto x = ctx.generic_features(1000, 5, 2);

    CHECK(x[static_cast<std::size_t>(block_offset(schema, "age")) + 1] == 1.0);
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "gender")) + 1] == 1.0);
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "hour")) + 5] == 1.0);
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "weekday")) + 2] == 1.0);
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "total_app_usage_duration"))] == 0.0);

    // no last app yet: the C+1-th "unknown" slot is set
    const int last = block_offset(schema, "last_used_app");
    CHECK(x[static_cast<std::size_t>(last) + C] == 1.0);

    // never-used categories encode as the scaled cap 1.0
    const int periodic = block_offset(schema, "periodic_feature");
    for (int c = 0; c < C; ++c) CHECK(x[static_cast<std::size_t>(periodic + c)] == 1.0);
}

TEST_CASE("consumed records feed counts, intervals and the strict-past window") {
    const int C = 3;
    const auto schema = generic_schema(C);
    PredictionContext ctx(C, testutil::profile("u"));
    const std::int64_t t0 = 1767571200;
    ctx.consume(record("u", "a", 0, t0, 100.0), EngagementLevel::Medium);

    const std::int64_t now = t0 + 7200;
    const auto x = ctx.generic_features(now, 2, 0);
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "total_app_usage_duration"))] ==
          doctest::Approx(std::log1p(100.0)).epsilon(1e-12));
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "total_app_usage_frequency"))] ==
          doctest::Approx(std::log1p(1.0)).epsilon(1e-12));
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "last_used_app"))] == 1.0);
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "app_preference_last_day"))] == 1.0);
    // two hours ago is outside the one-hour window
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "app_preference_last_hour"))] == 0.0);
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "periodic_feature"))] ==
          doctest::Approx(2.0 / 168.0).epsilon(1e-12));
    CHECK(x[static_cast<std::size_t>(block_offset(schema, "historical_app_preference"))] ==
          doctest::Approx(std::log1p(1.0)).epsilon(1e-12));

    // an event at exactly `now` is not part of the strict past
    const auto at_now = ctx.generic_features(t0, 0, 0);
    CHECK(at_now[static_cast<std::size_t>(block_offset(schema, "app_preference_last_day"))] == 0.0);

    // intervals beyond a week saturate at 1.0
    const auto late = ctx.generic_features(t0 + 200 * 3600, 0, 0);
    CHECK(late[static_cast<std::size_t>(block_offset(schema, "periodic_feature"))] == 1.0);
}

TEST_CASE("last-session preferences come from the previously completed session") {
    const int C = 2;
    const auto schema = generic_schema(C);
    const int off = block_offset(schema, "app_preference_last_session");
    PredictionContext ctx(C, testutil::profile("u"));
    ctx.consume(record("u", "a", 0, 100, 1.0, 0), EngagementLevel::Light);
    ctx.consume(record("u", "a2", 0, 200, 1.0, 0), EngagementLevel::Light);

    // still inside session 0: no completed previous session
    auto x = ctx.generic_features(300, 0, 0);
    CHECK(x[static_cast<std::size_t>(off)] == 0.0);

    ctx.consume(record("u", "b", 1, 1000, 1.0, 1), EngagementLevel::Light);
    x = ctx.generic_features(1100, 0, 0);
    CHECK(x[static_cast<std::size_t>(off)] == 2.0);     // category 0 twice in session 0
    CHECK(x[static_cast<std::size_t>(off) + 1] == 0.0); // category 1 only in the open session
}

TEST_CASE("engagement snapshots substitute only the predicted-category slots") {
    const int C = 3;
    PredictionContext ctx(C, testutil::profile("u"));
    ctx.consume(record("u", "a", 0, 1000, 50.0), EngagementLevel::Intensive);
    ctx.consume(record("u", "a", 0, 2000, 50.0), EngagementLevel::Medium);

    const auto snap = ctx.engagement_snapshot(5600, 1, 0);
    CHECK(snap.last_level_code[0] == 2); // Medium encodes as 1 + level
    CHECK(snap.last_level_code[1] == 0); // never seen
    CHECK(snap.hours_since[0] == doctest::Approx(1.0 / 168.0).epsilon(1e-12));
    CHECK(snap.level_counts[0][1] == 1.0);
    CHECK(snap.level_counts[0][2] == 1.0);

    const auto at0 = assemble_engagement_vector(snap, 0);
    const auto at1 = assemble_engagement_vector(snap, 1);
    REQUIRE(at0.size() == at1.size());
    // common prefix identical, only the 5 trailing predicted slots move
    for (std::size_t i = 0; i < snap.common.size(); ++i) CHECK(at0[i] == at1[i]);
    CHECK(at0[snap.common.size()] == 2.0); // last level code for category 0
    CHECK(at1[snap.common.size()] == 0.0);
    CHECK(at0[snap.common.size() + 3] == doctest::Approx(std::log1p(1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(assemble_engagement_vector(snap, C), DataError);
    CHECK_THROWS_AS(assemble_engagement_vector(snap, -1), DataError);

    // the historical level mean: (3 + 2) / 2 usages
    const auto eschema = engagement_schema(C);
    const int mean_off = block_offset(eschema, "historical_engagement_levels");
    CHECK(snap.common[static_cast<std::size_t>(mean_off)] ==
          doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("personal features index the sorted training vocabulary") {
    const auto p = fit_personal_schema({"zulu", "alpha", "zulu", "mike"});
    REQUIRE(p.apps.size() == 3);
    CHECK(p.apps[0] == "alpha");
    CHECK(p.app_index("zulu") == 2);
    CHECK(p.app_index("unknown") == -1);
    CHECK(p.schema.dimension() == 24 + 7 + 4 + 4 + 3);

    PredictionContext ctx(2, testutil::profile("u"));
    ctx.consume(record("u", "mike", 0, 1000, 1.0), EngagementLevel::Light);
    ctx.consume(record("u", "other", 0, 2000, 1.0), EngagementLevel::Light);
    const auto x = ctx.personal_features(p, 3000, 4, 1);
    CHECK(x[4] == 1.0);      // hour
    CHECK(x[24 + 1] == 1.0); // weekday
    // last app "other" is out of vocabulary -> unknown slot
    CHECK(x[31 + 3] == 1.0);
    // second-last app "mike" is vocab index 1
    CHECK(x[31 + 4 + 1] == 1.0);
    // hours since per vocab app: alpha never seen -> cap
    CHECK(x[31 + 8 + 0] == 1.0);
    CHECK(x[31 + 8 + 1] == doctest::Approx((2000.0 / 3600.0) / 168.0).epsilon(1e-12));
}

TEST_CASE("make_instances replays causally and splits chronologically per user") {
    const std::int64_t t0 = 1767571200;
    const auto corpus = testutil::corpus(
        {"A", "B"}, {
                        testutil::event("u", t0, "a1", 0, 5.0),
                        testutil::event("u", t0 + 100, "b1", 1, 15.0),
                        testutil::event("u", t0 + 200, "a1", 0, 25.0),
                        testutil::event("u", t0 + 86400, "b2", 1, 8.0),
                    });
    const auto s = sessionize_corpus(corpus);
    std::vector<const DwellRecord*> train;
    for (std::size_t k = 0; k < 3; ++k) train.push_back(&s.users.at("u").records[k]);
    const auto table = fit_quantiles(train);

    const auto set = make_instances(s, table, {{"u", 3}});
    REQUIRE(set.instances.size() == 3); // first record yields no instance
    CHECK(set.instances[0].record_index == 1);
    CHECK(set.instances[0].is_train);
    CHECK(set.instances[1].is_train);
    CHECK(!set.instances[2].is_train);
    CHECK(set.instances[0].label_app == "b1");
    CHECK(set.instances[0].label_category == 1);
    CHECK(set.train().size() == 2);
    CHECK(set.test().size() == 1);

    // personal vocabulary is fit on the train prefix only
    const auto& personal = set.personal.at("u");
    CHECK(personal.app_index("a1") >= 0);
    CHECK(personal.app_index("b1") >= 0);
    CHECK(personal.app_index("b2") == -1);

    // features reflect strictly earlier records
    const auto fresh_dim = set.instances[0].x_generic;
    CHECK(fresh_dim.size() == static_cast<std::size_t>(set.generic.dimension()));

    const auto csv = instances_to_csv(set);
    CHECK(csv.find("label_app") != std::string::npos);
    CHECK(csv.find("g_last_used_app_0") != std::string::npos);
}

TEST_CASE("instances round-trip through JSON exactly") {
    const std::int64_t t0 = 1767571200;
    const auto corpus = testutil::corpus({"A"}, {
                                                    testutil::event("u", t0, "a", 0, 5.0),
                                                    testutil::event("u", t0 + 50, "b", 0, 9.0),
                                                });
    const auto s = sessionize_corpus(corpus);
    const auto table = fit_quantiles(s.all_records());
    const auto set = make_instances(s, table, {{"u", 2}});
    REQUIRE(set.instances.size() == 1);

    const auto& inst = set.instances[0];
    const auto restored = instance_from_json(instance_to_json(inst));
    CHECK(restored.user_id == inst.user_id);
    CHECK(restored.record_index == inst.record_index);
    CHECK(restored.is_train == inst.is_train);
    CHECK(restored.x_generic == inst.x_generic);
    CHECK(restored.x_personal == inst.x_personal);
    CHECK(restored.engagement.common == inst.engagement.common);
    CHECK(restored.engagement.last_level_code == inst.engagement.last_level_code);
    CHECK(restored.engagement.hours_since == inst.engagement.hours_since);
    CHECK(restored.engagement.level_counts == inst.engagement.level_counts);
    CHECK(restored.label_category == inst.label_category);
    CHECK(restored.label_app == inst.label_app);
    CHECK(restored.label_level == inst.label_level);
    CHECK(restored.start == inst.start);
    CHECK(restored.hour == inst.hour);
    CHECK(restored.weekday == inst.weekday);

    CHECK_THROWS_AS(instance_from_json("not json"), DataError);
    CHECK_THROWS_AS(instance_from_json("{}"), DataError);
}
