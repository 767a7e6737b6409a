#include "doctest.h"

#include "engage/rng.hpp"
#include "engage/sessionize.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace engage;

TEST_CASE("a gap of exactly the threshold continues the session") {
    // First event ends at t=100; the next starts 300 s later.
    std::vector<UsageEvent> events = {
        testutil::event("u", 0, "a", 0, 100.0),
        testutil::event("u", 400, "b", 1, 10.0),
    };
    auto sessions = sessionize(events, 300.0);
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].events.size() == 2);
    CHECK(sessions[0].start == 0);
    CHECK(sessions[0].end == 410);

    // One second more and the session splits.
    events[1].timestamp = 401;
    sessions = sessionize(events, 300.0);
    REQUIRE(sessions.size() == 2);
    CHECK(sessions[0].end == 100);
    CHECK(sessions[1].start == 401);
}

TEST_CASE("gap is measured from the end of the previous event") {
    // Start-to-start distance is 3600 s, but the long dwell bridges it.
    const std::vector<UsageEvent> events = {
        testutil::event("u", 0, "a", 0, 3500.0),
        testutil::event("u", 3600, "b", 1, 10.0),
    };
    CHECK(sessionize(events, 300.0).size() == 1);
}

TEST_CASE("unsorted events are rejected") {
    const std::vector<UsageEvent> events = {
        testutil::event("u", 100, "a", 0, 1.0),
        testutil::event("u", 50, "b", 1, 1.0),
    };
    CHECK_THROWS_AS(sessionize(events), DataError);
    CHECK(sessionize({}).empty());
}

TEST_CASE("aggregation collapses maximal same-app runs") {
    Session s;
    s.user_id = "u";
    s.events = {
        testutil::event("u", 0, "a", 0, 5.0),
        testutil::event("u", 10, "a", 0, 7.0),
        testutil::event("u", 20, "b", 1, 2.0),
        testutil::event("u", 30, "a", 0, 1.0), // new run, not merged backwards
    };
    const auto records = aggregate_dwell(s);
    REQUIRE(records.size() == 3);
    CHECK(records[0].app_id == "a");
    CHECK(records[0].start == 0);
    CHECK(records[0].dwell_seconds == 12.0);
    CHECK(records[1].app_id == "b");
    CHECK(records[2].app_id == "a");
    CHECK(records[2].dwell_seconds == 1.0);
}

TEST_CASE("sessionize_corpus fills session indices and local time fields") {
    // 1767571200 = Monday 2026-01-05 00:00 UTC.
    const auto corpus = testutil::corpus(
        {"x", "y"}, {
                        testutil::event("u", 1767571200, "a", 0, 10.0),
                        testutil::event("u", 1767571200 + 7200, "b", 1, 10.0),
                    });
    const auto s = sessionize_corpus(corpus, 300.0, 60); // +1 h offset
    const auto& records = s.users.at("u").records;
    REQUIRE(records.size() == 2);
    CHECK(records[0].session_index == 0);
    CHECK(records[1].session_index == 1);
    CHECK(records[0].hour_of_day == 1);
    CHECK(records[1].hour_of_day == 3);
    CHECK(records[0].day_of_week == 0);
    CHECK(s.record_count() == 2);
}

TEST_CASE("sessionize + aggregate match the brute-force reference on random streams") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<UsageEvent> events;
        std::int64_t t = rng.uniform_int(0, 100000);
        const int n = rng.uniform_int(1, 120);
        for (int i = 0; i < n; ++i) {
            const int app = rng.uniform_int(0, 5);
            events.push_back(testutil::event("u", t, "app" + std::to_string(app), app % 3,
                                             rng.uniform(0.0, 400.0)));
            t += rng.uniform_int(0, 700); // gaps straddle the 300 s threshold
        }

        const auto expected = testutil::brute_dwell_records(events, 300.0);

        const auto sessions = sessionize(events, 300.0);
        std::vector<DwellRecord> got;
        for (std::size_t si = 0; si < sessions.size(); ++si) {
            auto recs = aggregate_dwell(sessions[si]);
            for (auto& r : recs) {
                r.session_index = static_cast<int>(si);
                got.push_back(r);
            }
        }

        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].app_id == expected[i].app_id);
            CHECK(got[i].category == expected[i].category);
            CHECK(got[i].session_index == expected[i].session_index);
            CHECK(got[i].start == expected[i].start);
            CHECK(got[i].dwell_seconds == expected[i].dwell_seconds);
        }
    }
}
