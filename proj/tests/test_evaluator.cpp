#include "doctest.h"

#include "engage/evaluator.hpp"
#include "engage/rng.hpp"
#include "oracles.hpp"

using namespace engage;

TEST_CASE("split_per_user trains on the ceiling of the fraction") {
    const auto split = split_per_user({{"a", 10}, {"b", 3}, {"c", 1}}, 0.7);
    CHECK(split.at("a") == 7);
    CHECK(split.at("b") == 3); // ceil(2.1)
    CHECK(split.at("c") == 1);
    CHECK(split_per_user({{"a", 9}}, 0.5).at("a") == 5);
    CHECK_THROWS_AS(split_per_user({{"a", 1}}, 0.0), UsageError);
    CHECK_THROWS_AS(split_per_user({{"a", 1}}, 1.0), UsageError);
    CHECK_THROWS_AS(split_per_user({{"a", 1}}, -0.3), UsageError);
}

TEST_CASE("score matches hand-worked metrics") {
    // truth: a a a b b, predicted: a b a b a
    const auto m = score({"a", "a", "a", "b", "b"}, {"a", "b", "a", "b", "a"});
    CHECK(m.n == 5);
    CHECK(m.accuracy == doctest::Approx(0.6).epsilon(1e-12));
    // class a: tp 2, predicted 3, support 3 -> p 2/3, r 2/3
    CHECK(m.per_class.at("a").precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.per_class.at("a").recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // class b: tp 1, predicted 2, support 2 -> p 1/2, r 1/2
    CHECK(m.per_class.at("b").f1 == doctest::Approx(0.5).epsilon(1e-12));
    // support weighting: 3/5 * 2/3 + 2/5 * 1/2
    CHECK(m.precision == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(m.recall == doctest::Approx(0.6).epsilon(1e-12));

    // a label that is only ever predicted still enters the table
    const auto skew = score({"x", "x"}, {"y", "x"});
    CHECK(skew.per_class.at("y").support == 0);
    CHECK(skew.per_class.at("y").recall == 0.0);
    CHECK(skew.accuracy == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(score({}, {}), DataError);
    CHECK_THROWS_AS(score({"a"}, {}), InternalError);
}

TEST_CASE("score agrees with the brute-force reference on random label sets") {
    Rng rng(37);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = rng.uniform_int(1, 60);
        const int k = rng.uniform_int(1, 6);
        std::vector<std::string> truth, predicted;
        for (int i = 0; i < n; ++i) {
            truth.push_back("c" + std::to_string(rng.uniform_int(0, k - 1)));
            predicted.push_back("c" + std::to_string(rng.uniform_int(0, k - 1)));
        }
        const auto got = score(truth, predicted);
        const auto want = testutil::brute_metrics(truth, predicted);
        CHECK(got.accuracy == doctest::Approx(want.accuracy).epsilon(1e-12));
        CHECK(got.precision == doctest::Approx(want.precision).epsilon(1e-12));
        CHECK(got.recall == doctest::Approx(want.recall).epsilon(1e-12));
        CHECK(got.f1 == doctest::Approx(want.f1).epsilon(1e-12));
    }
}

TEST_CASE("level confusion tracks adjacency of errors") {
    using L = EngagementLevel;
    const std::vector<L> truth = {L::Light, L::Light, L::Medium, L::Intensive, L::Intensive};
    const std::vector<L> pred = {L::Light, L::Medium, L::Intensive, L::Light, L::Medium};
    const auto c = confusion_level(truth, pred);
    CHECK(c.counts[0][0] == 1);
    CHECK(c.counts[0][1] == 1);
    CHECK(c.counts[1][2] == 1);
    CHECK(c.counts[2][0] == 1);
    CHECK(c.counts[2][1] == 1);
    CHECK(c.errors == 4);
    // Light->Medium, Medium->Intensive, Intensive->Medium are adjacent;
    // Intensive->Light is not.
    CHECK(c.adjacent_errors == 3);
    CHECK(c.adjacent_share == doctest::Approx(0.75).epsilon(1e-12));

    const auto clean = confusion_level({L::Light}, {L::Light});
    CHECK(clean.errors == 0);
    CHECK(clean.adjacent_share == 0.0);
}

TEST_CASE("error attribution counts corrected and broken calls") {
    // truth      1 1 2 2 3 3
    // reference  1 2 2 1 3 1   (wrong on rows 1, 3, 5)
    // candidate  1 1 1 1 3 3   (fixes rows 1 and 5, breaks row 2)
    const auto a = error_attribution({1, 1, 2, 2, 3, 3}, {1, 2, 2, 1, 3, 1}, {1, 1, 1, 1, 3, 3});
    CHECK(a.n == 6);
    CHECK(a.reference_wrong == 3);
    CHECK(a.corrected == 2);
    CHECK(a.broken == 1);
    CHECK(a.both_wrong == 1);
    CHECK(a.net_correction_rate == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // a perfect reference leaves nothing to correct
    const auto b = error_attribution({1, 2}, {1, 2}, {2, 2});
    CHECK(b.reference_wrong == 0);
    CHECK(b.corrected == 0);
    CHECK(b.broken == 1);
    CHECK(b.net_correction_rate == 0.0);
}
