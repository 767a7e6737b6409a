#include "doctest.h"

#include <set>

#include "engage/io_util.hpp"
#include "engage/learners/dataset.hpp"
#include "engage/rng.hpp"
#include "engage/taxonomy.hpp"
#include "engage/types.hpp"

using namespace engage;

TEST_CASE("enum parsing round-trips and rejects junk") {
    for (int i = 0; i < kNumAgeBands; ++i) {
        const auto band = static_cast<AgeBand>(i);
        CHECK(parse_age_band(to_string(band)) == band);
    }
    CHECK(parse_gender("female") == Gender::Female);
    CHECK(parse_device_type("tablet") == DeviceType::Tablet);
    CHECK(parse_os("ios") == Os::Ios);
    CHECK_THROWS_AS(parse_age_band("ancient"), DataError);
    CHECK_THROWS_AS(parse_gender(""), DataError);
    CHECK_THROWS_AS(parse_device_type("fridge"), DataError);
    CHECK_THROWS_AS(parse_os("beos"), DataError);
}

TEST_CASE("local_time_fields matches the epoch calendar") {
    // 1970-01-01 00:00 UTC was a Thursday.
    auto [hour, weekday] = local_time_fields(0, 0);
    CHECK(hour == 0);
    CHECK(weekday == 3);

    // +840 minutes pushes into the next day.
    auto [h2, w2] = local_time_fields(11 * 3600, 840);
    CHECK(h2 == 1);
    CHECK(w2 == 4);

    // Negative offset can pull before the epoch.
    auto [h3, w3] = local_time_fields(3600, -720);
    CHECK(h3 == 13);
    CHECK(w3 == 2); // Wednesday 1969-12-31

    // 2026-01-05 00:00 UTC is a Monday.
    auto [h4, w4] = local_time_fields(1767571200, 0);
    CHECK(h4 == 0);
    CHECK(w4 == 0);

    CHECK_THROWS_AS(local_time_fields(0, 900), UsageError);
    CHECK_THROWS_AS(local_time_fields(0, -800), UsageError);
}

TEST_CASE("taxonomy lookups are stable and validated") {
    const Taxonomy t({"b", "a", "c"});
    CHECK(t.size() == 3);
    CHECK(t.name(1) == "a");
    CHECK(t.id("c") == 2);
    CHECK(t.find("missing") == -1);
    CHECK_THROWS_AS(t.id("missing"), DataError);
    CHECK_THROWS_AS(Taxonomy(std::vector<std::string>{"x", "x"}), UsageError);
    CHECK_THROWS_AS(Taxonomy(std::vector<std::string>{}), UsageError);

    const auto play = Taxonomy::google_play();
    CHECK(play.size() == 45);
    std::set<std::string> uniq(play.names().begin(), play.names().end());
    CHECK(uniq.size() == 45);
}

TEST_CASE("rng streams are deterministic and well-ranged") {
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng r(123);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const int k = r.uniform_int(3, 9);
        CHECK(k >= 3);
        CHECK(k <= 9);
    }

    // shuffle produces a permutation
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
    Rng s(5);
    s.shuffle(v);
    std::set<int> seen(v.begin(), v.end());
    CHECK(seen.size() == 8);

    // forked streams differ from the parent
    Rng parent(9);
    Rng child = parent.fork(1);
    CHECK(parent.next_u64() != child.next_u64());
}

TEST_CASE("rng normal moments are sane") {
    Rng r(99);
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.03);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("csv splitting and digests") {
    const auto f = split_csv_line("a,b,,d");
    REQUIRE(f.size() == 4);
    CHECK(f[2] == "");
    CHECK(split_csv_line("").size() == 1);

    // FNV-1a offset basis for the empty string
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("abc") != fnv1a_hex("acb"));

    CHECK(format_double(0.5) == "0.5");
    const double v = 1.0 / 3.0;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("matrix enforces row width and finiteness") {
    Matrix m;
    m.push_row(std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(m.push_row(std::vector<double>{1.0}), InternalError);
    CHECK(m.rows() == 1);
    CHECK(m.at(0, 1) == 2.0);
    m.push_row(std::vector<double>{3.0, std::numeric_limits<double>::infinity()});
    CHECK_THROWS_AS(m.check_finite(), DataError);
}
