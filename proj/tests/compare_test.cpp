#include <doctest.h>

#include <cmath>
#include <string>

#include "laptel/compare.hpp"
#include "laptel/errors.hpp"
#include "laptel/kpi.hpp"

using namespace laptel;

namespace {

// Published benchmark columns for the human driver and the racing software
// on the same track, used as comparison fixtures.
KpiReport human_fixture() {
    KpiReport r;
    r.driver_tag = DriverTag::human;
    r.track_id = "monteblanco";
    r.at(KpiId::v_max) = 61.5;
    r.at(KpiId::ax_max) = 5.0;
    r.at(KpiId::ax_min) = -17.4;
    r.at(KpiId::ay_max) = 16.5;
    r.at(KpiId::lap_time) = 63.03;
    r.at(KpiId::throttle_acceptance) = 75.0;
    r.at(KpiId::coasting_time) = 1.99;
    r.at(KpiId::brake_aggression) = 371.0;
    r.at(KpiId::brake_release) = 38.9;
    r.at(KpiId::braking_quickness) = 0.28;
    r.at(KpiId::steering_speed) = 1.39e-4;
    r.at(KpiId::steering_integral) = 1.93;
    r.at(KpiId::att_vel_pos) = 0.045;
    r.at(KpiId::att_vel_neg) = -0.039;
    r.at(KpiId::d_slip_pos) = 0.014;
    r.at(KpiId::d_slip_neg) = -0.007;
    r.at(KpiId::lat_dev) = 0.88;
    return r;
}

KpiReport software_fixture() {
    KpiReport r;
    r.driver_tag = DriverTag::software;
    r.track_id = "monteblanco";
    r.at(KpiId::v_max) = 58.0;
    r.at(KpiId::ax_max) = 4.7;
    r.at(KpiId::ax_min) = -9.2;
    r.at(KpiId::ay_max) = 13.7;
    r.at(KpiId::lap_time) = 69.98;
    r.at(KpiId::throttle_acceptance) = 33.0;
    r.at(KpiId::coasting_time) = 3.65;
    r.at(KpiId::brake_aggression) = 259.0;
    r.at(KpiId::brake_release) = 10.8;
    r.at(KpiId::braking_quickness) = 0.25;
    r.at(KpiId::steering_speed) = 6.94e-5;
    r.at(KpiId::steering_integral) = 1.74;
    r.at(KpiId::att_vel_pos) = 0.030;
    r.at(KpiId::att_vel_neg) = -0.027;
    r.at(KpiId::d_slip_pos) = 0.004;
    r.at(KpiId::d_slip_neg) = -0.005;
    r.at(KpiId::lat_dev) = 0.30;
    return r;
}

// Rounded published relative differences, in KpiId order.
constexpr double kPublishedRelDiff[kKpiCount] = {
    -6, -6, -47, -17, +11, -56, +83, -30, -72, -10, -50, -10, -33, -31, -71, -29, -66,
};

}  // namespace

TEST_CASE("relative difference arithmetic") {
    CHECK(relative_difference(69.98, 63.03) == doctest::Approx(11.026).epsilon(0.001));
    CHECK(relative_difference(33.0, 75.0) == doctest::Approx(-56.0));
    CHECK(relative_difference(5.0, 5.0) == doctest::Approx(0.0));
    try {
        relative_difference(1.0, 0.0);
        FAIL("expected BaselineZero");
    } catch (const Error& e) {
        CHECK(e.code() == errc::baseline_zero);
    }
}

TEST_CASE("benchmark fixture reproduces every published relative difference") {
    ComparisonReport cmp = compare(human_fixture(), software_fixture());
    for (const auto& info : kpi_table()) {
        const std::size_t i = static_cast<std::size_t>(info.id);
        REQUIRE_MESSAGE(cmp.rel_diff_pct[i].has_value(), info.key);
        CHECK_MESSAGE(std::abs(*cmp.rel_diff_pct[i] - kPublishedRelDiff[i]) <= 1.0, info.key,
                      " computed ", *cmp.rel_diff_pct[i], " expected ", kPublishedRelDiff[i]);
    }
    CHECK(cmp.missing.empty());
}

TEST_CASE("comparing a report with itself gives all-zero differences") {
    ComparisonReport cmp = compare(human_fixture(), human_fixture());
    for (const auto& v : cmp.rel_diff_pct) {
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(0.0));
    }
}

TEST_CASE("slower lap time reads as a positive difference") {
    ComparisonReport cmp = compare(human_fixture(), software_fixture());
    CHECK(*cmp.rel_diff_pct[static_cast<std::size_t>(KpiId::lap_time)] > 0.0);
}

TEST_CASE("absent KPIs propagate into the missing list") {
    KpiReport base = human_fixture();
    base.mark_absent(KpiId::braking_quickness, "no braking events");
    ComparisonReport cmp = compare(base, software_fixture());
    CHECK_FALSE(cmp.rel_diff_pct[static_cast<std::size_t>(KpiId::braking_quickness)].has_value());
    bool listed = false;
    for (const auto& m : cmp.missing) {
        listed = listed || (m.id == KpiId::braking_quickness &&
                            m.reason.find("no braking events") != std::string::npos);
    }
    CHECK(listed);
}

TEST_CASE("zero baselines are incomparable, not infinite") {
    KpiReport base = human_fixture();
    base.at(KpiId::coasting_time) = 0.0;
    ComparisonReport cmp = compare(base, software_fixture());
    CHECK_FALSE(cmp.rel_diff_pct[static_cast<std::size_t>(KpiId::coasting_time)].has_value());
    bool listed = false;
    for (const auto& m : cmp.missing) listed = listed || m.id == KpiId::coasting_time;
    CHECK(listed);
}

TEST_CASE("track mismatch is rejected") {
    KpiReport other = software_fixture();
    other.track_id = "another_track";
    try {
        compare(human_fixture(), other);
        FAIL("expected TrackMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == errc::track_mismatch);
    }
}

TEST_CASE("JSON round trip is lossless for reports") {
    KpiReport r = human_fixture();
    r.mark_absent(KpiId::lat_dev, "no reference line provided");
    const std::string once = render(r, RenderFormat::json);
    KpiReport back = kpi_report_from_json(once);
    CHECK(render(back, RenderFormat::json) == once);
    CHECK(back.driver_tag == r.driver_tag);
    CHECK(back.track_id == r.track_id);
    CHECK_FALSE(back.at(KpiId::lat_dev).has_value());
    CHECK(*back.at(KpiId::steering_speed) == *r.at(KpiId::steering_speed));
}

TEST_CASE("JSON round trip is lossless for comparisons") {
    ComparisonReport cmp = compare(human_fixture(), software_fixture());
    const std::string once = render(cmp, RenderFormat::json);
    ComparisonReport back = comparison_from_json(once);
    CHECK(render(back, RenderFormat::json) == once);
}

TEST_CASE("CSV output has one row per report row plus a header") {
    ComparisonReport cmp = compare(human_fixture(), software_fixture());
    const std::string csv = render(cmp, RenderFormat::csv);
    std::size_t lines = 0;
    for (char c : csv) lines += (c == '\n');
    CHECK(lines == 15);  // header + 14 table rows (paired cells share a row)
    CHECK(csv.rfind("kpi,baseline,candidate,rel_diff_pct", 0) == 0);
}

TEST_CASE("renders are deterministic") {
    ComparisonReport cmp = compare(human_fixture(), software_fixture());
    for (RenderFormat fmt : {RenderFormat::text, RenderFormat::csv, RenderFormat::json}) {
        CHECK(render(cmp, fmt) == render(cmp, fmt));
    }
}

TEST_CASE("text table carries the paired cells in one row") {
    ComparisonReport cmp = compare(human_fixture(), software_fixture());
    const std::string text = render(cmp, RenderFormat::text);
    CHECK(text.find("attitude velocity") != std::string::npos);
    CHECK(text.find("0.045/ -0.039") != std::string::npos);
    CHECK(text.find("max./min. long. acceleration") != std::string::npos);
}
