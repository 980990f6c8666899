#include <doctest.h>

#include <cmath>
#include <random>

#include "laptel/errors.hpp"
#include "laptel/types.hpp"
#include "test_util.hpp"

using namespace laptel;

namespace {

std::vector<TelemetrySample> samples_at(std::initializer_list<double> times) {
    std::vector<TelemetrySample> out;
    for (double t : times) {
        TelemetrySample s;
        s.t = t;
        s.s = 10.0 * t;
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("two point series gives dt and lap_time") {
    Lap lap = new_lap(samples_at({0.0, 0.01}), DriverTag::human, "t");
    CHECK(lap.dt == doctest::Approx(0.01));
    CHECK(lap.lap_time == doctest::Approx(0.01));
    CHECK(lap.size() == 2);
}

TEST_CASE("non-uniform spacing is rejected with the worst gap reported") {
    try {
        new_lap(samples_at({0.0, 0.01, 0.03}), DriverTag::human, "t");
        FAIL("expected NonUniformSampling");
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_uniform_sampling);
        CHECK(std::string(e.what()).find("worst gap") != std::string::npos);
    }
}

TEST_CASE("70 s lap at 100 Hz") {
    // lap_time = (n-1) * dt by construction.
    Lap lap = testutil::make_lap(7001, 0.01, nullptr);
    CHECK(lap.lap_time == doctest::Approx(70.0).epsilon(1e-12));
}

TEST_CASE("empty and single-sample input") {
    CHECK_THROWS_AS(new_lap({}, DriverTag::human, "t"), Error);
    try {
        new_lap(samples_at({0.0}), DriverTag::human, "t");
        FAIL("expected EmptySeries");
    } catch (const Error& e) {
        CHECK(e.code() == errc::empty_series);
    }
}

TEST_CASE("non-finite values name the channel and index") {
    auto samples = samples_at({0.0, 0.01, 0.02});
    samples[1].ay = std::nan("");
    try {
        new_lap(std::move(samples), DriverTag::human, "t");
        FAIL("expected NonFiniteValue");
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_finite_value);
        CHECK(std::string(e.what()).find("ay_mps2") != std::string::npos);
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
}

TEST_CASE("pedal range and pressure sign are enforced") {
    auto bad_throttle = samples_at({0.0, 0.01});
    bad_throttle[0].throttle = 1.2;
    CHECK_THROWS_AS(new_lap(std::move(bad_throttle), DriverTag::human, "t"), Error);

    auto bad_pressure = samples_at({0.0, 0.01});
    bad_pressure[1].p_brake_r = -1.0;
    CHECK_THROWS_AS(new_lap(std::move(bad_pressure), DriverTag::human, "t"), Error);
}

TEST_CASE("decreasing lap distance is rejected") {
    auto samples = samples_at({0.0, 0.01, 0.02});
    samples[2].s = samples[1].s - 1.0;
    try {
        new_lap(std::move(samples), DriverTag::human, "t");
        FAIL("expected NonMonotonicDistance");
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_monotonic_distance);
    }
}

TEST_CASE("f_long_req must be present on all samples or none") {
    auto samples = samples_at({0.0, 0.01, 0.02});
    samples[1].f_long_req = 100.0;
    CHECK_THROWS_AS(new_lap(std::move(samples), DriverTag::software, "t"), Error);

    auto all = samples_at({0.0, 0.01, 0.02});
    for (auto& s : all) s.f_long_req = 500.0;
    Lap lap = new_lap(std::move(all), DriverTag::software, "t");
    CHECK(lap.has_f_long_req());
    CHECK(lap.f_long_req_channel() == std::vector<double>{500.0, 500.0, 500.0});
}

TEST_CASE("property: random valid series round-trips through construction") {
    auto gen = testutil::rng(7);
    std::uniform_real_distribution<double> value(-5.0, 5.0);
    std::uniform_int_distribution<int> len(2, 400);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = static_cast<std::size_t>(len(gen));
        const double dt = 0.01;
        double s = 0.0;
        std::vector<TelemetrySample> samples(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto& smp = samples[i];
            smp.t = static_cast<double>(i) * dt;
            s += std::abs(value(gen));
            smp.s = s;
            smp.x = value(gen);
            smp.y = value(gen);
            smp.psi = value(gen);
            smp.vx = std::abs(value(gen)) + 1.0;
            smp.vy = value(gen);
            smp.ax = value(gen);
            smp.ay = value(gen);
            smp.yaw_rate = value(gen);
            smp.steer = value(gen) / 10.0;
            smp.throttle = std::abs(value(gen)) / 5.0;
            smp.p_brake_f = std::abs(value(gen));
            smp.p_brake_r = std::abs(value(gen));
        }
        Lap lap = new_lap(samples, DriverTag::other, "prop");
        CHECK(lap.size() == n);
        CHECK(lap.lap_time ==
              doctest::Approx(static_cast<double>(n - 1) * lap.dt).epsilon(1e-12));
        for (std::size_t i = 0; i + 1 < n; ++i) {
            CHECK(std::abs((lap.samples[i + 1].t - lap.samples[i].t) - lap.dt) <= 1e-9);
            CHECK(lap.samples[i + 1].s >= lap.samples[i].s);
        }
    }
}

TEST_CASE("driver tag string round trip") {
    for (DriverTag tag : {DriverTag::human, DriverTag::software, DriverTag::other}) {
        CHECK(driver_tag_from_string(to_string(tag)) == tag);
    }
    CHECK_THROWS_AS(driver_tag_from_string("robot"), Error);
}

TEST_CASE("reference line validation") {
    ReferenceLine ref;
    ref.points = {{0, 0, 0, 0, 10}, {1, 1, 0, 0, 10}};
    CHECK_NOTHROW(ref.validate());
    CHECK(ref.length() == doctest::Approx(1.0));

    ReferenceLine bad = ref;
    bad.points[1].s = 0.0;  // not strictly increasing
    CHECK_THROWS_AS(bad.validate(), Error);

    ReferenceLine dup = ref;
    dup.points[1].x = 0.0;
    dup.points[1].y = 0.0;  // coincident with first
    CHECK_THROWS_AS(dup.validate(), Error);
}

TEST_CASE("vehicle params validation") {
    VehicleParams p;
    CHECK_NOTHROW(p.validate());
    p.lf = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
}
