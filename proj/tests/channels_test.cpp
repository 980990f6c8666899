#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "laptel/channels.hpp"
#include "laptel/errors.hpp"
#include "test_util.hpp"

using namespace laptel;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("smooth keeps constants") {
    std::vector<double> sig(500, 3.0);
    auto out = smooth(sig, 0.1, 0.01);
    for (double v : out) CHECK(v == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("smooth of an impulse with a 3-tap window") {
    std::vector<double> sig{0, 0, 1, 0, 0};
    auto out = smooth(sig, 0.03, 0.01);  // floor(0.03/0.01)|1 = 3 taps
    CHECK(out[0] == doctest::Approx(0.0));
    CHECK(out[1] == doctest::Approx(1.0 / 3.0));
    CHECK(out[2] == doctest::Approx(1.0 / 3.0));
    CHECK(out[3] == doctest::Approx(1.0 / 3.0));
    CHECK(out[4] == doctest::Approx(0.0));
}

TEST_CASE("smooth reduces white-noise variance by roughly the tap count") {
    auto gen = testutil::rng(11);
    std::normal_distribution<double> noise(0.0, 1.0);
    const std::size_t n = 100000;
    std::vector<double> sig(n);
    for (auto& v : sig) v = noise(gen);

    auto out = smooth(sig, 0.1, 0.01);  // 11 taps
    auto variance = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        return var / static_cast<double>(v.size());
    };
    const double ratio = variance(out) / variance(sig);
    CHECK(ratio > (1.0 / 11.0) * 0.7);
    CHECK(ratio < (1.0 / 11.0) * 1.3);
}

TEST_CASE("smooth rejects windows below one sample") {
    std::vector<double> sig(10, 1.0);
    try {
        smooth(sig, 0.001, 0.01);
        FAIL("expected WindowTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == errc::window_too_small);
    }
}

TEST_CASE("property: smooth stays within the signal bounds") {
    auto gen = testutil::rng(12);
    std::uniform_real_distribution<double> value(-4.0, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> sig(257);
        for (auto& v : sig) v = value(gen);
        auto out = smooth(sig, 0.07, 0.01);
        const double lo = *std::min_element(sig.begin(), sig.end());
        const double hi = *std::max_element(sig.begin(), sig.end());
        for (double v : out) {
            CHECK(v >= lo - 1e-12);
            CHECK(v <= hi + 1e-12);
        }
    }
}

TEST_CASE("derivative of a constant is zero") {
    std::vector<double> sig(100, 42.0);
    for (double v : derivative(sig, 0.01)) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("derivative is exact on linear signals") {
    std::vector<double> sig(200);
    for (std::size_t i = 0; i < sig.size(); ++i) sig[i] = 2.0 * (0.01 * static_cast<double>(i));
    for (double v : derivative(sig, 0.01)) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("derivative of sin matches the analytic derivative") {
    // Central differences attenuate by sin(w dt)/(w dt); at 1 Hz and 100 Hz
    // the worst-case error is 2*pi*(1 - sinc(0.0628)) = 4.14e-3.
    const double dt = 0.01;
    const std::size_t n = 1001;
    std::vector<double> sig(n);
    for (std::size_t i = 0; i < n; ++i) sig[i] = std::sin(2.0 * kPi * dt * static_cast<double>(i));
    auto d = derivative(sig, dt);
    double max_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double expected = 2.0 * kPi * std::cos(2.0 * kPi * dt * static_cast<double>(i));
        max_err = std::max(max_err, std::abs(d[i] - expected));
    }
    CHECK(max_err < 4.2e-3);
}

TEST_CASE("derivative needs two samples") {
    try {
        derivative({1.0}, 0.01);
        FAIL("expected SeriesTooShort");
    } catch (const Error& e) {
        CHECK(e.code() == errc::series_too_short);
    }
}

TEST_CASE("steering smoothness is zero for constant and linear steering") {
    std::vector<double> constant(300, 0.2);
    for (double v : steering_smoothness(constant, 0.1, 0.01)) {
        CHECK(v == doctest::Approx(0.0));
    }
    // A slow ramp: the centered, symmetrically truncated average reproduces
    // linear signals exactly, so the residual vanishes even at the edges.
    std::vector<double> ramp(300);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 1e-3 * static_cast<double>(i);
    for (double v : steering_smoothness(ramp, 0.1, 0.01)) {
        CHECK(v < 1e-3 * 0.3 * 1e-3);  // < 1e-3 * amplitude
    }
}

TEST_CASE("steering smoothness peak for a step input") {
    // 0.1 rad step; an 11-tap window sees 5 or 6 samples of the step, so the
    // peak residual is 0.05 within one sample quantum (0.1/11).
    const std::size_t n = 200;
    std::vector<double> sig(n, 0.0);
    for (std::size_t i = 100; i < n; ++i) sig[i] = 0.1;
    auto kss = steering_smoothness(sig, 0.1, 0.01);
    const double peak = *std::max_element(kss.begin(), kss.end());
    CHECK(std::abs(peak - 0.05) <= 0.1 / 11.0 + 1e-12);
}

TEST_CASE("property: steering smoothness invariant under constant offsets") {
    auto gen = testutil::rng(13);
    std::uniform_real_distribution<double> value(-0.3, 0.3);
    std::vector<double> sig(400);
    for (auto& v : sig) v = value(gen);
    auto base = steering_smoothness(sig, 0.1, 0.01);
    std::vector<double> shifted = sig;
    for (auto& v : shifted) v += 1.7;
    auto moved = steering_smoothness(shifted, 0.1, 0.01);
    for (std::size_t i = 0; i < sig.size(); ++i) {
        CHECK(moved[i] == doctest::Approx(base[i]).epsilon(1e-9));
    }
}

TEST_CASE("attitude velocity on steady circular motion is zero") {
    const std::size_t n = 500;
    std::vector<double> vx(n, 15.0), ay(n, 6.0), yaw(n, 6.0 / 15.0);
    auto out = attitude_velocity(yaw, ay, vx, 5.0);
    CHECK(out.valid_count() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out.value[i] == doctest::Approx(0.0));
}

TEST_CASE("attitude velocity direct substitution") {
    auto out = attitude_velocity({0.5}, {4.0}, {10.0}, 5.0);
    CHECK(out.valid[0] == 1);
    CHECK(out.value[0] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("attitude velocity masks slow samples instead of dividing") {
    auto out = attitude_velocity({0.5, 0.5}, {4.0, 4.0}, {10.0, 2.0}, 5.0);
    CHECK(out.valid[0] == 1);
    CHECK(out.valid[1] == 0);
    CHECK(out.value[1] == 0.0);
    CHECK(out.valid_count() == 1);
}

TEST_CASE("slip angles: straight driving gives zeros") {
    VehicleParams params;
    auto out = slip_angles({0.0}, {20.0}, {0.0}, {0.0}, params, 5.0);
    CHECK(out.alpha_f.value[0] == doctest::Approx(0.0));
    CHECK(out.alpha_r.value[0] == doctest::Approx(0.0));
    CHECK(out.d_slip.value[0] == doctest::Approx(0.0));
}

TEST_CASE("slip angles: steer-only input is understeer-positive") {
    VehicleParams params;
    auto out = slip_angles({0.05}, {20.0}, {0.0}, {0.0}, params, 5.0);
    CHECK(out.alpha_f.value[0] == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(out.alpha_r.value[0] == doctest::Approx(0.0));
    CHECK(out.d_slip.value[0] == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("slip angles match an independent scalar oracle") {
    VehicleParams params;
    params.lf = 1.2;
    params.lr = 1.7;
    auto gen = testutil::rng(14);
    std::uniform_real_distribution<double> small(-0.5, 0.5);
    std::uniform_real_distribution<double> speed(6.0, 60.0);
    const std::size_t n = 2000;
    std::vector<double> steer(n), vx(n), vy(n), yaw(n);
    for (std::size_t i = 0; i < n; ++i) {
        steer[i] = small(gen);
        vx[i] = speed(gen);
        vy[i] = small(gen) * 4.0;
        yaw[i] = small(gen);
    }
    auto out = slip_angles(steer, vx, vy, yaw, params, 5.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double af = steer[i] - std::atan((vy[i] + params.lf * yaw[i]) / vx[i]);
        const double ar = -std::atan((vy[i] - params.lr * yaw[i]) / vx[i]);
        REQUIRE(out.alpha_f.valid[i] == 1);
        CHECK(std::abs(out.alpha_f.value[i] - af) < 1e-12);
        CHECK(std::abs(out.alpha_r.value[i] - ar) < 1e-12);
        CHECK(std::abs(out.d_slip.value[i] - (af - ar)) < 1e-12);
    }
}

TEST_CASE("property: slip angles are antisymmetric under mirroring") {
    VehicleParams params;
    auto gen = testutil::rng(15);
    std::uniform_real_distribution<double> small(-0.4, 0.4);
    for (int trial = 0; trial < 200; ++trial) {
        const double steer = small(gen), vy = small(gen), yaw = small(gen), vx = 25.0;
        auto pos = slip_angles({steer}, {vx}, {vy}, {yaw}, params, 5.0);
        auto neg = slip_angles({-steer}, {vx}, {-vy}, {-yaw}, params, 5.0);
        CHECK(std::abs(pos.alpha_f.value[0] + neg.alpha_f.value[0]) < 1e-12);
        CHECK(std::abs(pos.alpha_r.value[0] + neg.alpha_r.value[0]) < 1e-12);
        CHECK(std::abs(pos.d_slip.value[0] + neg.d_slip.value[0]) < 1e-12);
    }
}

TEST_CASE("artificial throttle clamps the force request") {
    VehicleParams params;
    params.f_long_max = 8000.0;
    auto out = artificial_throttle({8000.0, -5000.0, 4000.0, 12000.0}, params);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(0.0));
    CHECK(out[2] == doctest::Approx(0.5));
    CHECK(out[3] == doctest::Approx(1.0));
}

TEST_CASE("compute_all passes measured throttle through bitwise for human laps") {
    Lap lap = testutil::make_lap(300, 0.01, [](std::size_t i, double, TelemetrySample& s) {
        s.throttle = 0.01 * static_cast<double>(i % 100);
    });
    ChannelConfig cfg;
    auto ch = compute_all(lap, VehicleParams{}, cfg);
    for (std::size_t i = 0; i < lap.size(); ++i) {
        CHECK(ch.throttle_eff[i] == lap.samples[i].throttle);
    }
}

TEST_CASE("compute_all uses the artificial throttle when the force channel exists") {
    VehicleParams params;
    Lap lap = testutil::make_lap(
        300, 0.01,
        [&](std::size_t, double, TelemetrySample& s) { s.f_long_req = 0.25 * params.f_long_max; },
        DriverTag::software);
    ChannelConfig cfg;
    auto ch = compute_all(lap, params, cfg);
    for (double v : ch.throttle_eff) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("software lap with neither force request nor throttle is an error") {
    Lap lap = testutil::make_lap(300, 0.01, nullptr, DriverTag::software);
    ChannelConfig cfg;
    try {
        compute_all(lap, VehicleParams{}, cfg);
        FAIL("expected MissingChannel");
    } catch (const Error& e) {
        CHECK(e.code() == errc::missing_channel);
    }
}

TEST_CASE("compute_all: constant brake ramp gives a constant pressure rate") {
    const double slope = 40.0;  // bar/s on the total
    Lap lap = testutil::make_lap(300, 0.01, [&](std::size_t, double t, TelemetrySample& s) {
        s.p_brake_f = 0.6 * slope * t;
        s.p_brake_r = 0.4 * slope * t;
    });
    auto ch = compute_all(lap, VehicleParams{}, ChannelConfig{});
    for (std::size_t i = 0; i < lap.size(); ++i) {
        CHECK(ch.p_brake_rate[i] == doctest::Approx(slope).epsilon(1e-9));
    }
}

TEST_CASE("property: smoothing and differentiation commute on the interior") {
    auto gen = testutil::rng(16);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    const double dt = 0.01;
    std::vector<double> sig(512);
    for (auto& v : sig) v = value(gen);

    auto a = derivative(smooth(sig, 0.1, dt), dt);
    auto b = smooth(derivative(sig, dt), 0.1, dt);
    // Full windows and central differences everywhere: stay clear of edges.
    for (std::size_t i = 7; i + 7 < sig.size(); ++i) {
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
}
