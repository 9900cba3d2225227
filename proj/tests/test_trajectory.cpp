#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gapwatch/errors.hpp"
#include "gapwatch/trajectory.hpp"

using namespace gapwatch;

TEST_CASE("csv parse: on-grid input is returned verbatim") {
    const auto p = parse_accel_csv("0,0\n0.1,0\n0.2,0\n", 0.1);
    REQUIRE(p.size() == 3);
    CHECK(p.dt == 0.1);
    CHECK(p.t[0] == 0.0);
    CHECK(p.t[1] == 0.1);
    CHECK(p.t[2] == 0.2);
    CHECK(p.a[0] == 0.0);
    CHECK(p.a[1] == 0.0);
    CHECK(p.a[2] == 0.0);
}

TEST_CASE("csv parse: coarse input is linearly interpolated onto the grid") {
    // Hand interpolation: a(0)=0, a(0.2)=2, a(0.4)=4 -> midpoints 1 and 3.
    const auto p = parse_accel_csv("0,0\n0.2,2\n0.4,4\n", 0.1);
    REQUIRE(p.size() == 5);
    CHECK(p.a[0] == doctest::Approx(0.0));
    CHECK(p.a[1] == doctest::Approx(1.0));
    CHECK(p.a[2] == doctest::Approx(2.0));
    CHECK(p.a[3] == doctest::Approx(3.0));
    CHECK(p.a[4] == doctest::Approx(4.0));
    CHECK(p.t[4] == doctest::Approx(0.4));
}

TEST_CASE("csv parse: header row is detected by a non-numeric first cell") {
    const auto p = parse_accel_csv("t,a\n0,1.5\n0.1,2.5\n", 0.1);
    REQUIRE(p.size() == 2);
    CHECK(p.a[0] == 1.5);
    CHECK(p.a[1] == 2.5);
}

TEST_CASE("csv parse: error cases") {
    CHECK_THROWS_AS(parse_accel_csv("0,0\n0.1,abc\n", 0.1), MalformedRow);
    CHECK_THROWS_AS(parse_accel_csv("0,0,9\n", 0.1), MalformedRow);
    CHECK_THROWS_AS(parse_accel_csv("0\n", 0.1), MalformedRow);
    CHECK_THROWS_AS(parse_accel_csv("0,inf\n", 0.1), MalformedRow);
    CHECK_THROWS_AS(parse_accel_csv("0,0\n0,1\n", 0.1), NonMonotonicTime);
    CHECK_THROWS_AS(parse_accel_csv("0.5,0\n0.2,1\n", 0.1), NonMonotonicTime);
    CHECK_THROWS_AS(parse_accel_csv("", 0.1), EmptyProfile);
    CHECK_THROWS_AS(parse_accel_csv("t,a\n", 0.1), EmptyProfile);
}

TEST_CASE("csv parse: resampling an already-on-grid profile is the identity") {
    const std::string text = "0,0.3\n0.1,-1.25\n0.2,2\n0.3,0\n";
    const auto once = parse_accel_csv(text, 0.1);
    // Round-trip through formatting is not needed: the parser must hand back
    // the node values bit-for-bit.
    CHECK(once.a[0] == 0.3);
    CHECK(once.a[1] == -1.25);
    CHECK(once.a[2] == 2.0);
    CHECK(once.a[3] == 0.0);
}

TEST_CASE("synth profile: ramp lengths follow v = v0 + a*t") {
    // (35.76 - 8.94) / 2.0 = 13.41 s per ramp -> 134 steps at dt = 0.1.
    const auto p = synth_oscillation_profile(8.94, 35.76, 2.0, 1, 0.1);
    REQUIRE(p.size() == 268);
    CHECK(p.a[0] == 2.0);
    CHECK(p.a[133] == 2.0);
    CHECK(p.a[134] == -2.0);
    CHECK(p.a[267] == -2.0);
    CHECK(p.t[1] - p.t[0] == doctest::Approx(0.1));
    CHECK(p.t.back() == doctest::Approx(26.7));
}

TEST_CASE("synth profile: invalid ranges") {
    CHECK_THROWS_AS(synth_oscillation_profile(10.0, 10.0, 2.0, 1, 0.1), InvalidRange);
    CHECK_THROWS_AS(synth_oscillation_profile(12.0, 10.0, 2.0, 1, 0.1), InvalidRange);
    CHECK_THROWS_AS(synth_oscillation_profile(8.0, 10.0, 0.0, 1, 0.1), InvalidRange);
    CHECK_THROWS_AS(synth_oscillation_profile(8.0, 10.0, -1.0, 1, 0.1), InvalidRange);
    CHECK_THROWS_AS(synth_oscillation_profile(8.0, 10.0, 2.0, 0, 0.1), InvalidRange);
    CHECK_THROWS_AS(synth_oscillation_profile(-1.0, 10.0, 2.0, 1, 0.1), InvalidRange);
}

TEST_CASE("synth profile: integrated speed stays within the band plus one step of slack") {
    struct Case {
        double v_low, v_high, a_mag, dt;
        int cycles;
    };
    for (const auto& c : {Case{8.9408, 35.7632, 3.2, 0.1, 4}, Case{0.0, 10.0, 1.7, 0.05, 3},
                          Case{5.0, 6.0, 0.33, 0.1, 2}}) {
        const auto p = synth_oscillation_profile(c.v_low, c.v_high, c.a_mag, c.cycles, c.dt);
        const auto traj = integrate_lead(p, c.v_low, 0.0);
        for (const double v : traj.v) {
            CHECK(v >= c.v_low - c.a_mag * c.dt);
            CHECK(v <= c.v_high + c.a_mag * c.dt);
        }
        // Symmetric ramps return to v_low at the end of every cycle.
        CHECK(traj.v.back() == doctest::Approx(c.v_low + c.a_mag * c.dt).epsilon(1.0));
    }
}

TEST_CASE("integrate_lead: constant speed under a zero profile") {
    AccelProfile p;
    p.dt = 0.1;
    for (int k = 0; k < 20; ++k) {
        p.t.push_back(0.1 * k);
        p.a.push_back(0.0);
    }
    const auto traj = integrate_lead(p, 10.0, 0.0);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        CHECK(traj.v[k] == 10.0);
        CHECK(traj.x[k] == doctest::Approx(10.0 * 0.1 * static_cast<double>(k)));
        CHECK(traj.a[k] == 0.0);
    }
}

TEST_CASE("integrate_lead: speed clamps at zero and stays there") {
    AccelProfile p;
    p.dt = 0.1;
    for (int k = 0; k < 6; ++k) {
        p.t.push_back(0.1 * k);
        p.a.push_back(-5.0);
    }
    const auto traj = integrate_lead(p, 1.0, 0.0);
    CHECK(traj.v[0] == 1.0);
    CHECK(traj.v[1] == doctest::Approx(0.5));
    CHECK(traj.v[2] == 0.0);  // reaches zero at t = 0.2
    CHECK(traj.v[3] == 0.0);
    CHECK(traj.v[5] == 0.0);
    // Realized acceleration reflects the clamp, not the profile.
    CHECK(traj.a[2] == 0.0);
    CHECK(traj.a[0] == doctest::Approx(-5.0));
}

TEST_CASE("integrate_lead: hand Euler summation") {
    AccelProfile p;
    p.dt = 0.1;
    for (int k = 0; k <= 10; ++k) {
        p.t.push_back(0.1 * k);
        p.a.push_back(2.0);
    }
    const auto traj = integrate_lead(p, 0.0, 0.0);
    CHECK(traj.v[10] == doctest::Approx(2.0));
    CHECK(traj.x[10] == doctest::Approx(0.9));  // 0.1 * sum_{k=0}^{9} 0.2k
}

TEST_CASE("integrate_lead: finite differencing of v recovers the stored acceleration") {
    const auto p = synth_oscillation_profile(0.5, 9.0, 2.1, 2, 0.1);
    const auto traj = integrate_lead(p, 0.5, -3.0);
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        const double fd = (traj.v[k + 1] - traj.v[k]) / p.dt;
        CHECK(std::abs(fd - traj.a[k]) <= 1e-9);
        if (traj.v[k] + p.a[k] * p.dt > 0.0) {  // clamp inactive
            CHECK(std::abs(fd - p.a[k]) <= 1e-9);
        }
    }
    // Trajectory invariants: v >= 0, x nondecreasing.
    for (std::size_t k = 0; k < traj.size(); ++k) CHECK(traj.v[k] >= 0.0);
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) CHECK(traj.x[k + 1] >= traj.x[k]);
}

TEST_CASE("integrate_lead: negative v0 rejected") {
    AccelProfile p;
    p.dt = 0.1;
    p.t = {0.0};
    p.a = {0.0};
    CHECK_THROWS_AS(integrate_lead(p, -1.0, 0.0), InvalidRange);
}
