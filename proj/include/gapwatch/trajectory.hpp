#pragma once

#include <string>
#include <vector>

namespace gapwatch {

/// Uniformly sampled acceleration profile for the lead vehicle.
/// Invariants: t strictly increasing with constant spacing dt > 0, all finite.
struct AccelProfile {
    std::vector<double> t;  // seconds
    std::vector<double> a;  // m/s^2
    double dt = 0.0;        // seconds

    std::size_t size() const { return t.size(); }
};

/// Lead-vehicle trajectory on the simulation grid. `a` holds the realized
/// (speed-clamp aware) acceleration, so it is what a follower's feedforward
/// term actually sees.
struct LeadTrajectory {
    std::vector<double> t;
    std::vector<double> x;  // nondecreasing
    std::vector<double> v;  // >= 0
    std::vector<double> a;

    std::size_t size() const { return t.size(); }
};

/// Parse a two-column CSV (t, a) and resample it onto an `expected_dt` grid
/// by linear interpolation. An optional header row is detected by a
/// non-numeric first cell. Throws MalformedRow, NonMonotonicTime, EmptyProfile.
AccelProfile load_accel_profile(const std::string& path, double expected_dt);

/// Same parser over an in-memory string; the file loader delegates here.
AccelProfile parse_accel_csv(const std::string& text, double expected_dt);

/// Square-wave acceleration profile that, integrated from v_low, ramps between
/// v_low and v_high for n_cycles (accelerate first). Ramp lengths are rounded
/// to the nearest whole step, so the integrated speed can overshoot the band
/// by at most a_mag*dt.
AccelProfile synth_oscillation_profile(double v_low, double v_high, double a_mag,
                                       int n_cycles, double dt);

/// Forward-Euler integration of a profile from (v0, x0) with the speed clamped
/// at zero: v' = max(0, v + a*dt), x' = x + v*dt.
LeadTrajectory integrate_lead(const AccelProfile& profile, double v0, double x0);

}  // namespace gapwatch
