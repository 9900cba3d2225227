#pragma once

#include <array>
#include <complex>

namespace gapwatch {

/// Two-level car-following controller parameters: constant-time-headway upper
/// level (tau_star, s0) and linear state feedback + feedforward lower level
/// over first-order-lag vehicle dynamics (T, K).
struct ControllerParams {
    double tau_star = 1.6;  // desired time gap, s
    double s0 = 5.0;        // standstill spacing, m
    double T = 0.45;        // actuation lag, s
    double K = 1.0;         // commanded-to-realized ratio
    std::array<double, 3> k{0.45, 1.5, -0.3};  // feedback gains on [dd, dv, a]
    double kf = 0.6;        // feedforward gain on delayed leader acceleration
    double theta = 0.2;     // communication delay, s
    double u_min = -5.0;    // m/s^2
    double u_max = 3.0;     // m/s^2
};

struct VehicleState {
    double x = 0.0;  // position, m
    double v = 0.0;  // speed, m/s (>= 0)
    double a = 0.0;  // realized acceleration, m/s^2
    double u = 0.0;  // commanded acceleration, m/s^2
};

/// Spacing/speed/acceleration error state [dd, dv, a].
struct ErrorState {
    double dd = 0.0;  // deviation from desired spacing, m
    double dv = 0.0;  // leader speed minus follower speed, m/s
    double a = 0.0;   // follower realized acceleration, m/s^2
};

struct StateMatrices {
    std::array<std::array<double, 3>, 3> A{};
    std::array<double, 3> B{};
    std::array<double, 3> D{};
};

/// Desired spacing under the constant-time-headway policy: v*tau_star + s0.
double desired_spacing(double v, const ControllerParams& params);

/// Error state of a follower against its leader. Throws CollisionDetected when
/// leader.x <= follower.x.
ErrorState derive_error_state(const VehicleState& leader, const VehicleState& follower,
                              const ControllerParams& params);

/// Commanded acceleration: k . [dd, dv, a] + kf * a_leader(t - theta), clamped
/// to [u_min, u_max].
double command_accel(const ErrorState& err, double lead_accel_delayed,
                     const ControllerParams& params);

/// One forward-Euler step of the first-order-lag dynamics:
/// a' = a + dt*(-a + K*u)/T, v' = max(0, v + dt*a), x' = x + dt*v.
VehicleState step_glvd(const VehicleState& state, double u, double dt,
                       const ControllerParams& params);

/// Error-state dynamics matrices. Note A[0][2] = -tau_star: differentiating
/// dd = s - (tau_star*v + s0) gives dd' = dv - tau_star*a.
StateMatrices build_state_matrices(const ControllerParams& params);

/// Eigenvalues of the closed loop A + B*k^T. The loop is stable iff every real
/// part is strictly negative.
std::array<std::complex<double>, 3> check_stability(const ControllerParams& params);

bool is_stable(const ControllerParams& params);

/// Throws InvariantViolation naming the first violated parameter invariant
/// (positivity constraints, u_min < u_max, closed-loop stability).
void validate(const ControllerParams& params);

}  // namespace gapwatch
