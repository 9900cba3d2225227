#include "gapwatch/controller.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gapwatch/errors.hpp"

namespace gapwatch {

double desired_spacing(double v, const ControllerParams& params) {
    return v * params.tau_star + params.s0;
}

ErrorState derive_error_state(const VehicleState& leader, const VehicleState& follower,
                              const ControllerParams& params) {
    if (leader.x <= follower.x) {
        throw CollisionDetected("leader at x = " + std::to_string(leader.x) +
                                " is not ahead of follower at x = " + std::to_string(follower.x));
    }
    ErrorState err;
    err.dd = (leader.x - follower.x) - desired_spacing(follower.v, params);
    err.dv = leader.v - follower.v;
    err.a = follower.a;
    return err;
}

double command_accel(const ErrorState& err, double lead_accel_delayed,
                     const ControllerParams& params) {
    const double raw = params.k[0] * err.dd + params.k[1] * err.dv + params.k[2] * err.a +
                       params.kf * lead_accel_delayed;
    return std::clamp(raw, params.u_min, params.u_max);
}

VehicleState step_glvd(const VehicleState& state, double u, double dt,
                       const ControllerParams& params) {
    VehicleState next;
    next.a = state.a + dt * ((-state.a + params.K * u) / params.T);
    next.v = std::max(0.0, state.v + dt * state.a);
    next.x = state.x + dt * state.v;
    next.u = u;
    return next;
}

StateMatrices build_state_matrices(const ControllerParams& params) {
    StateMatrices m;
    m.A = {{{0.0, 1.0, -params.tau_star},
            {0.0, 0.0, -1.0},
            {0.0, 0.0, -1.0 / params.T}}};
    m.B = {0.0, 0.0, params.K / params.T};
    m.D = {0.0, 1.0, 0.0};
    return m;
}

std::array<std::complex<double>, 3> check_stability(const ControllerParams& params) {
    const StateMatrices m = build_state_matrices(params);
    Eigen::Matrix3d closed;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            closed(r, c) = m.A[r][c] + m.B[r] * params.k[c];
        }
    }
    const Eigen::EigenSolver<Eigen::Matrix3d> solver(closed, /*computeEigenvectors=*/false);
    std::array<std::complex<double>, 3> eigs;
    for (int i = 0; i < 3; ++i) eigs[i] = solver.eigenvalues()(i);
    return eigs;
}

bool is_stable(const ControllerParams& params) {
    for (const auto& lambda : check_stability(params)) {
        if (!(lambda.real() < 0.0)) return false;
    }
    return true;
}

void validate(const ControllerParams& params) {
    if (!(params.T > 0.0)) throw InvariantViolation("controller.T must be > 0");
    if (!(params.tau_star > 0.0)) throw InvariantViolation("controller.tau_star must be > 0");
    if (!(params.s0 >= 0.0)) throw InvariantViolation("controller.s0 must be >= 0");
    if (!(params.theta >= 0.0)) throw InvariantViolation("controller.theta must be >= 0");
    if (!(params.u_min < params.u_max)) throw InvariantViolation("controller.u_min must be < u_max");
    if (!std::isfinite(params.K) || params.K == 0.0) throw InvariantViolation("controller.K must be finite and nonzero");
    if (!is_stable(params)) {
        throw InvariantViolation(
            "closed loop A + B*k^T is not stable: some eigenvalue has a nonnegative real part");
    }
}

}  // namespace gapwatch
