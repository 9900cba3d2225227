#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gapwatch/controller.hpp"
#include "gapwatch/estimator.hpp"
#include "gapwatch/monitor.hpp"
#include "gapwatch/trajectory.hpp"

namespace gapwatch {

enum class InitMode { equilibrium, explicit_states };
enum class RetuneScope { vehicle, platoon };

/// Full scenario configuration for one run.
struct SimConfig {
    double dt = 0.1;          // s
    double duration = 250.0;  // s
    int n_followers = 5;

    ControllerParams controller{};
    GaussianBelief prior{{1.0, 1.6}, {1e-4, -1e-5, -1e-5, 0.125}};
    double noise_var = 0.01;    // sigma^2 of the spacing measurement, m^2
    bool noise_enabled = true;  // off -> spacing_measured == spacing_true exactly

    ChartSpec chart{1.6, 0.125, 2.0};  // mu_desired tracks controller.tau_star
    TriggerRule trigger{3, 35.0};
    ViolationCounting counting = ViolationCounting::excursions;
    double retune_target = 1.0;
    RetuneScope retune_scope = RetuneScope::vehicle;
    int max_retunes = 1;

    std::size_t window_len = 50;  // estimation window, samples
    std::uint64_t rng_seed = 1;

    AccelProfile lead_profile{};
    double lead_v0 = 8.9408;  // 20 mph
    double lead_x0 = 0.0;

    InitMode init_mode = InitMode::equilibrium;
    std::vector<VehicleState> explicit_states{};  // used when init_mode == explicit_states

    void validate() const;  // throws InvalidConfig / InvariantViolation
};

/// One output row per (step, follower).
struct SimRecord {
    double t = 0.0;
    int vehicle_id = 0;  // 1-based follower index
    double x = 0.0;
    double v = 0.0;
    double a = 0.0;
    double u = 0.0;
    double spacing_true = 0.0;
    double spacing_measured = 0.0;
    double tau_hat = 0.0;  // posterior mean of the time gap
    double tau_var = 0.0;  // posterior variance of the time gap
    double lcl = 0.0;      // limits the statistic was checked against this step
    double ucl = 0.0;
    bool violation = false;
    double active_tau_star = 0.0;  // setting used for control this step
};

/// Violation/trigger entry for the event log.
struct LogEvent {
    double t = 0.0;
    int vehicle_id = 0;
    std::string kind;  // "violation" or "trigger"
    double value = 0.0;
    double lcl = 0.0;
    double ucl = 0.0;
};

/// Per-regime statistics for one vehicle. A regime is a maximal span with one
/// active tau_star. max_abs_dev_settled skips the first settle_exclusion
/// seconds after a setting change, when the spacing still reflects the old
/// setting.
struct RegimeStats {
    double tau_star = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t samples = 0;
    double max_abs_dev = 0.0;
    double max_abs_dev_settled = 0.0;
    std::size_t settled_samples = 0;
};

struct VehicleSummary {
    int vehicle_id = 0;
    double tau_hat_max = 0.0;
    double tau_hat_min = 0.0;
    double tau_hat_std = 0.0;  // over post-warmup samples
    std::size_t violation_count = 0;
    std::vector<double> trigger_times;
    std::vector<RegimeStats> regimes;
};

struct Summary {
    std::vector<VehicleSummary> vehicles;
    bool collided = false;
    double collision_time = 0.0;
    double duration = 0.0;
};

struct RunResult {
    std::vector<SimRecord> records;  // step-major, then vehicle 1..n
    std::vector<LogEvent> events;
    Summary summary;
    LeadTrajectory lead;
    bool collided = false;
    double collision_time = 0.0;
};

/// Seconds excluded from the settled regime maximum after a setting change.
inline constexpr double kRegimeSettleExclusion = 15.0;

/// Follower states at t = 0. Equilibrium mode places follower i at the desired
/// spacing v0*tau_star + s0 behind vehicle i-1 at speed v0.
std::vector<VehicleState> init_platoon(const SimConfig& config);

/// Run the full scenario. Deterministic given (config, rng_seed). A collision
/// stops the run early with the partial output flagged.
RunResult run(const SimConfig& config);

/// Aggregate per-vehicle statistics from a record stream. Violation counts and
/// regime boundaries are reconstructed from the rows. Throws EmptyStream.
Summary summarize(const std::vector<SimRecord>& records);

}  // namespace gapwatch
