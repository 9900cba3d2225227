#include "gapwatch/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>

#include "gapwatch/errors.hpp"
#include "gapwatch/rng.hpp"

namespace gapwatch {

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw InvariantViolation("sim.dt must be > 0");
    if (!(duration >= dt)) throw InvariantViolation("sim.duration must be >= dt");
    if (n_followers < 1) throw InvalidConfig("sim.n_followers must be >= 1");
    if (!(noise_var > 0.0)) throw InvariantViolation("sim.noise_var must be > 0");
    if (window_len < 1) throw InvariantViolation("sim.window_len must be >= 1");
    if (!(retune_target > 0.0)) throw InvariantViolation("retune.target must be > 0");
    if (max_retunes < 0) throw InvariantViolation("retune.max_changes must be >= 0");
    if (!(lead_v0 >= 0.0)) throw InvariantViolation("lead.v0 must be >= 0");
    gapwatch::validate(controller);
    prior.validate();
    chart.validate();
    trigger.validate();
    if (std::abs(chart.mu_desired - controller.tau_star) > 1e-12) {
        throw InvalidConfig("chart center must equal controller.tau_star");
    }
    if (lead_profile.size() == 0) throw InvalidConfig("lead profile is empty");
    if (std::abs(lead_profile.dt - dt) > 1e-12) {
        throw InvalidConfig("lead profile dt does not match sim.dt");
    }
    if (init_mode == InitMode::explicit_states &&
        explicit_states.size() != static_cast<std::size_t>(n_followers)) {
        throw InvalidConfig("explicit initial states count does not match n_followers");
    }
}

std::vector<VehicleState> init_platoon(const SimConfig& config) {
    if (config.n_followers < 1) throw InvalidConfig("n_followers must be >= 1");
    if (config.init_mode == InitMode::explicit_states) {
        if (config.explicit_states.size() != static_cast<std::size_t>(config.n_followers)) {
            throw InvalidConfig("explicit initial states count does not match n_followers");
        }
        return config.explicit_states;
    }
    std::vector<VehicleState> states(static_cast<std::size_t>(config.n_followers));
    const double gap = desired_spacing(config.lead_v0, config.controller);
    for (int i = 0; i < config.n_followers; ++i) {
        states[static_cast<std::size_t>(i)] =
            VehicleState{config.lead_x0 - gap * static_cast<double>(i + 1), config.lead_v0, 0.0, 0.0};
    }
    return states;
}

namespace {

// Lead trajectory covering exactly n_steps grid points; the profile is
// extended with zero acceleration (cruise) when it is shorter than the run.
LeadTrajectory lead_for_run(const SimConfig& config, std::size_t n_steps) {
    AccelProfile profile = config.lead_profile;
    if (profile.size() < n_steps) {
        const double t0 = profile.t.empty() ? 0.0 : profile.t.front();
        while (profile.size() < n_steps) {
            profile.t.push_back(t0 + static_cast<double>(profile.t.size()) * profile.dt);
            profile.a.push_back(0.0);
        }
    }
    LeadTrajectory lead = integrate_lead(profile, config.lead_v0, config.lead_x0);
    lead.t.resize(n_steps);
    lead.x.resize(n_steps);
    lead.v.resize(n_steps);
    lead.a.resize(n_steps);
    return lead;
}

}  // namespace

RunResult run(const SimConfig& config) {
    config.validate();

    const std::size_t n_steps = static_cast<std::size_t>(std::llround(config.duration / config.dt)) + 1;
    const auto n = static_cast<std::size_t>(config.n_followers);
    const auto delay_steps =
        static_cast<std::size_t>(std::ceil(config.controller.theta / config.dt - 1e-12));

    RunResult result;
    result.lead = lead_for_run(config, n_steps);
    result.records.reserve(n_steps * n);

    std::vector<VehicleState> states = init_platoon(config);
    std::vector<ControllerParams> params(n, config.controller);
    std::vector<MeasurementWindow> windows(n, MeasurementWindow(config.window_len));
    std::vector<ChartState> charts(n, ChartState(config.chart, config.counting));
    std::vector<NormalSampler> noise;
    noise.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        noise.emplace_back(vehicle_stream_seed(config.rng_seed, static_cast<int>(i) + 1));
    }
    // Realized acceleration history per follower, consumed (delayed) by the
    // next vehicle's feedforward term.
    std::vector<std::vector<double>> accel_history(n);
    for (auto& h : accel_history) h.reserve(n_steps);

    const double noise_std = std::sqrt(config.noise_var);
    int retunes_done = 0;

    for (std::size_t step = 0; step < n_steps && !result.collided; ++step) {
        const double t = static_cast<double>(step) * config.dt;
        std::vector<double> commands(n, 0.0);

        for (std::size_t i = 0; i < n; ++i) {
            const int vehicle_id = static_cast<int>(i) + 1;
            const VehicleState leader =
                i == 0 ? VehicleState{result.lead.x[step], result.lead.v[step], result.lead.a[step], 0.0}
                       : states[i - 1];
            const VehicleState& self = states[i];

            const double spacing_true = leader.x - self.x;
            if (spacing_true <= 0.0) {
                result.collided = true;
                result.collision_time = t;
                break;
            }
            const double spacing_measured =
                config.noise_enabled ? spacing_true + noise_std * noise[i]() : spacing_true;

            windows[i].push(self.v, spacing_measured);
            const GaussianBelief belief =
                windowed_estimate(config.prior, windows[i].batch(config.noise_var));

            // Chart once the estimation window has filled (warm-up guard).
            const ChartLimits checked_limits = charts[i].limits();
            bool violation = false;
            if (windows[i].full()) {
                if (const auto event = charts[i].observe(belief.mean_tau(), t, vehicle_id)) {
                    violation = true;
                    result.events.push_back(LogEvent{t, vehicle_id, "violation", event->value,
                                                     checked_limits.lcl, checked_limits.ucl});
                    if (charts[i].should_trigger(config.trigger, t) && retunes_done < config.max_retunes) {
                        ++retunes_done;
                        result.events.push_back(LogEvent{t, vehicle_id, "trigger", event->value,
                                                         checked_limits.lcl, checked_limits.ucl});
                        if (config.retune_scope == RetuneScope::platoon) {
                            for (std::size_t j = 0; j < n; ++j) {
                                params[j].tau_star = config.retune_target;
                                charts[j].retune(config.retune_target);
                            }
                        } else {
                            params[i].tau_star = config.retune_target;
                            charts[i].retune(config.retune_target);
                        }
                    }
                }
            }

            const double lead_accel_delayed =
                [&]() -> double {
                if (step < delay_steps) return 0.0;
                const std::size_t past = step - delay_steps;
                return i == 0 ? result.lead.a[past] : accel_history[i - 1][past];
            }();

            const ErrorState err = derive_error_state(leader, self, params[i]);
            commands[i] = command_accel(err, lead_accel_delayed, params[i]);

            SimRecord row;
            row.t = t;
            row.vehicle_id = vehicle_id;
            row.x = self.x;
            row.v = self.v;
            row.a = self.a;
            row.u = commands[i];
            row.spacing_true = spacing_true;
            row.spacing_measured = spacing_measured;
            row.tau_hat = belief.mean_tau();
            row.tau_var = belief.var_tau();
            row.lcl = checked_limits.lcl;
            row.ucl = checked_limits.ucl;
            row.violation = violation;
            row.active_tau_star = params[i].tau_star;
            result.records.push_back(row);
        }

        if (result.collided) break;

        for (std::size_t i = 0; i < n; ++i) {
            accel_history[i].push_back(states[i].a);
            const VehicleState next = step_glvd(states[i], commands[i], config.dt, params[i]);
            assert(next.x == states[i].x + config.dt * states[i].v);
            states[i] = next;
        }
    }

    if (!result.records.empty()) {
        result.summary = summarize(result.records);
    }
    result.summary.collided = result.collided;
    result.summary.collision_time = result.collision_time;
    result.summary.duration = config.duration;
    return result;
}

Summary summarize(const std::vector<SimRecord>& records) {
    if (records.empty()) throw EmptyStream("no records to summarize");

    std::map<int, std::vector<const SimRecord*>> by_vehicle;
    for (const auto& r : records) by_vehicle[r.vehicle_id].push_back(&r);

    Summary summary;
    for (const auto& [vehicle_id, rows] : by_vehicle) {
        VehicleSummary vs;
        vs.vehicle_id = vehicle_id;
        vs.tau_hat_max = rows.front()->tau_hat;
        vs.tau_hat_min = rows.front()->tau_hat;

        double sum = 0.0;
        for (const auto* r : rows) {
            vs.tau_hat_max = std::max(vs.tau_hat_max, r->tau_hat);
            vs.tau_hat_min = std::min(vs.tau_hat_min, r->tau_hat);
            sum += r->tau_hat;
            if (r->violation) ++vs.violation_count;
        }
        const double mean = sum / static_cast<double>(rows.size());
        double ss = 0.0;
        for (const auto* r : rows) ss += (r->tau_hat - mean) * (r->tau_hat - mean);
        vs.tau_hat_std = std::sqrt(ss / static_cast<double>(rows.size()));

        RegimeStats regime;
        regime.tau_star = rows.front()->active_tau_star;
        regime.t_start = rows.front()->t;
        bool first_regime = true;
        auto flush = [&](double t_end) {
            regime.t_end = t_end;
            vs.regimes.push_back(regime);
        };
        for (const auto* r : rows) {
            if (r->active_tau_star != regime.tau_star) {
                flush(r->t);
                vs.trigger_times.push_back(r->t);
                regime = RegimeStats{};
                regime.tau_star = r->active_tau_star;
                regime.t_start = r->t;
                first_regime = false;
            }
            const double dev = std::abs(r->tau_hat - regime.tau_star);
            ++regime.samples;
            regime.max_abs_dev = std::max(regime.max_abs_dev, dev);
            if (first_regime || r->t >= regime.t_start + kRegimeSettleExclusion) {
                ++regime.settled_samples;
                regime.max_abs_dev_settled = std::max(regime.max_abs_dev_settled, dev);
            }
        }
        flush(rows.back()->t);
        summary.vehicles.push_back(std::move(vs));
    }
    return summary;
}

}  // namespace gapwatch
