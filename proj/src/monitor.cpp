#include "gapwatch/monitor.hpp"

#include "gapwatch/errors.hpp"

namespace gapwatch {

void ChartSpec::validate() const {
    if (!(sigma_desired > 0.0)) throw InvariantViolation("chart.sigma_desired must be > 0");
    if (!(L > 0.0)) throw InvariantViolation("chart.L must be > 0");
}

void TriggerRule::validate() const {
    if (k_violations < 1) throw InvariantViolation("trigger.k_violations must be >= 1");
    if (!(window > 0.0)) throw InvariantViolation("trigger.window must be > 0");
}

ChartLimits compute_limits(const ChartSpec& spec) {
    return {spec.mu_desired - spec.L * spec.sigma_desired, spec.mu_desired,
            spec.mu_desired + spec.L * spec.sigma_desired};
}

std::optional<ViolationEvent> check_point(double value, const ChartLimits& limits, double t,
                                          int vehicle_id) {
    if (value > limits.ucl) return ViolationEvent{t, vehicle_id, value, Side::above};
    if (value < limits.lcl) return ViolationEvent{t, vehicle_id, value, Side::below};
    return std::nullopt;
}

bool should_trigger(const std::vector<ViolationEvent>& history, const TriggerRule& rule,
                    double now) {
    int count = 0;
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (it->t > now) continue;
        if (it->t <= now - rule.window) break;  // history is time-ordered
        if (++count >= rule.k_violations) return true;
    }
    return false;
}

ChartSpec retune(const ChartSpec& current, double new_tau) {
    if (!(new_tau > 0.0)) throw InvariantViolation("retune target must be > 0");
    ChartSpec next = current;
    next.mu_desired = new_tau;
    return next;
}

ChartState::ChartState(const ChartSpec& spec, ViolationCounting counting)
    : spec_(spec), limits_(compute_limits(spec)), counting_(counting) {
    spec_.validate();
}

std::optional<ViolationEvent> ChartState::observe(double value, double t, int vehicle_id) {
    const auto raw = check_point(value, limits_, t, vehicle_id);
    if (!raw) {
        armed_ = true;
        in_excursion_ = false;
        return std::nullopt;
    }
    if (!armed_) return std::nullopt;
    if (counting_ == ViolationCounting::excursions && in_excursion_ && last_side_ == raw->side) {
        return std::nullopt;  // continuation of the current excursion
    }
    in_excursion_ = true;
    last_side_ = raw->side;
    history_.push_back(*raw);
    return raw;
}

bool ChartState::should_trigger(const TriggerRule& rule, double now) const {
    return gapwatch::should_trigger(history_, rule, now);
}

void ChartState::retune(double new_tau) {
    spec_ = gapwatch::retune(spec_, new_tau);
    limits_ = compute_limits(spec_);
    history_.clear();
    armed_ = false;
    in_excursion_ = false;
}

}  // namespace gapwatch
