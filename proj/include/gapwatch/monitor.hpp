#pragma once

#include <optional>
#include <vector>

namespace gapwatch {

/// Baseline distribution of the charted time gap plus the limit multiplier.
struct ChartSpec {
    double mu_desired = 1.6;     // = tau_star setting, s
    double sigma_desired = 0.125;  // acceptable std. dev., s
    double L = 2.0;              // limit multiplier

    void validate() const;
};

struct ChartLimits {
    double lcl = 0.0;
    double cl = 0.0;
    double ucl = 0.0;
};

enum class Side { above, below };

struct ViolationEvent {
    double t = 0.0;
    int vehicle_id = 0;
    double value = 0.0;  // charted statistic, s
    Side side = Side::above;
};

/// Fire when at least k_violations excursions fall in the trailing window.
struct TriggerRule {
    int k_violations = 3;
    double window = 35.0;  // s

    void validate() const;
};

/// How raw out-of-control samples are counted: one event per excursion
/// (entry edge) or one event per sample.
enum class ViolationCounting { excursions, samples };

/// (mu - L*sigma, mu, mu + L*sigma).
ChartLimits compute_limits(const ChartSpec& spec);

/// Violation iff value lies strictly outside [lcl, ucl]; the boundary is
/// in-control.
std::optional<ViolationEvent> check_point(double value, const ChartLimits& limits, double t,
                                          int vehicle_id);

/// True iff at least rule.k_violations events have t in (now - window, now].
bool should_trigger(const std::vector<ViolationEvent>& history, const TriggerRule& rule,
                    double now);

/// New spec with the center moved to new_tau; sigma and L unchanged.
ChartSpec retune(const ChartSpec& current, double new_tau);

/// Per-vehicle chart bookkeeping: collapses consecutive out-of-control samples
/// into one excursion event and holds the violation history the trigger rule
/// queries. A side change (above -> below) without re-entry counts as a new
/// excursion.
class ChartState {
public:
    explicit ChartState(const ChartSpec& spec,
                        ViolationCounting counting = ViolationCounting::excursions);

    const ChartSpec& spec() const { return spec_; }
    const ChartLimits& limits() const { return limits_; }
    const std::vector<ViolationEvent>& history() const { return history_; }
    bool armed() const { return armed_; }

    /// Charting arms once the statistic first lies in-control; out-of-control
    /// samples seen before that are ignored. This suppresses prior-dominated
    /// transients right after the estimation window fills.
    std::optional<ViolationEvent> observe(double value, double t, int vehicle_id);

    bool should_trigger(const TriggerRule& rule, double now) const;

    /// Move the center line to new_tau, clear the history and excursion state,
    /// and disarm until the statistic re-enters the new limits.
    void retune(double new_tau);

private:
    ChartSpec spec_;
    ChartLimits limits_;
    std::vector<ViolationEvent> history_;
    ViolationCounting counting_;
    bool armed_ = false;
    bool in_excursion_ = false;
    Side last_side_ = Side::above;
};

}  // namespace gapwatch
