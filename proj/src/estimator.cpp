#include "gapwatch/estimator.hpp"

#include <cmath>
#include <string>

#include "gapwatch/errors.hpp"

namespace gapwatch {

void GaussianBelief::validate() const {
    if (!std::isfinite(mean.x0) || !std::isfinite(mean.x1)) {
        throw InvariantViolation("belief mean must be finite");
    }
    if (!cov.is_symmetric(1e-12)) {
        throw InvariantViolation("belief covariance must be symmetric within 1e-12");
    }
    if (!cov.is_positive_definite()) {
        throw InvariantViolation("belief covariance must be positive definite");
    }
}

void MeasurementBatch::validate() const {
    if (spacings.size() != speeds.size()) {
        throw InvariantViolation("batch spacings/speeds length mismatch");
    }
    if (!(noise_var > 0.0)) throw InvariantViolation("batch noise_var must be > 0");
    for (std::size_t i = 0; i < spacings.size(); ++i) {
        if (!std::isfinite(spacings[i]) || !std::isfinite(speeds[i])) {
            throw InvariantViolation("batch contains non-finite values");
        }
    }
}

GaussianBelief posterior_update(const GaussianBelief& prior, const MeasurementBatch& batch) {
    const Mat2 prior_precision = inverse(prior.cov);  // throws SingularPrior
    if (batch.size() == 0) return prior;

    // Z^T Z and Z^T S accumulate in closed form for design rows [1, v].
    const double inv_var = 1.0 / batch.noise_var;
    double n = 0.0, sum_v = 0.0, sum_vv = 0.0, sum_s = 0.0, sum_vs = 0.0;
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const double v = batch.speeds[j];
        const double s = batch.spacings[j];
        n += 1.0;
        sum_v += v;
        sum_vv += v * v;
        sum_s += s;
        sum_vs += v * s;
    }

    const Mat2 data_precision{n * inv_var, sum_v * inv_var, sum_v * inv_var, sum_vv * inv_var};
    const Mat2 precision = (prior_precision + data_precision).symmetrized();

    GaussianBelief posterior;
    posterior.cov = inverse(precision).symmetrized();
    const Vec2 rhs = Vec2{sum_s * inv_var, sum_vs * inv_var} + prior_precision * prior.mean;
    posterior.mean = posterior.cov * rhs;
    return posterior;
}

GaussianBelief sequential_update(const GaussianBelief& prior,
                                 std::span<const MeasurementBatch> batches) {
    if (!batches.empty()) {
        const double noise_var = batches.front().noise_var;
        for (const auto& b : batches) {
            if (b.noise_var != noise_var) {
                throw InvariantViolation("sequential_update batches must share noise_var");
            }
        }
    }
    GaussianBelief belief = prior;
    for (const auto& b : batches) belief = posterior_update(belief, b);
    return belief;
}

GaussianBelief windowed_estimate(const GaussianBelief& prior, const MeasurementBatch& window) {
    return posterior_update(prior, window);
}

double log_likelihood(const MeasurementBatch& batch, Vec2 gamma) {
    constexpr double two_pi = 2.0 * 3.141592653589793238462643383279502884;
    const double norm = -0.5 * std::log(two_pi * batch.noise_var);
    double total = 0.0;
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const double residual = batch.spacings[j] - (gamma.x0 + gamma.x1 * batch.speeds[j]);
        total += norm - residual * residual / (2.0 * batch.noise_var);
    }
    return total;
}

void MeasurementWindow::push(double speed, double spacing) {
    if (capacity_ == 0) return;
    if (count_ < capacity_) {
        speeds_.push_back(speed);
        spacings_.push_back(spacing);
    } else {
        speeds_[head_] = speed;
        spacings_[head_] = spacing;
        head_ = (head_ + 1) % capacity_;
    }
    ++count_;
}

MeasurementBatch MeasurementWindow::batch(double noise_var) const {
    MeasurementBatch out;
    out.noise_var = noise_var;
    // Order does not matter for the posterior (permutation invariant), so the
    // ring is exported in storage order.
    out.speeds = speeds_;
    out.spacings = spacings_;
    return out;
}

}  // namespace gapwatch
