#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gapwatch/linalg2.hpp"

namespace gapwatch {

/// Gaussian belief over the random coefficients [s0, tau]: standstill spacing
/// and time gap. Used both for the configured prior and for posteriors.
struct GaussianBelief {
    Vec2 mean{};  // [s0 (m), tau (s)]
    Mat2 cov{};   // symmetric positive definite

    double mean_s0() const { return mean.x0; }
    double mean_tau() const { return mean.x1; }
    double var_tau() const { return cov.a11; }

    /// Throws InvariantViolation unless cov is symmetric within 1e-12 and
    /// positive definite.
    void validate() const;
};

/// Windowed spacing/speed observations with the measurement-noise variance of
/// the linear spacing model S = s0 + tau*V + eps, eps ~ N(0, noise_var).
struct MeasurementBatch {
    std::vector<double> spacings;  // m
    std::vector<double> speeds;    // m/s
    double noise_var = 0.01;       // m^2

    std::size_t size() const { return spacings.size(); }

    void validate() const;
};

/// Closed-form conjugate update:
///   Sigma* = [Sigma_b^-1 + Z^T Z / sigma^2]^-1
///   mu*    = Sigma* [Z^T S / sigma^2 + Sigma_b^-1 mu_b]
/// with design rows [1, V_j]. An empty batch returns the prior unchanged.
/// Throws SingularPrior when the prior covariance is not invertible.
GaussianBelief posterior_update(const GaussianBelief& prior, const MeasurementBatch& batch);

/// Fold posterior_update over a batch sequence. All batches must share
/// noise_var (conjugacy makes the fold equal to one concatenated update).
GaussianBelief sequential_update(const GaussianBelief& prior,
                                 std::span<const MeasurementBatch> batches);

/// Estimate from a trailing measurement window, always anchored to the fixed
/// configured prior rather than to the previous posterior. Re-anchoring keeps
/// the estimate responsive to regime changes; a pure recursive posterior would
/// freeze the chart statistic.
GaussianBelief windowed_estimate(const GaussianBelief& prior, const MeasurementBatch& window);

/// Gaussian log likelihood of a coefficient vector gamma = [s0, tau] given the
/// batch. Empty batch -> 0.
double log_likelihood(const MeasurementBatch& batch, Vec2 gamma);

/// Fixed-capacity trailing window of (speed, spacing) pairs; the batch holds
/// the full history until capacity is first reached.
class MeasurementWindow {
public:
    explicit MeasurementWindow(std::size_t capacity) : capacity_(capacity) {}

    void push(double speed, double spacing);
    bool full() const { return count_ >= capacity_; }
    std::size_t size() const { return count_ < capacity_ ? count_ : capacity_; }
    MeasurementBatch batch(double noise_var) const;

private:
    std::size_t capacity_;
    std::size_t count_ = 0;   // total pushes
    std::size_t head_ = 0;    // next overwrite slot once full
    std::vector<double> speeds_;
    std::vector<double> spacings_;
};

}  // namespace gapwatch
