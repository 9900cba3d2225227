#pragma once

#include <cstdint>
#include <vector>

#include "gapwatch/estimator.hpp"

namespace gapwatch::oracle {

/// Posterior moments by brute-force 2-D grid quadrature of
/// likelihood(S | gamma) * prior(gamma), normalized numerically.
///
/// The grid is self-centering: each pass re-centers on the previous pass's
/// moment estimates, starting from the prior. The routine never touches the
/// closed-form update it is used to cross-check.
GaussianBelief posterior_by_quadrature(const GaussianBelief& prior, const MeasurementBatch& batch,
                                       int grid_points = 256, int passes = 3);

/// Largest scale-relative discrepancy between two beliefs: mean components are
/// compared against max(|reference|, 1e-9); covariance entries against
/// sqrt(ref_ii * ref_jj).
double relative_deviation(const GaussianBelief& value, const GaussianBelief& reference);

struct CrossCheckCase {
    GaussianBelief prior;
    MeasurementBatch batch;
};

/// Randomized small cases (n <= 5 observations, priors in a bounded box) for
/// cross-checking the closed-form posterior against quadrature.
std::vector<CrossCheckCase> random_cases(std::uint64_t seed, int count);

}  // namespace gapwatch::oracle
