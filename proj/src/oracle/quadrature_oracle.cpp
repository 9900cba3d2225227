#include "quadrature_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace gapwatch::oracle {

namespace {

struct Moments {
    double mean0, mean1;
    double var00, var01, var11;
};

// Unnormalized log posterior density at gamma = (g0, g1).
double log_density(const GaussianBelief& prior, const MeasurementBatch& batch, double g0,
                   double g1) {
    // Prior quadratic form via the closed-form 2x2 inverse of the prior cov.
    const double a = prior.cov.a00, b = prior.cov.a01, d = prior.cov.a11;
    const double det = a * d - b * b;
    const double d0 = g0 - prior.mean.x0;
    const double d1 = g1 - prior.mean.x1;
    double logp = -0.5 * (d * d0 * d0 - 2.0 * b * d0 * d1 + a * d1 * d1) / det;

    const double inv_two_var = 0.5 / batch.noise_var;
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const double r = batch.spacings[j] - (g0 + g1 * batch.speeds[j]);
        logp -= r * r * inv_two_var;
    }
    return logp;
}

Moments quadrature_pass(const GaussianBelief& prior, const MeasurementBatch& batch, double c0,
                        double c1, double h0, double h1, int n) {
    std::vector<double> g0s(static_cast<std::size_t>(n)), g1s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Midpoint nodes over [c - h, c + h].
        const double frac = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        g0s[static_cast<std::size_t>(i)] = c0 - h0 + 2.0 * h0 * frac;
        g1s[static_cast<std::size_t>(i)] = c1 - h1 + 2.0 * h1 * frac;
    }

    std::vector<double> logw(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    double log_max = -1e308;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double lw = log_density(prior, batch, g0s[static_cast<std::size_t>(i)],
                                          g1s[static_cast<std::size_t>(j)]);
            logw[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = lw;
            log_max = std::max(log_max, lw);
        }
    }

    double mass = 0.0, m0 = 0.0, m1 = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double w = std::exp(
                logw[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] -
                log_max);
            mass += w;
            m0 += w * g0s[static_cast<std::size_t>(i)];
            m1 += w * g1s[static_cast<std::size_t>(j)];
        }
    }
    const double mean0 = m0 / mass;
    const double mean1 = m1 / mass;

    double v00 = 0.0, v01 = 0.0, v11 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e0 = g0s[static_cast<std::size_t>(i)] - mean0;
        for (int j = 0; j < n; ++j) {
            const double w = std::exp(
                logw[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] -
                log_max);
            const double e1 = g1s[static_cast<std::size_t>(j)] - mean1;
            v00 += w * e0 * e0;
            v01 += w * e0 * e1;
            v11 += w * e1 * e1;
        }
    }
    return {mean0, mean1, v00 / mass, v01 / mass, v11 / mass};
}

}  // namespace

GaussianBelief posterior_by_quadrature(const GaussianBelief& prior, const MeasurementBatch& batch,
                                       int grid_points, int passes) {
    double c0 = prior.mean.x0;
    double c1 = prior.mean.x1;
    double s0 = std::sqrt(prior.cov.a00);
    double s1 = std::sqrt(prior.cov.a11);
    // First pass must cover wherever the data pulls the posterior.
    double k = 10.0;
    Moments m{c0, c1, s0 * s0, 0.0, s1 * s1};
    for (int pass = 0; pass < passes; ++pass) {
        m = quadrature_pass(prior, batch, c0, c1, k * s0, k * s1, grid_points);
        c0 = m.mean0;
        c1 = m.mean1;
        s0 = std::sqrt(m.var00);
        s1 = std::sqrt(m.var11);
        k = 8.0;  // refinement passes are centered, so a tighter box suffices
    }
    GaussianBelief out;
    out.mean = {m.mean0, m.mean1};
    out.cov = {m.var00, m.var01, m.var01, m.var11};
    return out;
}

std::vector<CrossCheckCase> random_cases(std::uint64_t seed, int count) {
    std::mt19937_64 gen(seed);
    const auto uniform = [&gen](double lo, double hi) {
        const double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };

    std::vector<CrossCheckCase> cases;
    cases.reserve(static_cast<std::size_t>(count));
    for (int c = 0; c < count; ++c) {
        CrossCheckCase cc;
        cc.prior.mean = {uniform(0.5, 10.0), uniform(0.5, 3.0)};
        const double sd0 = uniform(0.01, 1.0);
        const double sd1 = uniform(0.01, 1.0);
        const double rho = uniform(-0.8, 0.8);
        cc.prior.cov = {sd0 * sd0, rho * sd0 * sd1, rho * sd0 * sd1, sd1 * sd1};

        cc.batch.noise_var = uniform(1e-3, 1.0);
        const int n = static_cast<int>(gen() % 6);  // 0..5 observations
        const double noise_sd = std::sqrt(cc.batch.noise_var);
        for (int j = 0; j < n; ++j) {
            const double v = uniform(0.0, 40.0);
            const double s = cc.prior.mean.x0 + cc.prior.mean.x1 * v + uniform(-2.0, 2.0) * noise_sd;
            cc.batch.speeds.push_back(v);
            cc.batch.spacings.push_back(s);
        }
        cases.push_back(std::move(cc));
    }
    return cases;
}

double relative_deviation(const GaussianBelief& value, const GaussianBelief& reference) {
    double worst = 0.0;
    const auto mean_scale = [](double ref) { return std::max(std::abs(ref), 1e-9); };
    worst = std::max(worst, std::abs(value.mean.x0 - reference.mean.x0) / mean_scale(reference.mean.x0));
    worst = std::max(worst, std::abs(value.mean.x1 - reference.mean.x1) / mean_scale(reference.mean.x1));

    const double scale00 = reference.cov.a00;
    const double scale11 = reference.cov.a11;
    const double scale01 = std::sqrt(scale00 * scale11);
    worst = std::max(worst, std::abs(value.cov.a00 - reference.cov.a00) / scale00);
    worst = std::max(worst, std::abs(value.cov.a11 - reference.cov.a11) / scale11);
    worst = std::max(worst, std::abs(value.cov.a01 - reference.cov.a01) / scale01);
    return worst;
}

}  // namespace gapwatch::oracle
