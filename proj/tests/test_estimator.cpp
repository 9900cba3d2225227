#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gapwatch/errors.hpp"
#include "gapwatch/estimator.hpp"
#include "quadrature_oracle.hpp"

using namespace gapwatch;

namespace {

GaussianBelief default_prior() {
    return GaussianBelief{{1.0, 1.6}, {1e-4, -1e-5, -1e-5, 0.125}};
}

MeasurementBatch batch_of(std::vector<double> speeds, std::vector<double> spacings,
                          double noise_var = 0.01) {
    MeasurementBatch b;
    b.speeds = std::move(speeds);
    b.spacings = std::move(spacings);
    b.noise_var = noise_var;
    return b;
}

}  // namespace

TEST_CASE("empty batch returns the prior unchanged") {
    const GaussianBelief prior = default_prior();
    const GaussianBelief post = posterior_update(prior, batch_of({}, {}));
    CHECK(post.mean.x0 == prior.mean.x0);
    CHECK(post.mean.x1 == prior.mean.x1);
    CHECK(post.cov.a00 == prior.cov.a00);
    CHECK(post.cov.a01 == prior.cov.a01);
    CHECK(post.cov.a11 == prior.cov.a11);
}

TEST_CASE("single observation: closed form matches frozen values and the quadrature oracle") {
    const GaussianBelief prior = default_prior();
    const auto post = posterior_update(prior, batch_of({20.0}, {37.0}));

    // Frozen from an independent dense-matrix computation of the same update.
    CHECK(post.mean.x0 == doctest::Approx(0.9999920015516989).epsilon(1e-10));
    CHECK(post.mean.x1 == doctest::Approx(1.79996040768091).epsilon(1e-10));
    CHECK(post.cov.a00 == doctest::Approx(9.999980003879246e-05).epsilon(1e-9));
    CHECK(post.cov.a01 == doctest::Approx(-5.0009898079772524e-06).epsilon(1e-9));
    CHECK(post.cov.a11 == doctest::Approx(2.5245100450512603e-05).epsilon(1e-9));

    const auto quad = oracle::posterior_by_quadrature(prior, batch_of({20.0}, {37.0}));
    CHECK(oracle::relative_deviation(post, quad) < 1e-5);
}

TEST_CASE("randomized small batches agree with the quadrature oracle") {
    for (const auto& c : oracle::random_cases(2024, 25)) {
        const auto closed = posterior_update(c.prior, c.batch);
        const auto quad = oracle::posterior_by_quadrature(c.prior, c.batch);
        CHECK(oracle::relative_deviation(closed, quad) < 1e-5);
    }
}

TEST_CASE("posterior symmetry and positive definiteness") {
    for (const auto& c : oracle::random_cases(99, 50)) {
        const auto post = posterior_update(c.prior, c.batch);
        CHECK(post.cov.a01 == post.cov.a10);
        CHECK(post.cov.is_positive_definite());
        CHECK_NOTHROW(post.validate());
    }
}

TEST_CASE("posterior shrinkage: prior cov minus posterior cov is PSD") {
    for (const auto& c : oracle::random_cases(7, 50)) {
        if (c.batch.size() == 0) continue;
        const auto post = posterior_update(c.prior, c.batch);
        CHECK(is_positive_semidefinite(c.prior.cov - post.cov));
    }
}

TEST_CASE("noiseless data at tau = 1.6 pulls a perturbed tau prior to 1.6 within 1e-3") {
    // The intercept of the data agrees with the (tight) s0 prior, so the
    // informative speed spread must recover the slope.
    GaussianBelief prior = default_prior();
    prior.mean.x1 = 1.0;

    MeasurementBatch batch;
    batch.noise_var = 0.01;
    for (int j = 0; j < 200; ++j) {
        const double v = 40.0 * static_cast<double>(j) / 199.0;
        batch.speeds.push_back(v);
        batch.spacings.push_back(1.0 + 1.6 * v);
    }
    const auto post = posterior_update(prior, batch);
    CHECK(std::abs(post.mean_tau() - 1.6) < 1e-3);
    CHECK(post.var_tau() < prior.cov.a11);
}

TEST_CASE("the tight wrong s0 prior biases tau when the data intercept is 5") {
    // With prior mean s0 = 1 (variance 1e-4) and data generated as
    // S = 5 + 1.6 v, the slope estimate absorbs part of the intercept error.
    MeasurementBatch batch;
    batch.noise_var = 0.01;
    for (int j = 0; j < 200; ++j) {
        const double v = 40.0 * static_cast<double>(j) / 199.0;
        batch.speeds.push_back(v);
        batch.spacings.push_back(5.0 + 1.6 * v);
    }
    const auto biased = posterior_update(default_prior(), batch);
    CHECK(biased.mean_tau() == doctest::Approx(1.69950012).epsilon(1e-5));

    // Re-centering the s0 prior at 5 removes the bias.
    GaussianBelief centered = default_prior();
    centered.mean.x0 = 5.0;
    centered.mean.x1 = 1.0;
    const auto post = posterior_update(centered, batch);
    CHECK(std::abs(post.mean_tau() - 1.6) < 1e-3);
}

TEST_CASE("sequential singleton updates equal the batch update") {
    const GaussianBelief prior = default_prior();

    SUBCASE("two singletons vs one pair") {
        const std::vector<MeasurementBatch> singles{batch_of({10.0}, {21.0}),
                                                    batch_of({30.0}, {53.5})};
        const auto seq = sequential_update(prior, singles);
        const auto whole = posterior_update(prior, batch_of({10.0, 30.0}, {21.0, 53.5}));
        CHECK(std::abs(seq.mean.x0 - whole.mean.x0) < 1e-9);
        CHECK(std::abs(seq.mean.x1 - whole.mean.x1) < 1e-9);
        CHECK(std::abs(seq.cov.a00 - whole.cov.a00) < 1e-9);
        CHECK(std::abs(seq.cov.a01 - whole.cov.a01) < 1e-9);
        CHECK(std::abs(seq.cov.a11 - whole.cov.a11) < 1e-9);
    }

    SUBCASE("one hundred singletons vs one batch") {
        std::mt19937_64 gen(11);
        std::uniform_real_distribution<double> speed(0.0, 40.0);
        std::uniform_real_distribution<double> jitter(-0.3, 0.3);
        std::vector<MeasurementBatch> singles;
        MeasurementBatch whole;
        whole.noise_var = 0.01;
        for (int j = 0; j < 100; ++j) {
            const double v = speed(gen);
            const double s = 5.0 + 1.6 * v + jitter(gen);
            singles.push_back(batch_of({v}, {s}));
            whole.speeds.push_back(v);
            whole.spacings.push_back(s);
        }
        const auto seq = sequential_update(prior, singles);
        const auto batch = posterior_update(prior, whole);
        CHECK(std::abs(seq.mean.x0 - batch.mean.x0) < 1e-9);
        CHECK(std::abs(seq.mean.x1 - batch.mean.x1) < 1e-9);
        CHECK(std::abs(seq.cov.a11 - batch.cov.a11) < 1e-9);
    }

    SUBCASE("empty sequence returns the prior") {
        const auto out = sequential_update(prior, {});
        CHECK(out.mean.x0 == prior.mean.x0);
        CHECK(out.mean.x1 == prior.mean.x1);
    }

    SUBCASE("mismatched noise_var is rejected") {
        const std::vector<MeasurementBatch> mixed{batch_of({10.0}, {21.0}, 0.01),
                                                  batch_of({30.0}, {53.5}, 0.02)};
        CHECK_THROWS_AS(sequential_update(prior, mixed), InvariantViolation);
    }
}

TEST_CASE("permutation invariance") {
    MeasurementBatch batch;
    batch.noise_var = 0.04;
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> speed(0.0, 40.0);
    for (int j = 0; j < 40; ++j) {
        const double v = speed(gen);
        batch.speeds.push_back(v);
        batch.spacings.push_back(5.0 + 1.6 * v + 0.1 * speed(gen) / 40.0);
    }
    const auto a = posterior_update(default_prior(), batch);

    MeasurementBatch shuffled = batch;
    std::vector<std::size_t> order(batch.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), gen);
    for (std::size_t i = 0; i < order.size(); ++i) {
        shuffled.speeds[i] = batch.speeds[order[i]];
        shuffled.spacings[i] = batch.spacings[order[i]];
    }
    const auto b = posterior_update(default_prior(), shuffled);
    CHECK(std::abs(a.mean.x0 - b.mean.x0) < 1e-12);
    CHECK(std::abs(a.mean.x1 - b.mean.x1) < 1e-12);
    CHECK(std::abs(a.cov.a00 - b.cov.a00) < 1e-12);
    CHECK(std::abs(a.cov.a11 - b.cov.a11) < 1e-12);
}

TEST_CASE("posterior mean maximizes log likelihood plus log prior") {
    // The log posterior is quadratic, so central differences carry no
    // truncation error and a fairly large step keeps rounding noise low.
    const double h = 1e-3;
    for (const auto& c : oracle::random_cases(55, 20)) {
        if (c.batch.size() == 0) continue;
        const auto post = posterior_update(c.prior, c.batch);
        const Mat2 prior_precision = inverse(c.prior.cov);

        const auto log_posterior = [&](Vec2 g) {
            const Vec2 d = g - c.prior.mean;
            return log_likelihood(c.batch, g) - 0.5 * dot(d, prior_precision * d);
        };
        const double f0 = std::abs(log_posterior(post.mean));
        for (int axis = 0; axis < 2; ++axis) {
            Vec2 up = post.mean, down = post.mean;
            up[axis] += h;
            down[axis] -= h;
            const double grad = (log_posterior(up) - log_posterior(down)) / (2.0 * h);
            CHECK(std::abs(grad) <= 1e-8 * (1.0 + f0));
        }
    }
}

TEST_CASE("log_likelihood") {
    CHECK(log_likelihood(batch_of({}, {}), {1.0, 1.6}) == 0.0);

    // Zero residual: only the normalization constant remains.
    const double expected = -0.5 * std::log(2.0 * 3.141592653589793238462643383279502884 * 0.01);
    CHECK(log_likelihood(batch_of({20.0}, {5.0 + 1.6 * 20.0}), {5.0, 1.6}) ==
          doctest::Approx(expected));

    // A residual r lowers the value by r^2 / (2 sigma^2).
    const double r = 0.7;
    const double with_residual =
        log_likelihood(batch_of({20.0}, {5.0 + 1.6 * 20.0 + r}), {5.0, 1.6});
    CHECK(with_residual == doctest::Approx(expected - r * r / 0.02));
}

TEST_CASE("windowed estimate: a single outlier is dominated by the prior") {
    const GaussianBelief prior = default_prior();
    const double outlier_spacing = 100.0;  // equilibrium value would be 37

    const auto one = windowed_estimate(prior, batch_of({20.0}, {outlier_spacing}));
    const auto many = windowed_estimate(
        prior, batch_of(std::vector<double>(50, 20.0), std::vector<double>(50, outlier_spacing)));
    CHECK(std::abs(one.mean_tau() - prior.mean_tau()) <
          std::abs(many.mean_tau() - prior.mean_tau()));
}

TEST_CASE("measurement window clamps to available history") {
    MeasurementWindow window(50);
    for (int i = 0; i < 10; ++i) window.push(20.0, 37.0 + i);
    CHECK_FALSE(window.full());
    CHECK(window.batch(0.01).size() == 10);

    for (int i = 0; i < 55; ++i) window.push(21.0, 40.0 + i);
    CHECK(window.full());
    const auto batch = window.batch(0.01);
    REQUIRE(batch.size() == 50);
    // Only the trailing 50 samples survive.
    for (const double v : batch.speeds) CHECK(v == 21.0);
    double max_spacing = 0.0;
    for (const double s : batch.spacings) max_spacing = std::max(max_spacing, s);
    CHECK(max_spacing == doctest::Approx(94.0));
}

TEST_CASE("singular prior is rejected") {
    GaussianBelief degenerate;
    degenerate.mean = {1.0, 1.6};
    degenerate.cov = {0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(posterior_update(degenerate, batch_of({20.0}, {37.0})), SingularPrior);
}

TEST_CASE("belief validation") {
    GaussianBelief ok = default_prior();
    CHECK_NOTHROW(ok.validate());

    GaussianBelief asym = ok;
    asym.cov.a01 = asym.cov.a10 + 1e-6;
    CHECK_THROWS_AS(asym.validate(), InvariantViolation);

    GaussianBelief indefinite = ok;
    indefinite.cov = {1.0, 2.0, 2.0, 1.0};  // det < 0
    CHECK_THROWS_AS(indefinite.validate(), InvariantViolation);
}
