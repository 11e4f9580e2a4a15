#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mcascade/cascade.hpp"
#include "mcascade/estimators.hpp"
#include "mcascade/rng.hpp"

using namespace mcas;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("fit_power_law: exact on noiseless power laws") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 10; ++k) {
        const double r = std::pow(2.0, k);
        pts.emplace_back(r, std::pow(r, -0.25));
    }
    const DecayFit fit = fit_power_law(pts);
    CHECK(std::abs(fit.slope + 0.25) <= 1e-12);
    CHECK(fit.fourier_dim_estimate == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.stderr_slope <= 1e-12);
}

TEST_CASE("fit_power_law: validation errors") {
    CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {2.0, 0.5}}), TooFewPoints);
    CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {2.0, 0.5}, {4.0, 0.0}}),
                    NonpositiveMagnitude);
    CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {1.0, 0.5}, {4.0, 0.25}}),
                    InvalidParams);
}

TEST_CASE("fit_power_law: permutation invariance") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 12; ++k) {
        const double r = std::pow(2.0, k);
        pts.emplace_back(r, std::pow(r, -0.37) *
                                (1.0 + 0.01 * (rng::uniform(2, k, 0, 0) - 0.5)));
    }
    const DecayFit a = fit_power_law(pts);
    std::reverse(pts.begin(), pts.end());
    std::swap(pts[2], pts[7]);
    const DecayFit b = fit_power_law(pts);
    CHECK(a.slope == b.slope);
    CHECK(a.intercept == b.intercept);
}

TEST_CASE("fit_power_law: 1% multiplicative noise recovered within 0.02") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 200; ++k) {
        const double r = std::pow(2.0, 4.0 + 7.0 * k / 199.0);
        const double noise = 1.0 + 0.02 * (rng::uniform(9, k, 0, 0) - 0.5);
        pts.emplace_back(r, std::pow(r, -0.25) * noise);
    }
    CHECK(std::abs(fit_power_law(pts).slope + 0.25) <= 0.02);
}

TEST_CASE("octave radii schedule") {
    const RadiiSpec spec{4, 11, 2, 4};
    const auto radii = spec.octave_radii(4);
    REQUIRE(radii.size() == 4);
    CHECK(radii.front() == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(radii.back() < 32.0);
    for (std::size_t i = 1; i < radii.size(); ++i) CHECK(radii[i] > radii[i - 1]);
}

TEST_CASE("ensemble_fourier_dim: deterministic circle is dimension ~1") {
    const CurveSpec circle = make_circle_arc(kTwoPi);
    // 16 radii per octave so the per-octave sup tracks the J0 envelope
    // rather than a few arbitrary phases of its oscillation.
    const RadiiSpec radii{4, 9, 2, 16};
    DecayOptions opts;
    opts.n_theta = 32;
    opts.refine_top = 2;
    const auto res = ensemble_fourier_dim(make_deterministic(2, 1), circle, 10,
                                          radii, {1, 2}, opts);
    CHECK(res.discarded == 0);
    REQUIRE(res.fits.size() == 2);
    CHECK(std::abs(res.mean - 1.0) <= 0.1);
    CHECK(res.stddev <= 1e-9);
}

TEST_CASE("project_measure: mass conservation and dim2 of projections") {
    const CurveSpec circle = make_circle_arc(kTwoPi);
    const CascadeRealization uniform =
        generate(make_deterministic(2, 1), 16, 1);
    const BinnedMeasure proj =
        project_measure(uniform, circle, Vec2(1.0, 0.0), 16);
    CHECK(std::abs(proj.mass.sum() - uniform.total_mass()) <= 1e-12);
    // (1 - u^2)^{-1/2}-type density has finite 1-energy, so dim2 = 1; the
    // endpoint singularities add a log factor to the L^2 sum, so the
    // finite-scale slope needs deep grids to get within 0.1.
    CHECK(std::abs(dim2_of_binned(proj, 8, 14) - 1.0) <= 0.1);

    const CascadeRealization flat2 = generate(make_lognormal(0.05, 2, 2), 4, 1);
    CHECK_THROWS_AS(project_measure(flat2, circle, Vec2(1.0, 0.0), 10),
                    DimensionMismatch);
}

TEST_CASE("project_measure: tangent projection of a short arc is Lebesgue-like") {
    // Quarter-circle arc; tangent direction at its midpoint.
    const CurveSpec arc = make_circle_arc(0.5 * std::numbers::pi);
    const CascadeRealization uniform =
        generate(make_deterministic(2, 1), 12, 1);
    const CurveFrame mid = frame(arc, 0.5);
    const BinnedMeasure proj = project_measure(uniform, arc, mid.tangent, 12);
    CHECK(std::abs(dim2_of_binned(proj, 4, 10) - 1.0) <= 0.1);
}

TEST_CASE("concentration_bound: formula, monotonicity, validation") {
    ConcentrationInput in;
    in.N = 1024;
    in.c_phi = 1.0;
    in.p_exponent = 8.0;
    in.q = 3.0;
    in.truncation = 32.0;
    in.coefficients.assign(1024, 1.0 / 32.0);
    in.threshold = 1.0;
    in.second_moment_K = 8.0;

    // Independent re-evaluation of the closed formula. The spec's
    // N=1024 scenario overflows the exponential term to +inf; both
    // evaluations must agree on that too, so compare exactly.
    const double lambda = in.q * std::log(in.truncation) /
                          (in.truncation * (1.0 / 32.0));
    const double sum_a2 = 1024.0 / (32.0 * 32.0);
    const double expected = 1024.0 * std::pow(32.0, -8.0) +
                            std::exp(-lambda * 1.0 + 8.0 * lambda * lambda * sum_a2);
    CHECK(concentration_bound(in) == expected);

    // Finite cross-check at N=16.
    ConcentrationInput small = in;
    small.N = 16;
    small.coefficients.assign(16, 1.0 / 32.0);
    const double small_sum_a2 = 16.0 / (32.0 * 32.0);
    const double small_expected =
        16.0 * std::pow(32.0, -8.0) +
        std::exp(-lambda * 1.0 + 8.0 * lambda * lambda * small_sum_a2);
    REQUIRE(std::isfinite(small_expected));
    CHECK(concentration_bound(small) ==
          doctest::Approx(small_expected).epsilon(1e-12));

    // Nonincreasing in t.
    double prev = concentration_bound(in);
    for (double t : {2.0, 5.0, 20.0, 1000.0}) {
        in.threshold = t;
        const double v = concentration_bound(in);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    in.threshold = 1e12;
    CHECK(concentration_bound(in) ==
          doctest::Approx(1024.0 * std::pow(32.0, -8.0)).epsilon(1e-9));

    ConcentrationInput bad = in;
    bad.coefficients.assign(4, 0.0);
    bad.N = 4;
    CHECK_THROWS_AS(concentration_bound(bad), InvalidParams);
    bad = in;
    bad.p_exponent = 3.0;
    CHECK_THROWS_AS(concentration_bound(bad), InvalidParams);
    bad = in;
    bad.truncation = 0.5;
    CHECK_THROWS_AS(concentration_bound(bad), InvalidParams);
    bad = in;
    bad.q = 3.5;  // violates q <= p/2 - 1
    CHECK_THROWS_AS(concentration_bound(bad), InvalidParams);
}

TEST_CASE("concentration_mc: beyond-support threshold is exactly zero") {
    DiscreteZeroMeanDist d{{-1.0, 1.0}, {0.5, 0.5}};
    ConcentrationInput in;
    in.N = 16;
    in.coefficients.assign(16, 1.0 / 16.0);
    in.threshold = 1.5;  // max reachable sum is 1
    in.c_phi = 1.0;
    in.p_exponent = 8.0;
    in.q = 3.0;
    in.truncation = 8.0;
    const auto res = concentration_mc(d, in, 20000, 5);
    CHECK(res.empirical_tail == 0.0);
    CHECK(res.bound > 0.0);
}

TEST_CASE("concentration_mc: single variable matches the exact tail") {
    DiscreteZeroMeanDist d{{-0.5, 2.0}, {0.8, 0.2}};
    ConcentrationInput in;
    in.N = 1;
    in.coefficients = {1.0};
    in.threshold = 1.0;
    in.c_phi = 0.2 * std::pow(2.0, 8.0);
    in.p_exponent = 8.0;
    in.q = 3.0;
    in.truncation = 4.0;
    const std::int64_t trials = 100000;
    const auto res = concentration_mc(d, in, trials, 11);
    const double exact = 0.2;
    const double se = std::sqrt(exact * (1.0 - exact) / trials);
    CHECK(std::abs(res.empirical_tail - exact) <= 3.0 * se);
    CHECK(res.empirical_tail <= res.bound);
}

TEST_CASE("ensemble_fourier_dim is deterministic given the seed list") {
    const RadiiSpec radii{4, 7, 2, 2};
    const auto a = ensemble_fourier_dim(make_lognormal(0.09, 2, 1),
                                        std::nullopt, 10, radii, {50, 51, 52});
    const auto b = ensemble_fourier_dim(make_lognormal(0.09, 2, 1),
                                        std::nullopt, 10, radii, {50, 51, 52});
    CHECK(a.mean == b.mean);
    CHECK(a.stddev == b.stddev);
}
