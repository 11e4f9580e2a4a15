#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "mcascade/rng.hpp"
#include "mcascade/weight_model.hpp"

using namespace mcas;

TEST_CASE("construction validates parameters") {
    CHECK_NOTHROW(make_deterministic(2, 1));
    CHECK_NOTHROW(make_lognormal(0.09, 2, 1));
    CHECK_NOTHROW(make_two_point(1.5, 0.5, 0.5, 2, 1));
    CHECK_THROWS_AS(make_lognormal(0.0, 2, 1), InvalidParams);
    CHECK_THROWS_AS(make_lognormal(-0.1, 2, 1), InvalidParams);
    CHECK_THROWS_AS(make_lognormal(0.09, 1, 1), InvalidParams);
    CHECK_THROWS_AS(make_two_point(1.5, -0.5, 0.5, 2, 1), InvalidParams);
    // mean constraint p w+ + (1-p) w- = 1 violated
    CHECK_THROWS_AS(make_two_point(1.5, 0.5, 0.6, 2, 1), InvalidParams);
    CHECK(make_lognormal(0.09, 2, 2).branch_count() == 4);
    CHECK(make_lognormal(0.09, 3, 1).branch_count() == 3);
}

TEST_CASE("marginal moments: closed forms") {
    const WeightModel det = make_deterministic(2, 1);
    for (double q : {0.0, 0.5, 1.0, 2.0, 7.5})
        CHECK(marginal_moment(det, q) == doctest::Approx(1.0).epsilon(1e-14));

    const WeightModel ln = make_lognormal(0.09, 2, 1);
    CHECK(marginal_moment(ln, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(marginal_moment(ln, 2.0) ==
          doctest::Approx(std::pow(2.0, 0.18)).epsilon(1e-14));

    const WeightModel tp = make_two_point(1.5, 0.5, 0.5, 2, 1);
    CHECK(marginal_moment(tp, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(marginal_moment(tp, 2.0) == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("Monte Carlo moments agree with closed forms") {
    const int kSamples = 1000000;
    for (const WeightModel& m :
         {make_lognormal(0.09, 2, 1), make_two_point(1.5, 0.5, 0.5, 2, 1)}) {
        for (double q : {0.0, 0.5, 1.0, 2.0, 3.0}) {
            double sum = 0.0, sum2 = 0.0;
            for (int i = 0; i < kSamples; ++i) {
                const Eigen::ArrayXd w = sample_weights(m, 42, 1, i);
                const double v = std::pow(w[0], q);
                sum += v;
                sum2 += v * v;
            }
            const double mean = sum / kSamples;
            const double var =
                std::max(0.0, sum2 / kSamples - mean * mean);
            const double se = std::sqrt(var / kSamples);
            const double exact = marginal_moment(m, q);
            INFO("family=", to_string(m.family), " q=", q);
            CHECK(std::abs(mean - exact) <= 5.0 * se + 1e-12);
        }
    }
}

TEST_CASE("sample_weights: deterministic, reproducible, nonnegative") {
    const WeightModel det = make_deterministic(2, 1);
    const Eigen::ArrayXd w = sample_weights(det, 9, 3, 5);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 1.0);

    const WeightModel ln = make_lognormal(0.09, 2, 1);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t seed = rng::hash(1, i, 0, 0);
        const int level = static_cast<int>(rng::hash(1, i, 1, 0) % 20);
        const std::uint64_t index = rng::hash(1, i, 2, 0) % 1024;
        const Eigen::ArrayXd a = sample_weights(ln, seed, level, index);
        const Eigen::ArrayXd b = sample_weights(ln, seed, level, index);
        CHECK((a == b).all());
        CHECK((a >= 0.0).all());
    }

    const WeightModel tp = make_two_point(1.5, 0.5, 0.5, 2, 1);
    for (int i = 0; i < 1000; ++i) {
        const Eigen::ArrayXd a = sample_weights(tp, 7, 2, i);
        CHECK((a <= 1.5).all());
        CHECK((a >= 0.5).all());
    }
}

TEST_CASE("tail bounds dominate empirical tails") {
    const WeightModel det = make_deterministic(2, 1);
    CHECK(tail_bound(det, 0.5, 8.0) == 0.0);
    const WeightModel tp = make_two_point(1.5, 0.5, 0.5, 2, 1);
    CHECK(tail_bound(tp, 0.6, 8.0) == 0.0);

    const WeightModel ln = make_lognormal(0.09, 2, 1);
    const int kSamples = 1000000;
    for (double t : {1.0, 2.0, 4.0, 8.0}) {
        int hits = 0;
        for (int i = 0; i < kSamples; ++i)
            if (sample_weights(ln, 77, 1, i).maxCoeff() > t + 1.0) ++hits;
        const double empirical = static_cast<double>(hits) / kSamples;
        CHECK(empirical <= tail_bound(ln, t, 8.0));
    }
}

TEST_CASE("lognormal tail bound dominates the exact Gaussian tail") {
    const WeightModel ln = make_lognormal(0.09, 2, 1);
    const double sigma = ln.sigma();
    // P(max of k i.i.d. lognormals > t+1) with W = exp(sigma N - sigma^2/2).
    auto exact_tail = [&](double t) {
        const double z = (std::log(t + 1.0) + 0.5 * sigma * sigma) / sigma;
        const double single = 0.5 * std::erfc(z / std::sqrt(2.0));
        const double k = ln.branch_count();
        return 1.0 - std::pow(1.0 - single, k);
    };
    for (double t : {2.0, 5.0, 10.0, 20.0})
        CHECK(tail_bound(ln, t, 8.0) >= exact_tail(t));
}

TEST_CASE("JSON round-trip preserves 15 significant digits") {
    for (const WeightModel& m :
         {make_deterministic(3, 2), make_lognormal(0.0937, 2, 1),
          make_two_point(1.4321, 0.5679, 0.5, 2, 1)}) {
        const WeightModel back = model_from_json(model_to_json(m));
        CHECK(back.family == m.family);
        CHECK(back.base == m.base);
        CHECK(back.dim == m.dim);
        CHECK(back.lambda == doctest::Approx(m.lambda).epsilon(1e-15));
        CHECK(back.w_plus == doctest::Approx(m.w_plus).epsilon(1e-15));
        CHECK(back.w_minus == doctest::Approx(m.w_minus).epsilon(1e-15));
        CHECK(back.prob_plus == doctest::Approx(m.prob_plus).epsilon(1e-15));
    }
}
