#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "mcascade/rng.hpp"
#include "mcascade/structure_function.hpp"

using namespace mcas;

namespace {
const WeightModel kDet = make_deterministic(2, 1);
const WeightModel kLn = make_lognormal(0.09, 2, 1);
const WeightModel kTp = make_two_point(1.5, 0.5, 0.5, 2, 1);
}  // namespace

TEST_CASE("tau closed forms") {
    CHECK(tau(kDet, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double q : {0.3, 1.0, 2.5, 9.0})
        CHECK(tau(kDet, q) == doctest::Approx(q - 1.0).epsilon(1e-13));
    CHECK(tau(kLn, 2.0) == doctest::Approx(0.82).epsilon(1e-12));
    CHECK(tau(kTp, 2.0) ==
          doctest::Approx(2.0 - std::log2(2.5)).epsilon(1e-12));
}

TEST_CASE("tau(0) = -d and tau(1) = 0") {
    for (const WeightModel& m : {kDet, kLn, kTp}) {
        CHECK(tau(m, 0.0) == doctest::Approx(-1.0).epsilon(1e-13));
        CHECK(std::abs(tau(m, 1.0)) <= 1e-12);
    }
    const WeightModel ln2 = make_lognormal(0.05, 2, 2);
    CHECK(tau(ln2, 0.0) == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(std::abs(tau(ln2, 1.0)) <= 1e-12);
}

TEST_CASE("tau is concave: chord inequality on 200 random triples") {
    for (const WeightModel& m : {kLn, kTp}) {
        for (int c = 0; c < 200; ++c) {
            double q1 = 0.1 + 29.9 * rng::uniform(11, c, 0, 0);
            double q2 = 0.1 + 29.9 * rng::uniform(11, c, 1, 0);
            double q3 = 0.1 + 29.9 * rng::uniform(11, c, 2, 0);
            if (q1 > q2) std::swap(q1, q2);
            if (q2 > q3) std::swap(q2, q3);
            if (q1 > q2) std::swap(q1, q2);
            if (q3 - q1 < 1e-6) continue;
            const double lam = (q2 - q1) / (q3 - q1);
            const double chord = (1.0 - lam) * tau(m, q1) + lam * tau(m, q3);
            CHECK(tau(m, q2) >= chord - 1e-9);
        }
    }
}

TEST_CASE("tau_prime: closed forms and finite-difference agreement") {
    for (double q : {0.5, 1.0, 1.7, 3.0})
        CHECK(tau_prime(kDet, q) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(tau_prime(kLn, 2.0) == doctest::Approx(0.73).epsilon(1e-10));
    for (const WeightModel& m : {kDet, kLn, kTp}) {
        const double h = 1e-5;
        const double fd = (tau(m, 1.7 + h) - tau(m, 1.7 - h)) / (2.0 * h);
        CHECK(std::abs(tau_prime(m, 1.7) - fd) <= 1e-6);
    }
}

TEST_CASE("subcriticality") {
    CHECK(check_subcritical(kDet));
    CHECK(check_subcritical(kLn));
    CHECK(check_subcritical(kTp));
    CHECK_FALSE(check_subcritical(make_lognormal(1.5, 2, 1)));
    CHECK(mean_w_logb_w(kTp) == doctest::Approx(0.18872187554086717).epsilon(1e-12));
}

TEST_CASE("q_max") {
    CHECK(std::isinf(q_max(kDet)));
    CHECK(q_max(kLn) == doctest::Approx(10.0 / 3.0).epsilon(1e-10));
    CHECK(std::isinf(q_max(kTp)));
    CHECK_THROWS_AS(q_max(make_lognormal(1.5, 2, 1)), NotSubcritical);
}

TEST_CASE("alpha_min and tau_tilde") {
    CHECK(alpha_min(kDet) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(alpha_min(kLn) == doctest::Approx(0.49).epsilon(1e-10));
    CHECK(alpha_min(kTp) ==
          doctest::Approx(1.0 - std::log2(1.5)).epsilon(1e-10));

    CHECK(tau_tilde(kLn, 2.0) == doctest::Approx(0.82).epsilon(1e-10));
    CHECK(tau_tilde(kLn, 4.0) == doctest::Approx(1.96).epsilon(1e-9));
    for (double p : {0.5, 2.0, 17.0})
        CHECK(tau_tilde(kDet, p) == doctest::Approx(p - 1.0).epsilon(1e-12));

    // Continuity at q_max.
    const double qm = q_max(kLn);
    CHECK(tau_tilde(kLn, qm - 1e-8) ==
          doctest::Approx(tau_tilde(kLn, qm + 1e-8)).epsilon(1e-6));

    // alpha_min = lim tau~(p)/p within 0.02 at p = 64.
    for (const WeightModel& m : {kDet, kLn, kTp})
        CHECK(std::abs(tau_tilde(m, 64.0) / 64.0 - alpha_min(m)) <= 0.02);

    // Convention tau~(inf)/inf = alpha_min.
    const double inf = std::numeric_limits<double>::infinity();
    for (const WeightModel& m : {kDet, kLn, kTp})
        CHECK(tau_tilde_over_p(m, inf) ==
              doctest::Approx(alpha_min(m)).epsilon(1e-12));
}

TEST_CASE("g(q) = q tau'(q) - tau(q) is nonincreasing on [1, 64]") {
    for (const WeightModel& m : {kDet, kLn, kTp}) {
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 200; ++i) {
            const double q = 1.0 + 63.0 * i / 200.0;
            const double g = q * tau_prime(m, q) - tau(m, q);
            CHECK(g <= prev + 1e-9);
            prev = g;
        }
    }
}

TEST_CASE("predicted_dims fills the profile") {
    const MultifractalProfile det = predicted_dims(kDet);
    CHECK(det.dim2_predicted == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(det.dimF_flat_predicted == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(det.dimF_curve_predicted == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(det.subcritical);

    const MultifractalProfile ln = predicted_dims(kLn);
    CHECK(ln.dim2_predicted == doctest::Approx(0.82).epsilon(1e-10));
    CHECK(ln.dimF_flat_predicted == doctest::Approx(0.82).epsilon(1e-10));
    CHECK(ln.dimF_curve_predicted == doctest::Approx(0.49).epsilon(1e-10));
    CHECK(ln.tau_at_2 == doctest::Approx(0.82).epsilon(1e-10));
    CHECK(ln.q_max == doctest::Approx(10.0 / 3.0).epsilon(1e-9));

    const MultifractalProfile tp = predicted_dims(kTp);
    CHECK(tp.dim2_predicted ==
          doctest::Approx(2.0 - std::log2(2.5)).epsilon(1e-10));
    CHECK(tp.dimF_curve_predicted ==
          doctest::Approx(1.0 - std::log2(1.5)).epsilon(1e-10));

    // alpha_min in (0, d].
    for (const auto& p : {det, ln, tp}) {
        CHECK(p.alpha_min > 0.0);
        CHECK(p.alpha_min <= p.model.dim);
    }
}

TEST_CASE("profile serialization") {
    const std::string json = profile_to_json(predicted_dims(kLn));
    CHECK(json.find("alpha_min") != std::string::npos);
    CHECK(json.find("q_max") != std::string::npos);
    CHECK(profile_to_table(predicted_dims(kLn)).find("alpha_min") !=
          std::string::npos);
}
