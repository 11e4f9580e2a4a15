#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "mcascade/curve.hpp"
#include "mcascade/rng.hpp"

using namespace mcas;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Arclength of (u, u^2) from 0 to u, closed form.
double parabola_len(double u) {
    return 0.5 * u * std::sqrt(1.0 + 4.0 * u * u) +
           0.25 * std::asinh(2.0 * u);
}
}  // namespace

TEST_CASE("circle arc: closure, curvature, trig values") {
    const CurveSpec full = make_circle_arc(kTwoPi);
    CHECK((full.position(0.0) - full.position(1.0)).norm() <= 1e-12);
    for (double t : {0.0, 0.25, 0.7, 1.0})
        CHECK(frame(full, t).curvature == doctest::Approx(kTwoPi).epsilon(1e-9));

    const CurveSpec unit = make_circle_arc(1.0);
    const Vec2 p = unit.position(std::numbers::pi / 2.0);
    CHECK(p.x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.y() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_circle_arc(0.0), InvalidParams);
    CHECK_THROWS_AS(make_circle_arc(-1.0), InvalidParams);
}

TEST_CASE("circle frame at t = 0") {
    const CurveFrame f = frame(make_circle_arc(kTwoPi), 0.0);
    CHECK((f.point - Vec2(0.0, 0.0)).norm() <= 1e-12);
    CHECK((f.tangent - Vec2(1.0, 0.0)).norm() <= 1e-12);
    CHECK((f.normal - Vec2(0.0, 1.0)).norm() <= 1e-12);
    CHECK(f.curvature == doctest::Approx(kTwoPi).epsilon(1e-12));
}

TEST_CASE("parabola arc: length, endpoint, curvature") {
    const CurveSpec par = make_parabola_arc();
    CHECK(par.raw_length == doctest::Approx(1.0).epsilon(1e-9));

    // Curvature at t=0 equals 2 (kappa of y = x^2 at the origin).
    CHECK(frame(par, 0.0).curvature == doctest::Approx(2.0).epsilon(1e-8));

    // T solving parabola_len(T) = 1: independent quadrature of
    // sqrt(1 + 4u^2) by midpoint rule confirms the closed form.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (parabola_len(mid) < 1.0 ? lo : hi) = mid;
    }
    const double T = 0.5 * (lo + hi);
    CHECK(T == doctest::Approx(0.7634).epsilon(1e-3));
    double quad = 0.0;
    const int kN = 200000;
    for (int i = 0; i < kN; ++i) {
        const double u = T * (i + 0.5) / kN;
        quad += std::sqrt(1.0 + 4.0 * u * u) * (T / kN);
    }
    CHECK(quad == doctest::Approx(1.0).epsilon(1e-8));
    // Endpoint of the unit-length arc, up to the 1/length rescale (= 1 here).
    const Vec2 end = par.position(1.0);
    CHECK(end.x() == doctest::Approx(T).epsilon(1e-7));
    CHECK(end.y() == doctest::Approx(T * T).epsilon(1e-7));
}

TEST_CASE("validate_curve accepts built-ins and reports kappa_min") {
    const double k1 = validate_curve(make_circle_arc(kTwoPi));
    CHECK(k1 == doctest::Approx(0.9 * kTwoPi).epsilon(1e-6));
    CHECK(validate_curve(make_parabola_arc()) > 0.0);
}

TEST_CASE("reparametrize_arclength: unit-speed circle is a fixed point") {
    const CurveSpec circle = make_circle_arc(kTwoPi);
    RawCurve raw{circle.position, circle.derivative, circle.second_derivative};
    const CurveSpec re = reparametrize_arclength(raw);
    CHECK(re.raw_length == doctest::Approx(1.0).epsilon(1e-9));
    for (double t : {0.0, 0.31, 0.5, 0.77, 1.0})
        CHECK((re.position(t) - circle.position(t)).norm() <= 1e-9);
}

TEST_CASE("reparametrize_arclength: raw parabola on [0,1]") {
    RawCurve raw{
        [](double u) { return Vec2(u, u * u); },
        [](double u) { return Vec2(1.0, 2.0 * u); },
        [](double) { return Vec2(0.0, 2.0); },
    };
    const CurveSpec c = reparametrize_arclength(raw);
    const double expected = std::sqrt(5.0) / 2.0 + std::asinh(2.0) / 4.0;
    CHECK(c.raw_length == doctest::Approx(expected).epsilon(1e-9));
    CHECK(validate_curve(c) > 0.0);
}

TEST_CASE("reparametrize_arclength rejects degenerate curves") {
    RawCurve line{
        [](double t) { return Vec2(t, 0.0); },
        [](double) { return Vec2(1.0, 0.0); },
        [](double) { return Vec2(0.0, 0.0); },
    };
    CHECK_THROWS_AS(reparametrize_arclength(line), CurvatureVanishes);

    RawCurve stopped{
        [](double t) { return Vec2(t * t, t * t * t); },
        [](double t) { return Vec2(2.0 * t, 3.0 * t * t); },
        [](double t) { return Vec2(2.0, 6.0 * t); },
    };
    CHECK_THROWS_AS(reparametrize_arclength(stopped), DegenerateSpeed);
}

TEST_CASE("frame orthonormality at 1000 random parameters") {
    for (const CurveSpec& c : {make_circle_arc(kTwoPi), make_parabola_arc()}) {
        for (int i = 0; i < 1000; ++i) {
            const double t = rng::uniform(5, i, 0, 0);
            const CurveFrame f = frame(c, t);
            CHECK(std::abs(f.tangent.norm() - 1.0) <= 1e-9);
            CHECK(std::abs(f.tangent.dot(f.normal)) <= 1e-12);
            CHECK(std::abs(f.normal.norm() - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("chord-arc inequality") {
    const double kappa_max = kTwoPi;
    for (const CurveSpec& c : {make_circle_arc(kTwoPi), make_parabola_arc()}) {
        for (int i = 0; i < 500; ++i) {
            const double s = rng::uniform(6, i, 0, 0);
            const double dt = 0.1 * rng::uniform(6, i, 1, 0);
            const double t = std::min(1.0, s + dt);
            const double chord = (c.position(s) - c.position(t)).norm();
            const double arc = t - s;
            CHECK(chord <= arc + 1e-12);
            CHECK(arc <= (1.0 + kappa_max * kappa_max * arc * arc) * chord + 1e-12);
        }
    }
}
