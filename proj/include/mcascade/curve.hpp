#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "mcascade/errors.hpp"

namespace mcas {

using Vec2 = Eigen::Vector2d;
using CurveFn = std::function<Vec2(double)>;

struct CurveFrame {
    Vec2 point;
    Vec2 tangent;
    Vec2 normal;
    double curvature = 0.0;
};

// Unit-speed planar C^2 curve on [0,1] with nonvanishing curvature.
// Oracles are immutable after construction; queries are pure.
struct CurveSpec {
    CurveFn position;
    CurveFn derivative;
    CurveFn second_derivative;
    double kappa_min = 0.0;
    double raw_length = 1.0;  // arclength of the raw curve before rescaling
    std::string descriptor;   // JSON {family, params}

    Vec2 operator()(double t) const { return position(t); }
};

// gamma(t) = (1/k)(sin(kt), 1 - cos(kt)); unit speed, curvature k.
// k = 2*pi closes into the full length-1 circle of radius 1/(2*pi).
CurveSpec make_circle_arc(double curvature);

// (u, u^2) on [0, T], arclength-reparametrized so the total length is 1.
CurveSpec make_parabola_arc();

struct RawCurve {
    CurveFn position;
    CurveFn derivative;
    CurveFn second_derivative;
};

// Unit-speed reparametrization of a raw C^2 curve on [0,1]. The geometry
// is rescaled by 1/length so the unit-speed domain stays [0,1]; the raw
// arclength is recorded in the result.
CurveSpec reparametrize_arclength(const RawCurve& raw);

CurveFrame frame(const CurveSpec& c, double t);

// Grid checks of the unit-speed, curvature, and C^2 invariants; throws
// DegenerateSpeed / CurvatureVanishes. Returns the sampled kappa_min
// (scaled by the 0.9 safety factor).
double validate_curve(const CurveSpec& c);

}  // namespace mcas
