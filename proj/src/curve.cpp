#include "mcascade/curve.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "json.hpp"

namespace mcas {

namespace {

// Gauss-Legendre 10 on [0,1].
struct Gauss10 {
    std::array<double, 10> x;
    std::array<double, 10> w;
    Gauss10() {
        constexpr double xs[5] = {0.1488743389816312, 0.4333953941292472,
                                  0.6794095682990244, 0.8650633666889845,
                                  0.9739065285171717};
        constexpr double ws[5] = {0.2955242247147529, 0.2692667193099963,
                                  0.2190863625159820, 0.1494513491505806,
                                  0.0666713443086881};
        for (int i = 0; i < 5; ++i) {
            x[i] = 0.5 * (1.0 - xs[i]);
            x[9 - i] = 0.5 * (1.0 + xs[i]);
            w[i] = 0.5 * ws[i];
            w[9 - i] = 0.5 * ws[i];
        }
    }
};
const Gauss10 g10;

double gauss_integral(const std::function<double(double)>& f, double a,
                      double b) {
    double s = 0.0;
    for (int i = 0; i < 10; ++i) s += g10.w[i] * f(a + (b - a) * g10.x[i]);
    return s * (b - a);
}

// Cumulative arclength table of a raw curve, with O(1) inverse queries.
class ArclengthTable {
  public:
    ArclengthTable(const RawCurve& raw, int panels) : raw_(raw), s_(panels + 1) {
        auto speed = [&](double u) { return raw_.derivative(u).norm(); };
        s_[0] = 0.0;
        for (int i = 0; i < panels; ++i) {
            const double a = static_cast<double>(i) / panels;
            const double b = static_cast<double>(i + 1) / panels;
            s_[i + 1] = s_[i] + gauss_integral(speed, a, b);
        }
    }

    double length() const { return s_.back(); }

    // u with s(u) = target, by bracketed Newton inside the panel.
    double invert(double target) const {
        const int panels = static_cast<int>(s_.size()) - 1;
        target = std::clamp(target, 0.0, s_.back());
        int lo = 0, hi = panels;
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            if (s_[mid] <= target) lo = mid;
            else hi = mid;
        }
        const double ua = static_cast<double>(lo) / panels;
        const double ub = static_cast<double>(lo + 1) / panels;
        auto speed = [&](double u) { return raw_.derivative(u).norm(); };
        double u = ua + (ub - ua) * (target - s_[lo]) /
                            std::max(s_[lo + 1] - s_[lo], 1e-300);
        for (int iter = 0; iter < 8; ++iter) {
            const double f = s_[lo] + gauss_integral(speed, ua, u) - target;
            const double step = f / std::max(speed(u), 1e-300);
            u = std::clamp(u - step, ua, ub);
            if (std::abs(step) < 1e-14) break;
        }
        return u;
    }

  private:
    RawCurve raw_;
    std::vector<double> s_;
};

}  // namespace

double validate_curve(const CurveSpec& c) {
    constexpr int kGrid = 10000;
    double min_det = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kGrid; ++i) {
        const double t = static_cast<double>(i) / kGrid;
        const Vec2 d1 = c.derivative(t);
        const Vec2 d2 = c.second_derivative(t);
        if (std::abs(d1.norm() - 1.0) > 1e-10)
            throw DegenerateSpeed("curve is not unit speed at t=" + std::to_string(t));
        const double det = d1.x() * d2.y() - d1.y() * d2.x();
        min_det = std::min(min_det, std::abs(det));
    }
    if (!(min_det > 1e-8))
        throw CurvatureVanishes("curvature vanishes on the sample grid");
    // C^2 spot check: derivative oracle vs central difference of position.
    constexpr double h = 1e-5;
    for (int i = 1; i < 100; ++i) {
        const double t = static_cast<double>(i) / 100;
        const Vec2 fd = (c.position(t + h) - c.position(t - h)) / (2.0 * h);
        if ((fd - c.derivative(t)).norm() > 1e-6)
            throw DegenerateSpeed("derivative oracle disagrees with finite differences");
    }
    return 0.9 * min_det;
}

CurveSpec make_circle_arc(double curvature) {
    if (!(curvature > 0.0)) throw InvalidParams("curvature must be > 0");
    const double k = curvature;
    CurveSpec c;
    c.position = [k](double t) {
        return Vec2(std::sin(k * t) / k, (1.0 - std::cos(k * t)) / k);
    };
    c.derivative = [k](double t) {
        return Vec2(std::cos(k * t), std::sin(k * t));
    };
    c.second_derivative = [k](double t) {
        return Vec2(-k * std::sin(k * t), k * std::cos(k * t));
    };
    nlohmann::json j = {{"family", "circle_arc"}, {"params", {{"kappa", k}}}};
    c.descriptor = j.dump();
    c.raw_length = 1.0;
    c.kappa_min = validate_curve(c);
    return c;
}

namespace {

// Arclength of u -> (u, u^2) from 0: s(u) = u*sqrt(1+4u^2)/2 + asinh(2u)/4.
double parabola_arclength(double u) {
    return 0.5 * u * std::sqrt(1.0 + 4.0 * u * u) + 0.25 * std::asinh(2.0 * u);
}

double parabola_u_of_s(double s) {
    double u = s;  // initial guess; s(u) ~ u near 0 and is convex
    for (int iter = 0; iter < 40; ++iter) {
        const double f = parabola_arclength(u) - s;
        const double step = f / std::sqrt(1.0 + 4.0 * u * u);
        u -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return u;
}

}  // namespace

CurveSpec make_parabola_arc() {
    CurveSpec c;
    c.position = [](double t) {
        const double u = parabola_u_of_s(t);
        return Vec2(u, u * u);
    };
    c.derivative = [](double t) {
        const double u = parabola_u_of_s(t);
        const double v = std::sqrt(1.0 + 4.0 * u * u);
        return Vec2(1.0 / v, 2.0 * u / v);
    };
    c.second_derivative = [](double t) {
        const double u = parabola_u_of_s(t);
        const double v2 = 1.0 + 4.0 * u * u;
        return Vec2(-4.0 * u / (v2 * v2), 2.0 / (v2 * v2));
    };
    nlohmann::json j = {{"family", "parabola_arc"},
                        {"params", nlohmann::json::object()}};
    c.descriptor = j.dump();
    c.raw_length = 1.0;
    c.kappa_min = validate_curve(c);
    return c;
}

CurveSpec reparametrize_arclength(const RawCurve& raw) {
    // Degeneracy checks on the raw parametrization.
    constexpr int kGrid = 4096;
    for (int i = 0; i <= kGrid; ++i) {
        const double u = static_cast<double>(i) / kGrid;
        const Vec2 d1 = raw.derivative(u);
        if (d1.norm() < 1e-8)
            throw DegenerateSpeed("raw curve speed vanishes at u=" + std::to_string(u));
        const Vec2 d2 = raw.second_derivative(u);
        const double det = d1.x() * d2.y() - d1.y() * d2.x();
        if (std::abs(det) / std::pow(d1.norm(), 3) < 1e-8)
            throw CurvatureVanishes("raw curve curvature vanishes at u=" +
                                    std::to_string(u));
    }
    auto table = std::make_shared<ArclengthTable>(raw, kGrid);
    const double len = table->length();
    const RawCurve r = raw;
    CurveSpec c;
    c.raw_length = len;
    // Geometry scaled by 1/len keeps the unit-speed domain equal to [0,1].
    c.position = [r, table, len](double t) -> Vec2 {
        const double u = table->invert(t * len);
        return r.position(u) / len;
    };
    c.derivative = [r, table, len](double t) -> Vec2 {
        const double u = table->invert(t * len);
        const Vec2 d1 = r.derivative(u);
        return d1 / d1.norm();
    };
    c.second_derivative = [r, table, len](double t) -> Vec2 {
        const double u = table->invert(t * len);
        const Vec2 d1 = r.derivative(u);
        const Vec2 d2 = r.second_derivative(u);
        const double n2 = d1.squaredNorm();
        const Vec2 tprime = (d2 * n2 - d1 * d1.dot(d2)) / (n2 * d1.norm());
        return tprime * len / d1.norm();
    };
    nlohmann::json j = {{"family", "reparametrized"},
                        {"params", {{"raw_length", len}}}};
    c.descriptor = j.dump();
    c.kappa_min = validate_curve(c);
    return c;
}

CurveFrame frame(const CurveSpec& c, double t) {
    if (t < 0.0 || t > 1.0) throw InvalidParams("curve parameter outside [0,1]");
    CurveFrame f;
    f.point = c.position(t);
    f.tangent = c.derivative(t);
    const Vec2 d2 = c.second_derivative(t);
    f.normal = Vec2(-f.tangent.y(), f.tangent.x());
    f.curvature = f.tangent.x() * d2.y() - f.tangent.y() * d2.x();
    return f;
}

}  // namespace mcas
