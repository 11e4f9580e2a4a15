#include "mcascade/fourier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace mcas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss-Legendre 12 on [0,1].
struct Gauss12 {
    std::array<double, 12> x;
    std::array<double, 12> w;
    Gauss12() {
        constexpr double xs[6] = {0.1252334085114689, 0.3678314989981802,
                                  0.5873179542866175, 0.7699026741943047,
                                  0.9041172563704749, 0.9815606342467192};
        constexpr double ws[6] = {0.2491470458134028, 0.2334925365383548,
                                  0.2031674267230659, 0.1600783285433462,
                                  0.1069393259953184, 0.0471753363865118};
        for (int i = 0; i < 6; ++i) {
            x[i] = 0.5 * (1.0 - xs[i]);
            x[11 - i] = 0.5 * (1.0 + xs[i]);
            w[i] = 0.5 * ws[i];
            w[11 - i] = 0.5 * ws[i];
        }
    }
};
const Gauss12 g12;

Complex interval_transform(double x0, double h, double xi) {
    if (xi == 0.0) return Complex(h, 0.0);
    const Complex i2pix(0.0, kTwoPi * xi);
    const Complex front = std::exp(-Complex(0.0, kTwoPi * xi * x0));
    return front * (1.0 - std::exp(-Complex(0.0, kTwoPi * xi * h))) / i2pix;
}

// Compensated (Kahan) complex accumulator; summation order is fixed by
// the caller so results are reproducible across thread counts.
struct KahanComplex {
    Complex sum{0.0, 0.0};
    Complex carry{0.0, 0.0};
    void add(Complex v) {
        const Complex y = v - carry;
        const Complex t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

Complex curve_panels(const CurveSpec& c, double t0, double t1, const Vec2& xi,
                     int panels) {
    const double len = t1 - t0;
    KahanComplex acc;
    for (int p = 0; p < panels; ++p) {
        const double a = t0 + len * p / panels;
        const double h = len / panels;
        for (int g = 0; g < 12; ++g) {
            const Vec2 pos = c.position(a + h * g12.x[g]);
            const double phase = kTwoPi * (pos.x() * xi.x() + pos.y() * xi.y());
            acc.add(Complex(std::cos(phase), -std::sin(phase)) * (g12.w[g] * h));
        }
    }
    return acc.sum;
}

}  // namespace

Complex cell_transform_flat(int b, int d, int n, std::uint64_t address,
                            const Vec2& xi) {
    const double h = std::pow(static_cast<double>(b), -n);
    double x[2] = {0.0, 0.0};
    // Decode the base-b^d digit string, most significant first.
    std::uint64_t branch = 1;
    for (int j = 0; j < d; ++j) branch *= static_cast<std::uint64_t>(b);
    double scale = 1.0;
    std::uint64_t pow = 1;
    for (int k = 1; k < n; ++k) pow *= branch;
    for (int k = 0; k < n; ++k) {
        const std::uint64_t digit = (address / pow) % branch;
        scale /= b;
        std::uint64_t rem = digit;
        for (int j = 0; j < d; ++j) {
            x[j] += static_cast<double>(rem % static_cast<std::uint64_t>(b)) * scale;
            rem /= static_cast<std::uint64_t>(b);
        }
        if (k + 1 < n) pow /= branch;
    }
    Complex out(1.0, 0.0);
    const double xiv[2] = {xi.x(), xi.y()};
    for (int j = 0; j < d; ++j) out *= interval_transform(x[j], h, xiv[j]);
    return out;
}

FrequencySample transform_flat(const CascadeRealization& r, const Vec2& xi) {
    const int b = r.model().base;
    const int d = r.model().dim;
    const int n = r.depth();
    const double density_scale = std::pow(static_cast<double>(b), d * n);
    KahanComplex acc;
    for (Eigen::Index i = 0; i < r.masses().size(); ++i) {
        const double density = r.masses()[i] * density_scale;
        if (density == 0.0) continue;
        acc.add(density *
                cell_transform_flat(b, d, n, static_cast<std::uint64_t>(i), xi));
    }
    FrequencySample out;
    out.xi = xi;
    out.value = acc.sum;
    out.magnitude = std::abs(acc.sum);
    return out;
}

Complex cell_transform_curve(const CurveSpec& c, double t0, double t1,
                             const Vec2& xi, double tol) {
    if (!(t1 > t0)) throw InvalidParams("empty parameter interval");
    if (tol < 1e-12) throw InvalidParams("tolerance below 1e-12");
    const double len = t1 - t0;
    const double r = xi.norm();
    int panels = (r > 0.0)
                     ? std::max(1, static_cast<int>(std::ceil(len * 4.0 * r)))
                     : 1;
    Complex coarse = curve_panels(c, t0, t1, xi, panels);
    for (int refinement = 0; refinement < 3; ++refinement) {
        const Complex fine = curve_panels(c, t0, t1, xi, panels * 2);
        if (std::abs(fine - coarse) <= tol * len) return fine;
        panels *= 2;
        coarse = fine;
    }
    throw ToleranceUnachievable("panel doubling did not converge to tolerance");
}

FrequencySample transform_curve(const CascadeRealization& r,
                                const CurveSpec& c, const Vec2& xi,
                                double tol) {
    if (r.model().dim != 1)
        throw DimensionMismatch("curve transforms require a d=1 cascade");
    const int n = r.depth();
    const double cells = static_cast<double>(r.masses().size());
    const double h = 1.0 / cells;
    KahanComplex acc;
    for (Eigen::Index i = 0; i < r.masses().size(); ++i) {
        const double density = r.masses()[i] * cells;
        if (density == 0.0) continue;
        acc.add(density * cell_transform_curve(c, i * h, (i + 1) * h, xi, tol));
    }
    (void)n;
    FrequencySample out;
    out.xi = xi;
    out.value = acc.sum;
    out.magnitude = std::abs(acc.sum);
    return out;
}

CurveTransformEvaluator::CurveTransformEvaluator(const CascadeRealization& r,
                                                 const CurveSpec& c,
                                                 double radius_hint)
    : radius_hint_(radius_hint), total_mass_(r.total_mass()) {
    if (r.model().dim != 1)
        throw DimensionMismatch("curve transforms require a d=1 cascade");
    const Eigen::Index cells = r.masses().size();
    const double h = 1.0 / static_cast<double>(cells);
    const int panels_per_cell = std::max(
        1, static_cast<int>(std::ceil(h * 4.0 * std::max(radius_hint, 1.0))));
    const Eigen::Index nodes = cells * panels_per_cell * 12;
    px_.resize(nodes);
    py_.resize(nodes);
    coeff_.resize(nodes);
    const double ph = h / panels_per_cell;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < cells; ++i) {
        const double density = r.masses()[i] * static_cast<double>(cells);
        for (int p = 0; p < panels_per_cell; ++p) {
            const double a = i * h + p * ph;
            for (int g = 0; g < 12; ++g, ++k) {
                const Vec2 pos = c.position(a + ph * g12.x[g]);
                px_[k] = pos.x();
                py_[k] = pos.y();
                coeff_[k] = density * g12.w[g] * ph;
            }
        }
    }
}

Complex CurveTransformEvaluator::operator()(const Vec2& xi) const {
    const Eigen::ArrayXd phase = kTwoPi * (px_ * xi.x() + py_ * xi.y());
    const double re = (coeff_ * phase.cos()).sum();
    const double im = -(coeff_ * phase.sin()).sum();
    return Complex(re, im);
}

double spherical_average(const CascadeRealization& r,
                         const std::optional<CurveSpec>& curve, double radius,
                         double p, int n_theta) {
    if (n_theta < 16) throw InvalidParams("n_theta must be >= 16");
    std::vector<double> mags;
    if (curve) {
        const CurveTransformEvaluator eval(r, *curve, radius);
        mags.resize(n_theta);
        for (int k = 0; k < n_theta; ++k) {
            const double ang = kTwoPi * k / n_theta;
            mags[k] = eval.magnitude(radius * Vec2(std::cos(ang), std::sin(ang)));
        }
    } else if (r.model().dim == 1) {
        // S^0 = {-1, +1}; conjugate symmetry makes both magnitudes equal.
        mags.assign(2, transform_flat(r, Vec2(radius, 0.0)).magnitude);
    } else {
        mags.resize(n_theta);
        for (int k = 0; k < n_theta; ++k) {
            const double ang = kTwoPi * k / n_theta;
            mags[k] = transform_flat(
                          r, radius * Vec2(std::cos(ang), std::sin(ang)))
                          .magnitude;
        }
    }
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : mags) m = std::max(m, v);
        return m;
    }
    double s = 0.0;
    for (double v : mags) s += std::pow(v, p);
    return std::pow(s / static_cast<double>(mags.size()), 1.0 / p);
}

namespace {

// Golden-section maximization of the directional magnitude on an angular
// bracket.
double refine_direction(const CurveTransformEvaluator& eval, double radius,
                        double ang0, double half_width, int iters) {
    constexpr double kGolden = 0.6180339887498949;
    auto mag = [&](double a) {
        return eval.magnitude(radius * Vec2(std::cos(a), std::sin(a)));
    };
    double a = ang0 - half_width, b = ang0 + half_width;
    double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
    double fc = mag(c), fd = mag(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = mag(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = mag(d);
        }
    }
    return std::max(fc, fd);
}

}  // namespace

DecaySampleSet decay_profile(const CascadeRealization& r,
                             const std::optional<CurveSpec>& curve,
                             const std::vector<double>& radii,
                             const DecayOptions& opts) {
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw InvalidParams("radii must be strictly increasing");
    DecaySampleSet out;
    out.rows.reserve(radii.size());
    const int b = r.model().base;

    if (!curve) {
        for (double radius : radii) {
            DecayRow row;
            row.radius = radius;
            row.n_dirs = (r.model().dim == 1) ? 2 : opts.n_theta;
            if (r.model().dim == 1) {
                const double m = transform_flat(r, Vec2(radius, 0.0)).magnitude;
                row.sup = m;
                row.sigma_inf_uniform = m;
                for (double p : opts.p_list) row.sigma[p] = m;
            } else {
                std::vector<double> mags(opts.n_theta);
                for (int k = 0; k < opts.n_theta; ++k) {
                    const double ang = kTwoPi * k / opts.n_theta;
                    mags[k] =
                        transform_flat(r, radius * Vec2(std::cos(ang), std::sin(ang)))
                            .magnitude;
                }
                row.sup = *std::max_element(mags.begin(), mags.end());
                row.sigma_inf_uniform = row.sup;
                for (double p : opts.p_list) {
                    double s = 0.0;
                    for (double v : mags) s += std::pow(v, p);
                    row.sigma[p] = std::pow(s / mags.size(), 1.0 / p);
                }
            }
            out.rows.push_back(std::move(row));
        }
        return out;
    }

    for (double radius : radii) {
        const CurveTransformEvaluator eval(r, *curve, radius);
        // Candidate directions: uniform angles plus curve normals at b-adic
        // parameters, the slow-decay directions.
        std::vector<double> angles(opts.n_theta);
        for (int k = 0; k < opts.n_theta; ++k)
            angles[k] = kTwoPi * k / opts.n_theta;
        std::size_t n_uniform = angles.size();
        if (opts.enrich_normals) {
            int level = opts.normal_level;
            if (opts.adapt_normal_level) {
                // Angular spacing of level-L normals must resolve the
                // stationary-phase cone, width ~ radius^{-1/2}.
                while (std::pow(static_cast<double>(b), -level) * kTwoPi >
                           0.5 / std::sqrt(std::max(radius, 1.0)) &&
                       level < 14)
                    ++level;
            }
            std::uint64_t count = 1;
            for (int i = 0; i < level; ++i) count *= static_cast<std::uint64_t>(b);
            for (std::uint64_t m = 0; m < count; ++m) {
                const double t = static_cast<double>(m) / static_cast<double>(count);
                const CurveFrame f = frame(*curve, t);
                angles.push_back(std::atan2(f.normal.y(), f.normal.x()));
            }
        }
        std::vector<double> mags(angles.size());
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(angles.size()); ++k)
            mags[k] = eval.magnitude(
                radius * Vec2(std::cos(angles[k]), std::sin(angles[k])));

        double sup = *std::max_element(mags.begin(), mags.end());
        if (opts.refine_top > 0) {
            std::vector<std::size_t> order(angles.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            const std::size_t top =
                std::min<std::size_t>(opts.refine_top, order.size());
            std::partial_sort(order.begin(), order.begin() + top, order.end(),
                              [&](std::size_t a, std::size_t c) {
                                  return mags[a] > mags[c];
                              });
            std::vector<double> refined(top);
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(top); ++i)
                refined[i] = refine_direction(eval, radius, angles[order[i]],
                                              0.004, opts.refine_iters);
            for (double v : refined) sup = std::max(sup, v);
        }

        DecayRow row;
        row.radius = radius;
        row.n_dirs = static_cast<int>(angles.size());
        row.sup = sup;
        row.sigma_inf_uniform =
            *std::max_element(mags.begin(), mags.begin() + n_uniform);
        for (double p : opts.p_list) {
            double s = 0.0;
            for (std::size_t k = 0; k < n_uniform; ++k) s += std::pow(mags[k], p);
            row.sigma[p] = std::pow(s / static_cast<double>(n_uniform), 1.0 / p);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

double vdc_statistic(const CurveSpec& c, const std::vector<Vec2>& xi_set) {
    double best = 0.0;
    for (const Vec2& xi : xi_set) {
        const double r = xi.norm();
        if (r < 1.0) throw InvalidFrequency("vdc statistic requires |xi| >= 1");
        const double mag = std::abs(cell_transform_curve(c, 0.0, 1.0, xi, 1e-9));
        best = std::max(best, mag * std::sqrt(r));
    }
    return best;
}

}  // namespace mcas
