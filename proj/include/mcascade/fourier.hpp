#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "mcascade/cascade.hpp"
#include "mcascade/curve.hpp"

namespace mcas {

using Complex = std::complex<double>;

struct FrequencySample {
    Vec2 xi = Vec2::Zero();
    Complex value{0.0, 0.0};
    double magnitude = 0.0;
};

// Exact transform of the unit-density b-adic cell: integral over Q of
// e^{-2 pi i x.xi} dx, coordinate-factored, with the xi_j -> 0 limit
// taken analytically.
Complex cell_transform_flat(int b, int d, int n, std::uint64_t address,
                            const Vec2& xi);

// nu_n-hat(xi) = sum over cells of density * cell transform; fixed address
// order with compensated accumulation. For d=1 only xi.x() is used.
FrequencySample transform_flat(const CascadeRealization& r, const Vec2& xi);

// Oscillatory arc integral over [t0,t1] of e^{-2 pi i gamma(t).xi} dt.
// Panels of length <= min(interval, 1/(4|xi|)), Gauss-Legendre 12 per
// panel, validated by panel doubling.
Complex cell_transform_curve(const CurveSpec& c, double t0, double t1,
                             const Vec2& xi, double tol = 1e-10);

// mu_n-hat(xi) for the level-n curve cascade measure.
FrequencySample transform_curve(const CascadeRealization& r,
                                const CurveSpec& c, const Vec2& xi,
                                double tol = 1e-10);

// Precomputed Gauss nodes along the curve for one frequency magnitude;
// evaluating many directions of similar modulus amortizes the geometry.
// Valid for |xi| <= radius_hint.
class CurveTransformEvaluator {
  public:
    CurveTransformEvaluator(const CascadeRealization& r, const CurveSpec& c,
                            double radius_hint);

    Complex operator()(const Vec2& xi) const;
    double magnitude(const Vec2& xi) const { return std::abs((*this)(xi)); }
    double total_mass() const { return total_mass_; }

  private:
    Eigen::ArrayXd px_, py_, coeff_;
    double radius_hint_;
    double total_mass_;
};

// L^p average of |mu_n-hat(r theta)| over n_theta uniform directions
// (surface measure normalized to 1); p = +inf takes the max. A flat d=1
// realization uses the two directions {-1,+1}.
double spherical_average(const CascadeRealization& r,
                         const std::optional<CurveSpec>& curve, double radius,
                         double p, int n_theta);

struct DecayRow {
    double radius = 0.0;
    int n_dirs = 0;
    double sup = 0.0;
    double sigma_inf_uniform = 0.0;  // max over the uniform directions only
    std::map<double, double> sigma;  // p -> L^p average over uniform dirs
};

struct DecaySampleSet {
    std::vector<DecayRow> rows;
};

struct DecayOptions {
    int n_theta = 256;
    bool enrich_normals = true;
    // Normal directions are taken at the b-adic parameters m * b^{-level};
    // the level adapts upward with the radius so the angular spacing stays
    // below the stationary-phase coherence width ~ |xi|^{-1/2}.
    int normal_level = 8;
    bool adapt_normal_level = true;
    // Local golden-section refinement of the directional sup around the
    // best candidates.
    int refine_top = 8;
    int refine_iters = 14;
    std::vector<double> p_list = {1.0, 2.0, 4.0};
};

// Per-radius sup and L^p magnitudes of the transform over a direction set.
DecaySampleSet decay_profile(const CascadeRealization& r,
                             const std::optional<CurveSpec>& curve,
                             const std::vector<double>& radii,
                             const DecayOptions& opts = {});

// max over the frequency set of |arc integral over [0,1]| * |xi|^{1/2}.
double vdc_statistic(const CurveSpec& c, const std::vector<Vec2>& xi_set);

}  // namespace mcas
