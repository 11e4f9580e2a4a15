#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "mcascade/cascade.hpp"
#include "mcascade/curve.hpp"
#include "mcascade/fourier.hpp"

namespace mcas {

struct DecayFit {
    Eigen::ArrayXd log_r;          // log_b radius
    Eigen::ArrayXd log_magnitude;  // log_b magnitude
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double fourier_dim_estimate = 0.0;  // -2 * slope
};

// OLS on (log_b r, log_b magnitude); exact on noiseless power laws.
DecayFit fit_power_law(const std::vector<std::pair<double, double>>& samples,
                       int log_base = 2);

// Radius schedule b^{k0}..b^{k1} with several moduli per octave; the
// per-octave sup feeds the power-law fit, tracking the sup-based
// dimension definition instead of single frequency snapshots.
struct RadiiSpec {
    int k0 = 4;
    int k1 = 11;
    int base = 2;
    int per_octave = 4;

    std::vector<double> octave_radii(int octave) const;
};

struct EnsembleDimResult {
    double mean = 0.0;
    double stddev = 0.0;
    int discarded = 0;
    std::vector<DecayFit> fits;  // one per surviving seed
};

// Per-seed decay profile -> power-law fit of the per-octave sup, then the
// ensemble mean/std of the Fourier-dimension estimates.
EnsembleDimResult ensemble_fourier_dim(const WeightModel& model,
                                       const std::optional<CurveSpec>& curve,
                                       int depth, const RadiiSpec& radii,
                                       const std::vector<std::uint64_t>& seeds,
                                       const DecayOptions& opts = {});

// One-dimensional measure binned on a dyadic grid over [lo, hi).
struct BinnedMeasure {
    double lo = 0.0;
    double hi = 1.0;
    Eigen::ArrayXd mass;  // 2^levels bins
};

// Pushforward of the level-n curve measure under x -> x . theta.
BinnedMeasure project_measure(const CascadeRealization& r, const CurveSpec& c,
                              const Vec2& theta, int out_levels);

// Correlation-dimension estimate of a binned measure: regression of
// -log2 of the L^2 mass sum across dyadic coarsenings.
double dim2_of_binned(const BinnedMeasure& m, int level_min, int level_max);

struct ConcentrationInput {
    int N = 0;
    double c_phi = 1.0;       // tail constant: Phi(t) = c_phi * t^{-p}
    double p_exponent = 8.0;  // > 4
    std::vector<double> coefficients;
    double threshold = 1.0;   // t > 0
    double truncation = 2.0;  // M > 1
    double q = 1.0;           // q <= p/2 - 1
    double second_moment_K = 8.0;  // explicit O(lambda^2) constant
};

// N Phi(M) + exp(-lambda t + K lambda^2 sum a_k^2), lambda = q ln M / (M max a_k).
double concentration_bound(const ConcentrationInput& in);

// Bounded zero-mean discrete distribution with declared power tail.
struct DiscreteZeroMeanDist {
    std::vector<double> values;
    std::vector<double> probs;
};

struct ConcentrationMcResult {
    double empirical_tail = 0.0;
    double bound = 0.0;
};

ConcentrationMcResult concentration_mc(const DiscreteZeroMeanDist& dist,
                                       const ConcentrationInput& in,
                                       std::int64_t trials,
                                       std::uint64_t seed = 12345);

}  // namespace mcas
