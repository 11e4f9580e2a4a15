#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "mcascade/errors.hpp"

namespace mcas {

enum class WeightFamily { Deterministic, Lognormal, TwoPoint };

std::string to_string(WeightFamily f);
WeightFamily weight_family_from_string(const std::string& s);

// Random weight vector W = (W_i), i in {0..b^d-1}, components i.i.d. with
// unit mean, driving the multiplicative cascade. Lognormal is parametrized
// by the intermittency lambda in base-b units: E(W^q) = b^{lambda q (q-1)}.
struct WeightModel {
    WeightFamily family = WeightFamily::Deterministic;
    double lambda = 0.0;    // Lognormal
    double w_plus = 1.0;    // TwoPoint
    double w_minus = 1.0;   // TwoPoint
    double prob_plus = 1.0; // TwoPoint
    int base = 2;
    int dim = 1;

    int branch_count() const;
    double sigma() const; // Lognormal: sigma^2 = 2 lambda ln b
};

WeightModel make_deterministic(int b, int d);
WeightModel make_lognormal(double lambda, int b, int d);
WeightModel make_two_point(double w_plus, double w_minus, double prob_plus,
                           int b, int d);

// Exact E(W_i^q) for q >= 0.
double marginal_moment(const WeightModel& model, double q);

// E(W log_b W), the subcriticality functional per component.
double mean_w_logb_w(const WeightModel& model);

// Deterministic weight tuple for the node (seed, level, index): the
// branch_count() weights attached to that node's children.
Eigen::ArrayXd sample_weights(const WeightModel& model, std::uint64_t seed,
                              int level, std::uint64_t index);

// Upper bound of the form c * t^{-p_exponent} for P(max_i W_i > t + 1)
// (exact tail for bounded families, Gaussian Chernoff constant for
// Lognormal).
double tail_bound(const WeightModel& model, double t, double p_exponent);

std::string model_to_json(const WeightModel& model);
WeightModel model_from_json(const std::string& json_text);

}  // namespace mcas
