#pragma once

#include <limits>
#include <string>

#include "mcascade/weight_model.hpp"

namespace mcas {

// Analytic multifractal quantities of a weight model. q_max may be
// infinity; alpha_min is always finite for the built-in families.
struct MultifractalProfile {
    WeightModel model;
    double q_max = std::numeric_limits<double>::infinity();
    double alpha_min = 0.0;
    double tau_at_2 = 0.0;
    double tau_tilde_at_2 = 0.0;
    double dim2_predicted = 0.0;
    double dimF_flat_predicted = 0.0;
    double dimF_curve_predicted = 0.0;
    bool subcritical = false;
};

// tau(q) = d q - log_b( sum_i E(W_i^q) ), log to base b.
double tau(const WeightModel& model, double q);

// Closed form where available, Richardson-extrapolated central
// difference otherwise.
double tau_prime(const WeightModel& model, double q);

bool check_subcritical(const WeightModel& model);

// Unique root of q tau'(q) = tau(q) on (1, 512], or +inf when the gap
// stays positive throughout.
double q_max(const WeightModel& model);

double alpha_min(const WeightModel& model);

// tau(p) for p <= q_max, linear continuation p * alpha_min beyond.
double tau_tilde(const WeightModel& model, double p);

// Convention tau_tilde(inf)/inf = alpha_min; handles p = +inf.
double tau_tilde_over_p(const WeightModel& model, double p);

MultifractalProfile predicted_dims(const WeightModel& model);

std::string profile_to_json(const MultifractalProfile& profile);
std::string profile_to_table(const MultifractalProfile& profile);

}  // namespace mcas
