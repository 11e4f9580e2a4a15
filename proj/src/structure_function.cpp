#include "mcascade/structure_function.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace mcas {

namespace {

constexpr double kQCap = 512.0;
constexpr double kRootTol = 1e-9;

double logb(const WeightModel& model, double x) {
    return std::log(x) / std::log(static_cast<double>(model.base));
}

// Central difference with one Richardson extrapolation step, step size
// shrunk until two consecutive estimates agree to 1e-8.
double tau_prime_numeric(const WeightModel& model, double q) {
    auto f = [&](double x) { return tau(model, x); };
    double h = std::max(1e-3, 1e-3 * q);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int iter = 0; iter < 20; ++iter) {
        const double d1 = (f(q + h) - f(q - h)) / (2.0 * h);
        const double d2 = (f(q + h / 2) - f(q - h / 2)) / h;
        const double richardson = (4.0 * d2 - d1) / 3.0;
        if (std::isfinite(prev) && std::abs(richardson - prev) < 1e-8)
            return richardson;
        prev = richardson;
        h /= 2.0;
    }
    return prev;
}

double subcritical_gap(const WeightModel& model, double q) {
    return q * tau_prime(model, q) - tau(model, q);
}

}  // namespace

double tau(const WeightModel& model, double q) {
    const double d = model.dim;
    // log_b E(W^q) in closed form; the moment itself overflows for large q.
    double log_moment;
    switch (model.family) {
        case WeightFamily::Deterministic:
            log_moment = 0.0;
            break;
        case WeightFamily::Lognormal:
            log_moment = model.lambda * q * (q - 1.0);
            break;
        case WeightFamily::TwoPoint: {
            const double a = q * std::log(model.w_plus) + std::log(model.prob_plus);
            const double c =
                q * std::log(model.w_minus) + std::log(1.0 - model.prob_plus);
            const double m = std::max(a, c);
            log_moment = (m + std::log(std::exp(a - m) + std::exp(c - m))) /
                         std::log(static_cast<double>(model.base));
            break;
        }
        default:
            log_moment = logb(model, marginal_moment(model, q));
    }
    return d * q - (d + log_moment);
}

double tau_prime(const WeightModel& model, double q) {
    if (!(q > 0.0)) throw InvalidParams("tau' requires q > 0");
    const double d = model.dim;
    switch (model.family) {
        case WeightFamily::Deterministic:
            return d;
        case WeightFamily::Lognormal:
            return d - model.lambda * (2.0 * q - 1.0);
        case WeightFamily::TwoPoint: {
            // d - E(W^q ln W) / (ln b * E(W^q))
            const double lnb = std::log(static_cast<double>(model.base));
            const double mq = marginal_moment(model, q);
            const double dmq =
                model.prob_plus * std::pow(model.w_plus, q) * std::log(model.w_plus) +
                (1.0 - model.prob_plus) * std::pow(model.w_minus, q) *
                    std::log(model.w_minus);
            return d - dmq / (lnb * mq);
        }
    }
    return tau_prime_numeric(model, q);
}

bool check_subcritical(const WeightModel& model) {
    return tau_prime(model, 1.0) > 0.0;
}

double q_max(const WeightModel& model) {
    if (!check_subcritical(model))
        throw NotSubcritical("model is not subcritical (tau'(1) <= 0)");
    // g(q) = q tau'(q) - tau(q) is nonincreasing (g' = q tau'' <= 0) and
    // g(1) = tau'(1) > 0. Bisect for a sign change on (1, kQCap].
    // No true crossing before the cap (for bounded weights g decays to 0
    // from above, like b^{-q} * poly): declare q_max infinite.
    if (subcritical_gap(model, kQCap) > -kRootTol)
        return std::numeric_limits<double>::infinity();
    double lo = 1.0, hi = kQCap;
    while (hi - lo > kRootTol) {
        const double mid = 0.5 * (lo + hi);
        if (subcritical_gap(model, mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double alpha_min(const WeightModel& model) {
    const double qm = q_max(model);
    if (std::isfinite(qm)) return tau(model, qm) / qm;
    // lim tau'(q) in closed form for the bounded built-ins.
    switch (model.family) {
        case WeightFamily::Deterministic:
            return static_cast<double>(model.dim);
        case WeightFamily::TwoPoint:
            return model.dim - logb(model, model.w_plus);
        case WeightFamily::Lognormal:
            break;  // q_max = sqrt(d/lambda) is always finite
    }
    return tau_prime(model, kQCap);
}

double tau_tilde(const WeightModel& model, double p) {
    if (!(p > 0.0)) throw InvalidParams("tau_tilde requires p > 0");
    const double qm = q_max(model);
    if (p <= qm) return tau(model, p);
    return p * alpha_min(model);
}

double tau_tilde_over_p(const WeightModel& model, double p) {
    if (std::isinf(p)) return alpha_min(model);
    return tau_tilde(model, p) / p;
}

MultifractalProfile predicted_dims(const WeightModel& model) {
    if (!check_subcritical(model))
        throw NotSubcritical("model is not subcritical (tau'(1) <= 0)");
    MultifractalProfile prof;
    prof.model = model;
    prof.subcritical = true;
    prof.q_max = q_max(model);
    prof.alpha_min = alpha_min(model);
    prof.tau_at_2 = tau(model, 2.0);
    prof.tau_tilde_at_2 = tau_tilde(model, 2.0);
    prof.dim2_predicted = prof.tau_tilde_at_2;
    prof.dimF_flat_predicted = std::min(2.0, prof.tau_tilde_at_2);
    prof.dimF_curve_predicted = prof.alpha_min;
    return prof;
}

std::string profile_to_json(const MultifractalProfile& prof) {
    nlohmann::json j;
    j["model"] = nlohmann::json::parse(model_to_json(prof.model));
    j["q_max"] = std::isfinite(prof.q_max) ? nlohmann::json(prof.q_max)
                                           : nlohmann::json("inf");
    j["alpha_min"] = prof.alpha_min;
    j["tau_at_2"] = prof.tau_at_2;
    j["tau_tilde_at_2"] = prof.tau_tilde_at_2;
    j["dim2_predicted"] = prof.dim2_predicted;
    j["dimF_flat_predicted"] = prof.dimF_flat_predicted;
    j["dimF_curve_predicted"] = prof.dimF_curve_predicted;
    j["subcritical"] = prof.subcritical;
    return j.dump(2);
}

std::string profile_to_table(const MultifractalProfile& prof) {
    std::ostringstream os;
    auto row = [&os](const std::string& name, double v) {
        os << "  ";
        os.width(22);
        os.setf(std::ios::left, std::ios::adjustfield);
        os << name;
        os.precision(12);
        os << v << "\n";
    };
    os << "multifractal profile (" << to_string(prof.model.family)
       << ", b=" << prof.model.base << ", d=" << prof.model.dim << ")\n";
    if (std::isfinite(prof.q_max)) row("q_max", prof.q_max);
    else os << "  q_max                 inf\n";
    row("alpha_min", prof.alpha_min);
    row("tau(2)", prof.tau_at_2);
    row("tau_tilde(2)", prof.tau_tilde_at_2);
    row("dim2_predicted", prof.dim2_predicted);
    row("dimF_flat_predicted", prof.dimF_flat_predicted);
    row("dimF_curve_predicted", prof.dimF_curve_predicted);
    return os.str();
}

}  // namespace mcas
