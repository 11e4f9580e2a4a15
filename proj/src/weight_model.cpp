#include "mcascade/weight_model.hpp"

#include <cmath>
#include <limits>

#include "mcascade/rng.hpp"
#include "json.hpp"

namespace mcas {

namespace {

void check_base_dim(int b, int d) {
    if (b < 2) throw InvalidParams("base must be >= 2");
    if (d < 1) throw InvalidParams("spatial dimension must be >= 1");
    if (d > 2) throw InvalidParams("spatial dimension > 2 not supported");
}

}  // namespace

std::string to_string(WeightFamily f) {
    switch (f) {
        case WeightFamily::Deterministic: return "deterministic";
        case WeightFamily::Lognormal: return "lognormal";
        case WeightFamily::TwoPoint: return "two_point";
    }
    return "unknown";
}

WeightFamily weight_family_from_string(const std::string& s) {
    if (s == "deterministic") return WeightFamily::Deterministic;
    if (s == "lognormal") return WeightFamily::Lognormal;
    if (s == "two_point" || s == "twopoint") return WeightFamily::TwoPoint;
    throw InvalidParams("unknown weight family: " + s);
}

int WeightModel::branch_count() const {
    int n = 1;
    for (int j = 0; j < dim; ++j) n *= base;
    return n;
}

double WeightModel::sigma() const {
    return std::sqrt(2.0 * lambda * std::log(static_cast<double>(base)));
}

WeightModel make_deterministic(int b, int d) {
    check_base_dim(b, d);
    WeightModel m;
    m.family = WeightFamily::Deterministic;
    m.base = b;
    m.dim = d;
    return m;
}

WeightModel make_lognormal(double lambda, int b, int d) {
    check_base_dim(b, d);
    if (!(lambda > 0.0)) throw InvalidParams("lognormal intermittency must be > 0");
    WeightModel m;
    m.family = WeightFamily::Lognormal;
    m.lambda = lambda;
    m.base = b;
    m.dim = d;
    return m;
}

WeightModel make_two_point(double w_plus, double w_minus, double prob_plus,
                           int b, int d) {
    check_base_dim(b, d);
    if (!(w_minus > 0.0)) throw InvalidParams("w_minus must be > 0");
    if (!(w_plus > 1.0) || !(w_minus < 1.0))
        throw InvalidParams("two-point values must satisfy w_plus > 1 > w_minus");
    if (!(prob_plus > 0.0) || !(prob_plus < 1.0))
        throw InvalidParams("prob_plus must lie in (0,1)");
    const double mean = prob_plus * w_plus + (1.0 - prob_plus) * w_minus;
    if (std::abs(mean - 1.0) > 1e-12)
        throw InvalidParams("two-point mean constraint p*w+ + (1-p)*w- = 1 violated");
    WeightModel m;
    m.family = WeightFamily::TwoPoint;
    m.w_plus = w_plus;
    m.w_minus = w_minus;
    m.prob_plus = prob_plus;
    m.base = b;
    m.dim = d;
    return m;
}

double marginal_moment(const WeightModel& model, double q) {
    if (q < 0.0) throw InvalidParams("moment order must be >= 0");
    switch (model.family) {
        case WeightFamily::Deterministic:
            return 1.0;
        case WeightFamily::Lognormal:
            return std::pow(static_cast<double>(model.base),
                            model.lambda * q * (q - 1.0));
        case WeightFamily::TwoPoint:
            return model.prob_plus * std::pow(model.w_plus, q) +
                   (1.0 - model.prob_plus) * std::pow(model.w_minus, q);
    }
    return 1.0;
}

double mean_w_logb_w(const WeightModel& model) {
    const double lnb = std::log(static_cast<double>(model.base));
    switch (model.family) {
        case WeightFamily::Deterministic:
            return 0.0;
        case WeightFamily::Lognormal:
            // E(W ln W) = sigma^2 / 2 for W = exp(sigma N - sigma^2/2).
            return model.lambda;
        case WeightFamily::TwoPoint:
            return (model.prob_plus * model.w_plus * std::log(model.w_plus) +
                    (1.0 - model.prob_plus) * model.w_minus *
                        std::log(model.w_minus)) /
                   lnb;
    }
    return 0.0;
}

Eigen::ArrayXd sample_weights(const WeightModel& model, std::uint64_t seed,
                              int level, std::uint64_t index) {
    const int k = model.branch_count();
    Eigen::ArrayXd w(k);
    switch (model.family) {
        case WeightFamily::Deterministic:
            w.setOnes();
            break;
        case WeightFamily::Lognormal: {
            const double s = model.sigma();
            const double shift = 0.5 * s * s;
            for (int i = 0; i < k; ++i) {
                const double z = rng::normal(seed, static_cast<std::uint64_t>(level),
                                             index, static_cast<std::uint64_t>(i));
                w[i] = std::exp(s * z - shift);
            }
            break;
        }
        case WeightFamily::TwoPoint:
            for (int i = 0; i < k; ++i) {
                const double u = rng::uniform(seed, static_cast<std::uint64_t>(level),
                                              index, static_cast<std::uint64_t>(i));
                w[i] = (u < model.prob_plus) ? model.w_plus : model.w_minus;
            }
            break;
    }
    return w;
}

double tail_bound(const WeightModel& model, double t, double p_exponent) {
    if (!(t > 0.0)) throw InvalidParams("tail threshold must be > 0");
    const int k = model.branch_count();
    switch (model.family) {
        case WeightFamily::Deterministic:
            return 0.0;  // max weight is 1 < t + 1
        case WeightFamily::TwoPoint: {
            double single;
            if (t + 1.0 >= model.w_plus) single = 0.0;
            else if (t + 1.0 >= model.w_minus) single = model.prob_plus;
            else single = 1.0;
            return 1.0 - std::pow(1.0 - single, k);
        }
        case WeightFamily::Lognormal: {
            if (!(p_exponent > 0.0))
                throw InvalidParams("tail exponent must be > 0");
            // Chernoff: P(W > s) <= exp(-z(s)^2/2), z = (ln s + sigma^2/2)/sigma,
            // valid once z >= 0. The returned constant is
            //   c = sup_{u>0} u^p * min(1, k * exp(-z(u+1)^2/2)),
            // located by a log-space grid scan plus a small safety factor.
            const double sig = model.sigma();
            const double p = p_exponent;
            double best = 0.0;
            for (int i = 0; i <= 4000; ++i) {
                const double lu = -20.0 + i * (2.0 * sig * sig * p + 60.0) / 4000.0;
                const double u = std::exp(lu);
                const double z = (std::log(u + 1.0) + 0.5 * sig * sig) / sig;
                double tail = (z > 0.0) ? k * std::exp(-0.5 * z * z) : 1.0;
                tail = std::min(1.0, tail);
                best = std::max(best, std::pow(u, p) * tail);
            }
            return 1.01 * best * std::pow(t, -p);
        }
    }
    return 0.0;
}

std::string model_to_json(const WeightModel& model) {
    nlohmann::json j;
    j["family"] = to_string(model.family);
    j["b"] = model.base;
    j["d"] = model.dim;
    switch (model.family) {
        case WeightFamily::Deterministic:
            j["params"] = nlohmann::json::object();
            break;
        case WeightFamily::Lognormal:
            j["params"] = {{"lambda", model.lambda}};
            break;
        case WeightFamily::TwoPoint:
            j["params"] = {{"w_plus", model.w_plus},
                           {"w_minus", model.w_minus},
                           {"p", model.prob_plus}};
            break;
    }
    return j.dump();
}

WeightModel model_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    const auto family = weight_family_from_string(j.at("family").get<std::string>());
    const int b = j.at("b").get<int>();
    const int d = j.at("d").get<int>();
    switch (family) {
        case WeightFamily::Deterministic:
            return make_deterministic(b, d);
        case WeightFamily::Lognormal:
            return make_lognormal(j.at("params").at("lambda").get<double>(), b, d);
        case WeightFamily::TwoPoint:
            return make_two_point(j.at("params").at("w_plus").get<double>(),
                                  j.at("params").at("w_minus").get<double>(),
                                  j.at("params").at("p").get<double>(), b, d);
    }
    throw InvalidParams("unreachable weight family");
}

}  // namespace mcas
