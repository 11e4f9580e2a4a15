#include "mcascade/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mcascade/linfit.hpp"
#include "mcascade/rng.hpp"

namespace mcas {

DecayFit fit_power_law(const std::vector<std::pair<double, double>>& samples,
                       int log_base) {
    if (samples.size() < 3)
        throw TooFewPoints("power-law fit needs at least 3 samples");
    std::set<double> radii;
    for (const auto& [r, mag] : samples) {
        if (!(mag > 0.0))
            throw NonpositiveMagnitude("power-law fit needs positive magnitudes");
        radii.insert(r);
    }
    if (radii.size() != samples.size())
        throw InvalidParams("power-law fit needs distinct radii");
    const double lb = std::log(static_cast<double>(log_base));
    DecayFit fit;
    fit.log_r.resize(static_cast<Eigen::Index>(samples.size()));
    fit.log_magnitude.resize(static_cast<Eigen::Index>(samples.size()));
    // Sorting keeps the fit independent of input permutation bit-for-bit.
    std::vector<std::pair<double, double>> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        fit.log_r[static_cast<Eigen::Index>(i)] = std::log(sorted[i].first) / lb;
        fit.log_magnitude[static_cast<Eigen::Index>(i)] =
            std::log(sorted[i].second) / lb;
    }
    const OlsLine line = ols_fit(fit.log_r, fit.log_magnitude);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.stderr_slope = line.stderr_slope;
    fit.fourier_dim_estimate = -2.0 * line.slope;
    return fit;
}

std::vector<double> RadiiSpec::octave_radii(int octave) const {
    std::vector<double> out;
    out.reserve(per_octave);
    for (int i = 0; i < per_octave; ++i)
        out.push_back(std::pow(static_cast<double>(base),
                               octave + static_cast<double>(i) / per_octave));
    return out;
}

EnsembleDimResult ensemble_fourier_dim(const WeightModel& model,
                                       const std::optional<CurveSpec>& curve,
                                       int depth, const RadiiSpec& radii,
                                       const std::vector<std::uint64_t>& seeds,
                                       const DecayOptions& opts) {
    if (seeds.size() < 2)
        throw InvalidParams("ensemble needs at least 2 seeds");
    EnsembleDimResult res;
    std::vector<std::optional<DecayFit>> fits(seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(seeds.size()); ++s) {
        const CascadeRealization r = generate(model, depth, seeds[s]);
        if (!(r.total_mass() > 0.0)) continue;  // extinct, discard
        std::vector<std::pair<double, double>> octave_sups;
        for (int k = radii.k0; k <= radii.k1; ++k) {
            const DecaySampleSet prof =
                decay_profile(r, curve, radii.octave_radii(k), opts);
            double sup = 0.0;
            for (const DecayRow& row : prof.rows) sup = std::max(sup, row.sup);
            octave_sups.emplace_back(std::pow(static_cast<double>(radii.base), k),
                                     sup);
        }
        fits[s] = fit_power_law(octave_sups, radii.base);
    }
    double sum = 0.0, sum2 = 0.0;
    for (const auto& f : fits) {
        if (!f) {
            ++res.discarded;
            continue;
        }
        res.fits.push_back(*f);
        sum += f->fourier_dim_estimate;
        sum2 += f->fourier_dim_estimate * f->fourier_dim_estimate;
    }
    if (res.fits.empty()) throw AllExtinct("all realizations carried zero mass");
    const double n = static_cast<double>(res.fits.size());
    res.mean = sum / n;
    res.stddev = std::sqrt(std::max(0.0, sum2 / n - res.mean * res.mean));
    return res;
}

BinnedMeasure project_measure(const CascadeRealization& r, const CurveSpec& c,
                              const Vec2& theta, int out_levels) {
    if (r.model().dim != 1)
        throw DimensionMismatch("projection requires a d=1 cascade");
    if (out_levels < 1 || out_levels > 24)
        throw InvalidParams("out_levels must be in [1, 24]");
    const Eigen::Index cells = r.masses().size();
    const double h = 1.0 / static_cast<double>(cells);
    Eigen::ArrayXd proj(cells);
    for (Eigen::Index i = 0; i < cells; ++i)
        proj[i] = c.position((i + 0.5) * h).dot(theta);
    BinnedMeasure out;
    out.lo = proj.minCoeff();
    out.hi = proj.maxCoeff();
    const double span = std::max(out.hi - out.lo, 1e-300);
    // Nudge the upper edge so the max lands in the last bin.
    out.hi = out.lo + span * (1.0 + 1e-12);
    const Eigen::Index bins = Eigen::Index(1) << out_levels;
    out.mass = Eigen::ArrayXd::Zero(bins);
    for (Eigen::Index i = 0; i < cells; ++i) {
        auto bin = static_cast<Eigen::Index>((proj[i] - out.lo) /
                                             (out.hi - out.lo) * bins);
        bin = std::clamp<Eigen::Index>(bin, 0, bins - 1);
        out.mass[bin] += r.masses()[i];
    }
    return out;
}

double dim2_of_binned(const BinnedMeasure& m, int level_min, int level_max) {
    const auto bins = m.mass.size();
    int levels = 0;
    while ((Eigen::Index(1) << levels) < bins) ++levels;
    if (level_max > levels || level_min < 1 || level_min >= level_max)
        throw InvalidParams("bad level range for dim2 regression");
    // Coarsen from the finest grid upward, recording the L^2 sums.
    std::vector<double> l2(levels + 1, 0.0);
    Eigen::ArrayXd cur = m.mass;
    l2[levels] = cur.square().sum();
    for (int lev = levels - 1; lev >= 0; --lev) {
        Eigen::ArrayXd next(cur.size() / 2);
        for (Eigen::Index i = 0; i < next.size(); ++i)
            next[i] = cur[2 * i] + cur[2 * i + 1];
        cur.swap(next);
        l2[lev] = cur.square().sum();
    }
    Eigen::ArrayXd x(level_max - level_min + 1), y(level_max - level_min + 1);
    for (int lev = level_min; lev <= level_max; ++lev) {
        x[lev - level_min] = lev;
        y[lev - level_min] = -std::log2(l2[lev]);
    }
    return ols_fit(x, y).slope;
}

double concentration_bound(const ConcentrationInput& in) {
    if (in.N < 1 || static_cast<std::size_t>(in.N) != in.coefficients.size())
        throw InvalidParams("coefficient list must have N entries");
    if (!(in.p_exponent > 4.0)) throw InvalidParams("tail exponent must exceed 4");
    if (!(in.truncation > 1.0)) throw InvalidParams("truncation M must exceed 1");
    if (!(in.threshold > 0.0)) throw InvalidParams("threshold t must be positive");
    if (!(in.q <= in.p_exponent / 2.0 - 1.0))
        throw InvalidParams("q must satisfy q <= p/2 - 1");
    double max_a = 0.0, sum_a2 = 0.0;
    for (double a : in.coefficients) {
        if (a < 0.0) throw InvalidParams("coefficients must be nonnegative");
        max_a = std::max(max_a, a);
        sum_a2 += a * a;
    }
    if (!(max_a > 0.0)) throw InvalidParams("max coefficient must be positive");
    const double lambda = in.q * std::log(in.truncation) / (in.truncation * max_a);
    const double union_term =
        in.N * in.c_phi * std::pow(in.truncation, -in.p_exponent);
    const double exp_term = std::exp(-lambda * in.threshold +
                                     in.second_moment_K * lambda * lambda * sum_a2);
    return union_term + exp_term;
}

ConcentrationMcResult concentration_mc(const DiscreteZeroMeanDist& dist,
                                       const ConcentrationInput& in,
                                       std::int64_t trials,
                                       std::uint64_t seed) {
    if (trials < 10000) throw InvalidParams("need at least 10^4 trials");
    if (dist.values.size() != dist.probs.size() || dist.values.empty())
        throw InvalidParams("distribution atoms and probabilities mismatch");
    double mean = 0.0, ptot = 0.0;
    for (std::size_t i = 0; i < dist.values.size(); ++i) {
        mean += dist.values[i] * dist.probs[i];
        ptot += dist.probs[i];
    }
    if (std::abs(ptot - 1.0) > 1e-12 || std::abs(mean) > 1e-12)
        throw InvalidParams("distribution must be a zero-mean probability law");
    std::vector<double> cdf(dist.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        acc += dist.probs[i];
        cdf[i] = acc;
    }
    std::int64_t hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
    for (std::int64_t t = 0; t < trials; ++t) {
        double s = 0.0;
        for (int k = 0; k < in.N; ++k) {
            const double u =
                rng::uniform(seed, static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(k), 0);
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            const auto idx = static_cast<std::size_t>(it - cdf.begin());
            s += in.coefficients[static_cast<std::size_t>(k)] *
                 dist.values[std::min(idx, dist.values.size() - 1)];
        }
        if (s > in.threshold) ++hits;
    }
    ConcentrationMcResult res;
    res.empirical_tail = static_cast<double>(hits) / static_cast<double>(trials);
    res.bound = concentration_bound(in);
    return res;
}

}  // namespace mcas
