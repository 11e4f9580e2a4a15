// mcascade: cascade measures, their Fourier decay, and the verification
// suites, behind one reproducible command-line front end.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "mcascade/cascade.hpp"
#include "mcascade/curve.hpp"
#include "mcascade/errors.hpp"
#include "mcascade/estimators.hpp"
#include "mcascade/fourier.hpp"
#include "mcascade/io.hpp"
#include "mcascade/structure_function.hpp"
#include "mcascade/verify.hpp"
#include "mcascade/weight_model.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

struct RunConfig {
    std::string subcommand;
    // model spec
    std::string family = "lognormal";
    double lambda = 0.09;
    double w_plus = 1.5;
    double w_minus = 0.5;
    double prob_plus = 0.5;
    int b = 2;
    int d = 1;
    // curve spec: "flat", "circle", "parabola"
    std::string curve = "flat";
    double kappa = 2.0 * 3.14159265358979323846;
    // run parameters
    int depth = 10;
    std::uint64_t seed = 1;
    int n_seeds = 1;
    int k0 = 4;
    int k1 = 11;
    int radius_base = 2;
    int per_octave = 4;
    int n_theta = 256;
    std::vector<std::string> p_list = {"1", "2", "4", "inf"};
    double tolerance = 1e-10;
    int n_min = 8;
    int n_max = 16;
    std::string suite = "full";
    std::string input;   // mass file for fourier/spherical
    std::string outdir;  // output directory ("" = stdout only)
};

nlohmann::json config_to_json(const RunConfig& c) {
    return {
        {"subcommand", c.subcommand},
        {"family", c.family},
        {"lambda", c.lambda},
        {"w_plus", c.w_plus},
        {"w_minus", c.w_minus},
        {"prob_plus", c.prob_plus},
        {"b", c.b},
        {"d", c.d},
        {"curve", c.curve},
        {"kappa", c.kappa},
        {"depth", c.depth},
        {"seed", c.seed},
        {"n_seeds", c.n_seeds},
        {"k0", c.k0},
        {"k1", c.k1},
        {"radius_base", c.radius_base},
        {"per_octave", c.per_octave},
        {"n_theta", c.n_theta},
        {"p_list", c.p_list},
        {"tolerance", c.tolerance},
        {"n_min", c.n_min},
        {"n_max", c.n_max},
        {"suite", c.suite},
        {"input", c.input},
        {"outdir", c.outdir},
    };
}

void config_from_json(const nlohmann::json& j, RunConfig& c) {
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("family", c.family);
    get("lambda", c.lambda);
    get("w_plus", c.w_plus);
    get("w_minus", c.w_minus);
    get("prob_plus", c.prob_plus);
    get("b", c.b);
    get("d", c.d);
    get("curve", c.curve);
    get("kappa", c.kappa);
    get("depth", c.depth);
    get("seed", c.seed);
    get("n_seeds", c.n_seeds);
    get("k0", c.k0);
    get("k1", c.k1);
    get("radius_base", c.radius_base);
    get("per_octave", c.per_octave);
    get("n_theta", c.n_theta);
    get("p_list", c.p_list);
    get("tolerance", c.tolerance);
    get("n_min", c.n_min);
    get("n_max", c.n_max);
    get("suite", c.suite);
    get("input", c.input);
    get("outdir", c.outdir);
}

mcas::WeightModel build_model(const RunConfig& c) {
    const auto f = mcas::weight_family_from_string(c.family);
    switch (f) {
        case mcas::WeightFamily::Deterministic:
            return mcas::make_deterministic(c.b, c.d);
        case mcas::WeightFamily::Lognormal:
            return mcas::make_lognormal(c.lambda, c.b, c.d);
        case mcas::WeightFamily::TwoPoint:
            return mcas::make_two_point(c.w_plus, c.w_minus, c.prob_plus, c.b,
                                        c.d);
    }
    throw mcas::InvalidParams("unknown weight family");
}

std::optional<mcas::CurveSpec> build_curve(const RunConfig& c) {
    if (c.curve == "flat") return std::nullopt;
    if (c.curve == "circle") return mcas::make_circle_arc(c.kappa);
    if (c.curve == "parabola") return mcas::make_parabola_arc();
    throw mcas::InvalidParams("curve must be flat, circle, or parabola");
}

std::vector<double> parse_p_list(const std::vector<std::string>& ps) {
    std::vector<double> out;
    for (const auto& s : ps) {
        if (s == "inf" || s == "Inf" || s == "INF")
            out.push_back(mcas::kInf);
        else
            out.push_back(std::stod(s));
    }
    if (out.empty()) throw mcas::InvalidParams("empty p list");
    return out;
}

std::vector<double> radius_schedule(const RunConfig& c) {
    mcas::RadiiSpec spec{c.k0, c.k1, c.radius_base, c.per_octave};
    std::vector<double> radii;
    for (int k = c.k0; k <= c.k1; ++k)
        for (double r : spec.octave_radii(k)) radii.push_back(r);
    return radii;
}

// Collects named outputs, then writes them plus a manifest atomically.
class OutputSet {
  public:
    explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, const std::string& content) {
        files_.emplace_back(name, content);
    }

    void flush(const RunConfig& config) {
        if (dir_.empty()) return;
        std::filesystem::create_directories(dir_);
        nlohmann::json manifest;
        manifest["version"] = kVersion;
        manifest["config"] = config_to_json(config);
        nlohmann::json checks;
        for (const auto& [name, content] : files_) {
            mcas::atomic_write_text(dir_ + "/" + name, content);
            char buf[24];
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(mcas::fnv1a64(content)));
            checks[name] = buf;
        }
        manifest["checksums"] = checks;
        mcas::atomic_write_text(dir_ + "/manifest.json", manifest.dump(2) + "\n");
    }

  private:
    std::string dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string p_label(double p) {
    if (std::isinf(p)) return "inf";
    std::ostringstream os;
    os << p;
    return os.str();
}

int cmd_profile(const RunConfig& c) {
    const auto model = build_model(c);
    const auto profile = mcas::predicted_dims(model);
    const std::string json = mcas::profile_to_json(profile);
    std::printf("%s\n", json.c_str());
    OutputSet out(c.outdir);
    out.add("profile.json", json + "\n");
    out.add("profile.txt", mcas::profile_to_table(profile));
    out.flush(c);
    return 0;
}

int cmd_simulate(const RunConfig& c) {
    const auto model = build_model(c);
    const auto r = mcas::generate(model, c.depth, c.seed);
    const std::string dir = c.outdir.empty() ? "." : c.outdir;
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/masses.mcas";
    const std::uint64_t checksum = mcas::write_mass_file(r, path);
    std::printf("simulate: depth=%d seed=%llu cells=%lld mass=%.17g "
                "checksum=%016llx -> %s\n",
                c.depth, static_cast<unsigned long long>(c.seed),
                static_cast<long long>(r.masses().size()), r.total_mass(),
                static_cast<unsigned long long>(checksum), path.c_str());
    OutputSet out(c.outdir.empty() ? "." : c.outdir);
    out.flush(c);
    return 0;
}

mcas::CascadeRealization load_or_generate(const RunConfig& c) {
    if (!c.input.empty()) return mcas::read_mass_file(c.input);
    return mcas::generate(build_model(c), c.depth, c.seed);
}

int cmd_fourier(const RunConfig& c) {
    const auto r = load_or_generate(c);
    const auto curve = build_curve(c);
    if (curve) mcas::validate_curve(*curve);
    mcas::DecayOptions opts;
    opts.n_theta = c.n_theta;
    opts.p_list = parse_p_list(c.p_list);
    const auto radii = radius_schedule(c);
    const auto profile = mcas::decay_profile(r, curve, radii, opts);

    mcas::CsvTable table;
    table.header = {"radius", "n_dirs", "sup", "sigma_inf_uniform"};
    for (double p : opts.p_list) table.header.push_back("sigma_" + p_label(p));
    std::vector<std::pair<double, double>> sup_samples;
    for (const auto& row : profile.rows) {
        std::vector<double> cells = {row.radius,
                                     static_cast<double>(row.n_dirs), row.sup,
                                     row.sigma_inf_uniform};
        for (double p : opts.p_list) cells.push_back(row.sigma.at(p));
        table.rows.push_back(std::move(cells));
        sup_samples.emplace_back(row.radius, row.sup);
    }
    // Per-octave sup -> power-law fit, the sup-based dimension estimate.
    std::map<int, std::pair<double, double>> octave_sup;
    for (const auto& [radius, sup] : sup_samples) {
        const int k = static_cast<int>(
            std::floor(std::log(radius) / std::log(double(c.radius_base)) + 1e-9));
        auto& slot = octave_sup[k];
        if (slot.second == 0.0 || sup > slot.second) slot = {radius, sup};
    }
    std::vector<std::pair<double, double>> fit_samples(octave_sup.size());
    std::size_t i = 0;
    for (const auto& [k, rs] : octave_sup) fit_samples[i++] = rs;
    const auto fit = mcas::fit_power_law(fit_samples, c.radius_base);
    std::printf("fourier: %zu radii, sup slope=%.6g stderr=%.3g "
                "dim_F estimate=%.6g\n",
                radii.size(), fit.slope, fit.stderr_slope,
                fit.fourier_dim_estimate);

    OutputSet out(c.outdir);
    out.add("decay.csv", table.to_string());
    nlohmann::json fj = {{"slope", fit.slope},
                         {"intercept", fit.intercept},
                         {"stderr_slope", fit.stderr_slope},
                         {"fourier_dim_estimate", fit.fourier_dim_estimate}};
    out.add("fit.json", fj.dump(2) + "\n");
    out.flush(c);
    return 0;
}

int cmd_spherical(const RunConfig& c) {
    const auto r = load_or_generate(c);
    const auto curve = build_curve(c);
    if (curve) mcas::validate_curve(*curve);
    const auto ps = parse_p_list(c.p_list);
    const auto radii = radius_schedule(c);

    mcas::CsvTable table;
    table.header = {"radius"};
    for (double p : ps) table.header.push_back("sigma_" + p_label(p));
    for (double radius : radii) {
        std::vector<double> cells = {radius};
        for (double p : ps)
            cells.push_back(
                mcas::spherical_average(r, curve, radius, p, c.n_theta));
        table.rows.push_back(std::move(cells));
    }
    std::printf("spherical: %zu radii x %zu exponents\n", radii.size(),
                ps.size());
    OutputSet out(c.outdir);
    out.add("spherical.csv", table.to_string());
    out.flush(c);
    return 0;
}

int cmd_dim2(const RunConfig& c) {
    const auto model = build_model(c);
    mcas::CsvTable table;
    table.header = {"seed", "slope", "stderr_slope"};
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < c.n_seeds; ++i) {
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
        const auto fit = mcas::dim2_estimate(model, seed, c.n_min, c.n_max);
        table.rows.push_back(
            {static_cast<double>(seed), fit.slope, fit.stderr_slope});
        sum += fit.slope;
        sum2 += fit.slope * fit.slope;
    }
    const double mean = sum / c.n_seeds;
    const double var = std::max(0.0, sum2 / c.n_seeds - mean * mean);
    const double predicted = mcas::tau_tilde(model, 2.0);
    std::printf("dim2: mean slope=%.6g stddev=%.3g predicted tau~(2)=%.6g "
                "(%d seeds, n in [%d,%d])\n",
                mean, std::sqrt(var), predicted, c.n_seeds, c.n_min, c.n_max);
    OutputSet out(c.outdir);
    out.add("dim2.csv", table.to_string());
    out.flush(c);
    return 0;
}

int cmd_verify(const RunConfig& c) {
    const auto checks = mcas::run_verify_suite(c.suite);
    for (const auto& chk : checks)
        std::printf("[%s] %-44s predicted=%.10g observed=%.10g tol=%.3g\n",
                    chk.pass ? "PASS" : "FAIL", chk.name.c_str(),
                    chk.predicted, chk.observed, chk.tolerance);
    const bool ok = mcas::all_passed(checks);
    std::printf("verify: suite=%s checks=%zu result=%s\n", c.suite.c_str(),
                checks.size(), ok ? "pass" : "FAIL");
    OutputSet out(c.outdir);
    out.add("verify.json", mcas::checks_to_json(checks) + "\n");
    out.flush(c);
    return ok ? 0 : 1;
}

void apply_thread_override() {
    const char* env = std::getenv("THREADS");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || n < 1)
        throw mcas::InvalidParams("THREADS must be a positive integer");
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(n));
#endif
}

void add_common_options(CLI::App* sub, RunConfig& cfg, bool with_curve) {
    sub->add_option("--model", cfg.family,
                    "weight family: deterministic, lognormal, twopoint")
        ->default_val(cfg.family);
    sub->add_option("--lambda", cfg.lambda, "lognormal intermittency")
        ->default_val(cfg.lambda);
    sub->add_option("--wplus", cfg.w_plus, "twopoint high weight")
        ->default_val(cfg.w_plus);
    sub->add_option("--wminus", cfg.w_minus, "twopoint low weight")
        ->default_val(cfg.w_minus);
    sub->add_option("--pplus", cfg.prob_plus, "twopoint P(high)")
        ->default_val(cfg.prob_plus);
    sub->add_option("--b", cfg.b, "branching base")->default_val(cfg.b);
    sub->add_option("--d", cfg.d, "ambient dimension (1 or 2)")
        ->default_val(cfg.d);
    sub->add_option("--out", cfg.outdir, "output directory");
    if (with_curve) {
        sub->add_option("--curve", cfg.curve,
                        "carrier: flat, circle, parabola")
            ->default_val(cfg.curve);
        sub->add_option("--kappa", cfg.kappa, "circle curvature")
            ->default_val(cfg.kappa);
    }
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    // --config seeds the defaults; explicit flags still win.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) {
                std::fprintf(stderr, "error: cannot open config %s\n",
                             argv[i + 1]);
                return 2;
            }
            try {
                nlohmann::json j = nlohmann::json::parse(in);
                config_from_json(j, cfg);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error: bad config: %s\n", e.what());
                return 2;
            }
        }
    }

    CLI::App app{"Mandelbrot cascades on b-adic cells and curved carriers: "
                 "simulation, Fourier decay, and verification"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config supplying defaults (same schema as the "
                   "manifest's config block)");

    auto* profile = app.add_subcommand(
        "profile", "analytic multifractal profile of a weight model");
    add_common_options(profile, cfg, false);

    auto* simulate =
        app.add_subcommand("simulate", "generate one realization mass file");
    add_common_options(simulate, cfg, false);
    simulate->add_option("--depth", cfg.depth, "cascade depth n")
        ->default_val(cfg.depth);
    simulate->add_option("--seed", cfg.seed, "RNG seed")->default_val(cfg.seed);

    auto* fourier = app.add_subcommand(
        "fourier", "directional sup / L^p decay profile of the transform");
    add_common_options(fourier, cfg, true);
    fourier->add_option("--in", cfg.input, "input mass file (.mcas)");
    fourier->add_option("--depth", cfg.depth)->default_val(cfg.depth);
    fourier->add_option("--seed", cfg.seed)->default_val(cfg.seed);
    fourier->add_option("--k0", cfg.k0, "first radius octave")
        ->default_val(cfg.k0);
    fourier->add_option("--k1", cfg.k1, "last radius octave")
        ->default_val(cfg.k1);
    fourier->add_option("--radius-base", cfg.radius_base)
        ->default_val(cfg.radius_base);
    fourier->add_option("--per-octave", cfg.per_octave)
        ->default_val(cfg.per_octave);
    fourier->add_option("--n-theta", cfg.n_theta)->default_val(cfg.n_theta);
    fourier->add_option("--p", cfg.p_list, "L^p exponents (number or inf)");

    auto* spherical = app.add_subcommand(
        "spherical", "spherical L^p averages sigma_p(r) over a radius grid");
    add_common_options(spherical, cfg, true);
    spherical->add_option("--in", cfg.input, "input mass file (.mcas)");
    spherical->add_option("--depth", cfg.depth)->default_val(cfg.depth);
    spherical->add_option("--seed", cfg.seed)->default_val(cfg.seed);
    spherical->add_option("--k0", cfg.k0)->default_val(cfg.k0);
    spherical->add_option("--k1", cfg.k1)->default_val(cfg.k1);
    spherical->add_option("--radius-base", cfg.radius_base)
        ->default_val(cfg.radius_base);
    spherical->add_option("--per-octave", cfg.per_octave)
        ->default_val(cfg.per_octave);
    spherical->add_option("--n-theta", cfg.n_theta)->default_val(cfg.n_theta);
    spherical->add_option("--p", cfg.p_list, "L^p exponents (number or inf)");

    auto* dim2 = app.add_subcommand(
        "dim2", "correlation-dimension regression across depths");
    add_common_options(dim2, cfg, false);
    dim2->add_option("--seed", cfg.seed, "first seed")->default_val(cfg.seed);
    dim2->add_option("--seeds", cfg.n_seeds, "number of seeds")
        ->default_val(cfg.n_seeds);
    dim2->add_option("--n-min", cfg.n_min)->default_val(cfg.n_min);
    dim2->add_option("--n-max", cfg.n_max)->default_val(cfg.n_max);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", cfg.suite,
                       "one of: trivial, analytic, cascade, flat, curve, full")
        ->default_val(cfg.suite);
    verify->add_option("--out", cfg.outdir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        apply_thread_override();
        cfg.subcommand = app.get_subcommands().front()->get_name();
        if (profile->parsed()) return cmd_profile(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (fourier->parsed()) return cmd_fourier(cfg);
        if (spherical->parsed()) return cmd_spherical(cfg);
        if (dim2->parsed()) return cmd_dim2(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
