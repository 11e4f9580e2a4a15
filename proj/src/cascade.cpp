#include "mcascade/cascade.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "mcascade/linfit.hpp"
#include "mcascade/structure_function.hpp"

namespace mcas {

namespace {

std::uint64_t cell_count(int branch, int depth) {
    std::uint64_t c = 1;
    for (int i = 0; i < depth; ++i) {
        c *= static_cast<std::uint64_t>(branch);
        if (c > kMaxCells)
            throw DepthTooLarge("cell table exceeds the 2^28 memory guard");
    }
    return c;
}

double logb(int base, double x) {
    return std::log(x) / std::log(static_cast<double>(base));
}

// FNV-1a over raw bytes.
std::uint64_t fnv1a(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

double CascadeRealization::mass_at(int level, std::uint64_t index) const {
    if (level < 0 || level > depth_) throw BadLevel("level out of range");
    const int branch = model_.branch_count();
    std::uint64_t cells = 1;
    for (int k = 0; k < level; ++k) cells *= static_cast<std::uint64_t>(branch);
    if (index >= cells) throw BadLevel("cell index out of range at level");
    if (level == depth_) return masses_[static_cast<Eigen::Index>(index)];
    // Ancestor prefixes of the address, root first.
    double mass = 1.0;
    std::uint64_t pow = 1;
    for (int k = 0; k < level; ++k) pow *= static_cast<std::uint64_t>(branch);
    for (int k = 1; k <= level; ++k) {
        pow /= static_cast<std::uint64_t>(branch);
        const std::uint64_t prefix = index / pow;
        const std::uint64_t parent = prefix / static_cast<std::uint64_t>(branch);
        const int digit = static_cast<int>(prefix % static_cast<std::uint64_t>(branch));
        const Eigen::ArrayXd w = sample_weights(model_, seed_, k - 1, parent);
        mass *= w[digit] / branch;
    }
    return mass;
}

CascadeRealization generate(const WeightModel& model, int depth,
                            std::uint64_t seed) {
    if (depth < 0) throw InvalidParams("depth must be >= 0");
    const int branch = model.branch_count();
    cell_count(branch, depth);
    Eigen::ArrayXd masses(1);
    masses[0] = 1.0;
    for (int lev = 0; lev < depth; ++lev) {
        Eigen::ArrayXd next(masses.size() * branch);
        for (Eigen::Index parent = 0; parent < masses.size(); ++parent) {
            const Eigen::ArrayXd w = sample_weights(
                model, seed, lev, static_cast<std::uint64_t>(parent));
            for (int i = 0; i < branch; ++i)
                next[parent * branch + i] = masses[parent] * w[i] / branch;
        }
        masses.swap(next);
    }
    return CascadeRealization(model, depth, seed, std::move(masses));
}

CascadeRealization refine(const CascadeRealization& r, int new_depth) {
    if (new_depth <= r.depth())
        throw InvalidParams("refine requires a strictly larger depth");
    const int branch = r.model().branch_count();
    cell_count(branch, new_depth);
    Eigen::ArrayXd masses = r.masses();
    for (int lev = r.depth(); lev < new_depth; ++lev) {
        Eigen::ArrayXd next(masses.size() * branch);
        for (Eigen::Index parent = 0; parent < masses.size(); ++parent) {
            const Eigen::ArrayXd w = sample_weights(
                r.model(), r.seed(), lev, static_cast<std::uint64_t>(parent));
            for (int i = 0; i < branch; ++i)
                next[parent * branch + i] = masses[parent] * w[i] / branch;
        }
        masses.swap(next);
    }
    return CascadeRealization(r.model(), new_depth, r.seed(), std::move(masses));
}

double moment_sum_S(const CascadeRealization& r, double p, double q, int j) {
    const int n = r.depth();
    if (j < 0 || j > n) throw BadLevel("level j out of [0, depth]");
    if (!(p >= 1.0) || !(q >= 1.0))
        throw InvalidParams("S(p,q,j,n) requires p,q >= 1");
    if (std::isinf(p) && std::isinf(q))
        return r.masses().maxCoeff();  // S(inf,inf,j,n) := S(inf,1,n,n)
    const int branch = r.model().branch_count();
    std::uint64_t per_block = 1;
    for (int k = 0; k < n - j; ++k) per_block *= static_cast<std::uint64_t>(branch);
    const auto& m = r.masses();
    const std::uint64_t blocks = static_cast<std::uint64_t>(m.size()) / per_block;
    double outer = 0.0;  // sum or sup over I
    for (std::uint64_t blk = 0; blk < blocks; ++blk) {
        const auto seg = m.segment(static_cast<Eigen::Index>(blk * per_block),
                                   static_cast<Eigen::Index>(per_block));
        double inner;
        if (std::isinf(q)) inner = seg.maxCoeff();
        else if (q == 1.0) inner = seg.sum();
        else inner = std::pow(seg.pow(q).sum(), 1.0 / q);
        if (std::isinf(p)) outer = std::max(outer, inner);
        else if (p == 1.0) outer += inner;
        else outer += std::pow(inner, p);
    }
    if (std::isinf(p) || p == 1.0) return outer;
    return std::pow(outer, 1.0 / p);
}

double y_statistic(const CascadeRealization& r, double q, int j,
                   std::uint64_t cell_index) {
    const int n = r.depth();
    if (j < 0 || j > n) throw BadLevel("level j out of [0, depth]");
    if (!(q >= 1.0)) throw InvalidParams("Y statistic requires q >= 1");
    const int branch = r.model().branch_count();
    std::uint64_t cells_j = 1;
    for (int k = 0; k < j; ++k) cells_j *= static_cast<std::uint64_t>(branch);
    if (cell_index >= cells_j) throw BadLevel("cell index out of range at level j");
    std::uint64_t per_block = 1;
    for (int k = 0; k < n - j; ++k) per_block *= static_cast<std::uint64_t>(branch);
    const double mass_j = r.mass_at(j, cell_index);
    if (mass_j == 0.0) return 0.0;
    // b^{nd} * m_{j,n}(J) is the weight product strictly below level j,
    // recovered from the stored masses as mass_n(J) * b^{nd} / (mass_j * b^{jd}).
    const double scale = std::pow(static_cast<double>(branch), n - j) / mass_j;
    const auto seg =
        r.masses().segment(static_cast<Eigen::Index>(cell_index * per_block),
                           static_cast<Eigen::Index>(per_block));
    const double sum_q = (seg * scale).pow(q).sum();
    const double norm = branch * marginal_moment(r.model(), q);
    return sum_q * std::pow(norm, -(n - j));
}

double epsilon_statistic(const CascadeRealization& r, double p, double q) {
    const int n = r.depth();
    if (n < 1) throw BadLevel("epsilon requires depth >= 1");
    const double ttp = tau_tilde_over_p(r.model(), p);
    const double ttq = tau_tilde_over_p(r.model(), q);
    double sup = -kInf;
    for (int j = 0; j <= n; ++j) {
        const double s = moment_sum_S(r, p, q, j);
        const double val = logb(r.model().base, s) + j * ttp + (n - j) * ttq;
        sup = std::max(sup, val);
    }
    return sup / n;
}

Dim2Fit dim2_estimate(const WeightModel& model, std::uint64_t seed, int n_min,
                      int n_max) {
    if (n_min < 2 || n_min >= n_max)
        throw InvalidParams("dim2 regression requires 2 <= n_min < n_max");
    Dim2Fit fit;
    CascadeRealization r = generate(model, n_min, seed);
    for (int n = n_min; n <= n_max; ++n) {
        if (n > n_min) r = refine(r, n);
        const double l2 = r.masses().square().sum();
        fit.depths.push_back(static_cast<double>(n));
        fit.neg_log_l2.push_back(-logb(model.base, l2));
    }
    const Eigen::Map<const Eigen::ArrayXd> x(fit.depths.data(),
                                             static_cast<Eigen::Index>(fit.depths.size()));
    const Eigen::Map<const Eigen::ArrayXd> y(fit.neg_log_l2.data(),
                                             static_cast<Eigen::Index>(fit.neg_log_l2.size()));
    const OlsLine line = ols_fit(x, y);
    fit.slope = line.slope;
    fit.stderr_slope = line.stderr_slope;
    return fit;
}

double min_pointwise_dim(const CascadeRealization& r) {
    const int n = r.depth();
    if (n < 1) throw BadLevel("min pointwise dim requires depth >= 1");
    double best = kInf;
    bool any = false;
    for (Eigen::Index i = 0; i < r.masses().size(); ++i) {
        const double m = r.masses()[i];
        if (m > 0.0) {
            any = true;
            best = std::min(best, logb(r.model().base, m) / (-n));
        }
    }
    if (!any) throw AllMassZero("realization carries no mass");
    return best;
}

std::uint64_t mass_checksum(const CascadeRealization& r) {
    return fnv1a(r.masses().data(),
                 static_cast<std::size_t>(r.masses().size()) * sizeof(double));
}

std::uint64_t write_mass_file(const CascadeRealization& r,
                              const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open " + tmp);
        const char magic[4] = {'M', 'C', 'A', 'S'};
        const std::uint32_t version = 1;
        const std::uint32_t b = static_cast<std::uint32_t>(r.model().base);
        const std::uint32_t d = static_cast<std::uint32_t>(r.model().dim);
        const std::uint32_t n = static_cast<std::uint32_t>(r.depth());
        const std::uint64_t seed = r.seed();
        out.write(magic, 4);
        out.write(reinterpret_cast<const char*>(&version), 4);
        out.write(reinterpret_cast<const char*>(&b), 4);
        out.write(reinterpret_cast<const char*>(&d), 4);
        out.write(reinterpret_cast<const char*>(&n), 4);
        out.write(reinterpret_cast<const char*>(&seed), 8);
        out.write(reinterpret_cast<const char*>(r.masses().data()),
                  static_cast<std::streamsize>(r.masses().size() * sizeof(double)));
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
    return mass_checksum(r);
}

CascadeRealization read_mass_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[4];
    std::uint32_t version = 0, b = 0, d = 0, n = 0;
    std::uint64_t seed = 0;
    in.read(magic, 4);
    if (std::memcmp(magic, "MCAS", 4) != 0)
        throw IoError("bad magic in " + path);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&b), 4);
    in.read(reinterpret_cast<char*>(&d), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&seed), 8);
    if (version != 1) throw IoError("unsupported mass-file version");
    // The mass file does not carry the weight-model parameters; the JSON
    // sidecar does. Reading back yields a deterministic placeholder model
    // with the right geometry.
    WeightModel model = make_deterministic(static_cast<int>(b), static_cast<int>(d));
    std::uint64_t cells = 1;
    for (std::uint32_t i = 0; i < n * d; ++i) cells *= b;
    Eigen::ArrayXd masses(static_cast<Eigen::Index>(cells));
    in.read(reinterpret_cast<char*>(masses.data()),
            static_cast<std::streamsize>(cells * sizeof(double)));
    if (!in) throw IoError("truncated mass file " + path);
    return CascadeRealization(model, static_cast<int>(n), seed, std::move(masses));
}

}  // namespace mcas
