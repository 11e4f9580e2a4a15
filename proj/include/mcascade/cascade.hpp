#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mcascade/weight_model.hpp"

namespace mcas {

// b-adic address: index is the base-b^d digit string of the ancestor
// branch choices, most significant digit first, so the level-n cells in
// index order are in spatial (lexicographic per-coordinate) order and the
// children of a cell occupy a contiguous index range.
struct BadicAddress {
    int level = 0;
    std::uint64_t index = 0;
};

// One seeded finite-depth cascade realization: the table of cell masses
// nu_n(Q_i) = b^{-dn} * prod of weights along the ancestor path.
class CascadeRealization {
  public:
    CascadeRealization(WeightModel model, int depth, std::uint64_t seed,
                       Eigen::ArrayXd masses)
        : model_(std::move(model)), depth_(depth), seed_(seed),
          masses_(std::move(masses)) {}

    const WeightModel& model() const { return model_; }
    int depth() const { return depth_; }
    std::uint64_t seed() const { return seed_; }
    const Eigen::ArrayXd& masses() const { return masses_; }
    double total_mass() const { return masses_.sum(); }

    // Mass of the level-j ancestor cell, recomputed from the counter
    // streams (bit-identical to the stored table at j = depth).
    double mass_at(int level, std::uint64_t index) const;

  private:
    WeightModel model_;
    int depth_;
    std::uint64_t seed_;
    Eigen::ArrayXd masses_;
};

inline constexpr std::uint64_t kMaxCells = 1ULL << 28;

CascadeRealization generate(const WeightModel& model, int depth,
                            std::uint64_t seed);

// Same seed, deeper table; levels <= r.depth() reuse the same weights.
CascadeRealization refine(const CascadeRealization& r, int new_depth);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Nested norm S(p,q,j,n) over the level-j / level-n cell hierarchy,
// with the conventions S(inf,q,.) = sup over I, S(p,inf,.) = sup over J
// inside, S(inf,inf,j,n) = S(inf,1,n,n).
double moment_sum_S(const CascadeRealization& r, double p, double q, int j);

// Y_{j,n}(q,I): total mass of I under the normalized cascade driven by
// W_q below level j; identically 1 for the deterministic model.
double y_statistic(const CascadeRealization& r, double q, int j,
                   std::uint64_t cell_index);

// (1/n) sup_j [ log_b S(p,q,j,n) + j tt(p)/p + (n-j) tt(q)/q ].
double epsilon_statistic(const CascadeRealization& r, double p, double q);

struct Dim2Fit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    std::vector<double> depths;
    std::vector<double> neg_log_l2; // -log_b sum of squared masses
};

// Slope of -log_b sum_I nu_n(I)^2 against n over [n_min, n_max] for one
// realization refined across depths.
Dim2Fit dim2_estimate(const WeightModel& model, std::uint64_t seed, int n_min,
                      int n_max);

// min over positive-mass cells of log_b nu_n(I) / (-n).
double min_pointwise_dim(const CascadeRealization& r);

// Binary mass-file format: magic "MCAS", version, b, d, n, seed, then
// little-endian doubles in address order. Returns the payload checksum.
std::uint64_t write_mass_file(const CascadeRealization& r,
                              const std::string& path);
CascadeRealization read_mass_file(const std::string& path);

std::uint64_t mass_checksum(const CascadeRealization& r);

}  // namespace mcas
