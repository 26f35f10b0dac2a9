#pragma once

#include "pulsefield/common.hpp"
#include "pulsefield/params.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace pulsefield {

/**
 * One sampled triple (C_n, B_n, X_n), n = 0..size()-1 (zero-based), with
 * B strictly increasing and the derived dilations B_n^{1/eta}, support
 * radii B_n^{-1/eta} and amplitudes C_n^{-alpha}.
 *
 * Level j holds the pulses with 2^{j-1} < B^{1/eta} <= 2^j (level 0:
 * B^{1/eta} <= 1); since B is sorted every level is a contiguous index
 * range. Immutable after construction.
 */
class Realization {
 public:
  /// Builds from explicit arrays (validated). Used by sampling and by tests.
  static Realization from_arrays(const ModelParams& params, Eigen::VectorXd c, Eigen::VectorXd b,
                                 Eigen::VectorXd x);

  [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
  [[nodiscard]] Index size() const noexcept { return b_.size(); }
  [[nodiscard]] bool empty() const noexcept { return b_.size() == 0; }

  [[nodiscard]] const Eigen::VectorXd& c() const noexcept { return c_; }
  [[nodiscard]] const Eigen::VectorXd& b() const noexcept { return b_; }
  [[nodiscard]] const Eigen::VectorXd& x() const noexcept { return x_; }
  /// B_n^{1/eta}.
  [[nodiscard]] const Eigen::VectorXd& dilation() const noexcept { return dilation_; }
  /// B_n^{-1/eta}, the support half-width.
  [[nodiscard]] const Eigen::VectorXd& radius() const noexcept { return radius_; }
  /// C_n^{-alpha}.
  [[nodiscard]] const Eigen::VectorXd& amplitude() const noexcept { return amplitude_; }

  [[nodiscard]] int j_max() const noexcept { return params_.j_max; }
  /// Index range A_j; throws WindowError when j is outside 0..j_max.
  [[nodiscard]] IndexRange level(int j) const;
  [[nodiscard]] int level_of(Index n) const;
  /// Indices of A_j sorted by X (ties by index).
  [[nodiscard]] std::span<const Index> level_by_x(int j) const;
  /// X values of level_by_x(j), ascending.
  [[nodiscard]] std::span<const double> level_sorted_x(int j) const;
  /// Strict upper bound on radii at level j (+inf at level 0).
  [[nodiscard]] static double max_radius(int j) noexcept;

  /// Indices n in A_j with |X_n - center| <= reach, ascending.
  [[nodiscard]] std::vector<Index> level_candidates(int j, double center, double reach) const;

 private:
  Realization() = default;
  void build_index();

  ModelParams params_;
  Eigen::VectorXd c_, b_, x_;
  Eigen::VectorXd dilation_, radius_, amplitude_;
  std::vector<IndexRange> levels_;
  std::vector<int> level_of_;
  std::vector<std::vector<Index>> by_x_;
  std::vector<std::vector<double>> sorted_x_;
};

struct LevelStats {
  int j = 0;
  Index n_j = 0;
  /// Expected N_j: 2^{eta j} - 2^{eta (j-1)} for j >= 1, and 1 for j = 0.
  double poisson_parameter = 0.0;
  double eps_j = kInfinity;
  double eps_tilde_j = kInfinity;
};

/// log2(j) / (eta j) for j >= 2; +inf for j in {0, 1}.
[[nodiscard]] double eps_level(int j, double eta) noexcept;
/// log2(16 j log2 j) / (eta j) for j >= 2; +inf for j in {0, 1}.
[[nodiscard]] double eps_tilde_level(int j, double eta) noexcept;
/// Lebesgue measure of the dilation window of level j.
[[nodiscard]] double level_poisson_parameter(int j, double eta) noexcept;

/**
 * Samples a realization. Level by level, K_j ~ Poisson(level_poisson_parameter)
 * points are drawn uniformly in the level's B-window and sorted, and paired
 * with K_j uniform positions X. C is the cumulative sum of unit exponentials
 * indexed by global n. Every level uses its own counter stream, so raising
 * j_max appends levels without changing the lower ones.
 */
[[nodiscard]] Realization sample_realization(const ModelParams& params);

[[nodiscard]] IndexRange level_slice(const Realization& real, int j);
[[nodiscard]] LevelStats level_stats(const Realization& real, int j);

}  // namespace pulsefield
