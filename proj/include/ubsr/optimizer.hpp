#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ubsr/lmo.hpp"
#include "ubsr/utility.hpp"

namespace ubsr {

struct BisectionConfig {
  int iterations = 20;
  double lambda = 0.0;
  Utility utility = Utility::blend(0.5, 1.0);
  std::optional<double> norm_bound;
  double estimator_tol = 1e-10;
  LmoSettings lmo;
  /// Added to the initial upper level beta_0. The plain algorithm uses 0.
  double beta0_margin = 0.0;
  /// Return the iterate with the smallest estimated UBSR instead of h_T.
  bool best_so_far = false;
  /// Shuffle rows with this seed before splitting into halves.
  std::optional<std::uint64_t> shuffle_seed;

  /// Throws InvalidArgument unless iterations >= 1 and the utility is strictly increasing.
  void validate() const;
};

enum class Branch { Lower, Upper };

struct TraceRecord {
  int t = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_t = 0.0;
  /// Estimated UBSR of g_t on the estimation half.
  double gamma_hat = 0.0;
  Branch branch = Branch::Lower;
  double lmo_objective = 0.0;
  int lmo_iterations = 0;
  Eigen::VectorXd weights;
};

struct BisectionTrace {
  double beta0 = 0.0;
  /// Estimated UBSR of h_0 = 0 before the margin is added.
  double beta0_estimate = 0.0;
  std::vector<TraceRecord> records;
  LinearModel final_model;
  /// True if some estimated UBSR exceeded beta_0 (beta_0 undershot the truth).
  bool beta0_exceeded = false;
};

struct TrainResult {
  /// Always a deterministic linear model.
  LinearModel model;
  BisectionTrace trace;
  /// Estimated UBSR of `model` on the estimation half.
  double final_ubsr_estimate = 0.0;
};

/**
 * Bisection over candidate UBSR levels.
 *
 * Starting from h_0 = 0, alpha_0 = 0 and beta_0 = sr_n(z^0) (+ margin), each
 * round sets gamma_t to the interval midpoint, fits g_t with the linear
 * minimization oracle on `train_half`, estimates its UBSR gamma_hat on
 * `estimate_half`, and keeps [alpha, gamma_t] if gamma_hat < gamma_t, else
 * [gamma_t, beta]. h_t = g_t on both branches; h_T is returned.
 */
TrainResult train(const RegressionDataset& train_half, const RegressionDataset& estimate_half,
                  const BisectionConfig& cfg);

/// Splits `data` by index (first floor(m/2) rows train, the rest estimate),
/// after an optional seeded shuffle, and runs the two-half overload.
TrainResult train(const RegressionDataset& data, const BisectionConfig& cfg);

/// The two halves `train(data, cfg)` would use.
std::pair<RegressionDataset, RegressionDataset> split_halves(const RegressionDataset& data,
                                                             std::optional<std::uint64_t> shuffle_seed);

/// SAA UBSR of the squared loss (w.x_i - y_i)^2 over `data`.
double ubsr_of_model(const LinearModel& model, const RegressionDataset& data, const Utility& u, double lambda,
                     double tol);

}  // namespace ubsr
