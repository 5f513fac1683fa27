#pragma once

#include <optional>

#include <Eigen/Dense>

#include "ubsr/utility.hpp"

namespace ubsr {

/// m x d feature matrix and m targets. Rows are samples.
struct RegressionDataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd targets;

  /// Throws InvalidArgument on empty data, shape mismatch, or non-finite entries.
  void validate() const;
  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }

  /// Rows [begin, begin + count).
  RegressionDataset slice(Eigen::Index begin, Eigen::Index count) const;

  /// max_i ||x_i||_2 and max_i |y_i| (the B1, B2 data bounds). Advisory only.
  double feature_bound() const;
  double target_bound() const;
};

/// Linear predictor x -> w.x, optionally constrained to ||w||_2 <= norm_bound.
struct LinearModel {
  Eigen::VectorXd weights;
  std::optional<double> norm_bound;

  double predict(const Eigen::Ref<const Eigen::VectorXd>& x) const { return weights.dot(x); }

  /// Squared losses (w.x_i - y_i)^2 on every row.
  Eigen::VectorXd squared_losses(const RegressionDataset& data) const;
};

struct LmoSettings {
  /// Stop once grad_norm <= grad_tol * (1 + |objective|).
  double grad_tol = 1e-8;
  int max_iter = 50'000;
  /// Armijo sufficient-decrease factor; steps halve from 1.
  double armijo = 1e-4;
};

struct LmoResult {
  LinearModel model;
  /// Surrogate loss (a sum over rows, not a mean) at model.
  double objective = 0.0;
  int iterations = 0;
  /// Norm of the projected-gradient map ||w - P(w - grad)||; equals ||grad||
  /// when the ball constraint is inactive.
  double grad_norm = 0.0;
  bool converged = false;
};

/// sum_i ell((y_i - w.x_i)^2 - gamma). Throws InvalidArgument on dimension mismatch.
double surrogate_loss(const RegressionDataset& data, const Utility& u, double gamma, const LinearModel& model);

/// Gradient of surrogate_loss in w: sum_i ell'(r_i^2 - gamma) * 2 r_i * (-x_i), r_i = y_i - w.x_i.
Eigen::VectorXd surrogate_gradient(const RegressionDataset& data, const Utility& u, double gamma,
                                   const Eigen::VectorXd& weights);

/// Euclidean projection onto the ball of radius `radius`.
Eigen::VectorXd project_to_ball(const Eigen::VectorXd& w, std::optional<double> radius);

/**
 * Linear minimization oracle: minimizes the convex surrogate loss over linear
 * models by projected gradient descent with backtracking.
 *
 * Candidates w = 0 and the (projected) least-squares fit are both evaluated and
 * the better one seeds the descent. Minimizers need not be unique when ell is
 * flat (Hinge with a large gamma); the first iterate meeting the tolerance is
 * returned.
 */
LmoResult solve_lmo(const RegressionDataset& data, const Utility& u, double gamma, std::optional<double> norm_bound,
                    const LmoSettings& settings = {});

}  // namespace ubsr
