#include "ubsr/lmo.hpp"

#include <cmath>
#include <string>

#include "ubsr/errors.hpp"

namespace ubsr {
namespace {

void check_model(const RegressionDataset& data, const Eigen::VectorXd& w) {
  if (w.size() != data.dim()) {
    throw InvalidArgument("model has " + std::to_string(w.size()) + " weights but data has " +
                          std::to_string(data.dim()) + " features");
  }
}

double loss_at(const RegressionDataset& data, const Utility& u, double gamma, const Eigen::VectorXd& w) {
  const Eigen::VectorXd r = data.targets - data.features * w;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) acc += u(r[i] * r[i] - gamma);
  return acc;
}

}  // namespace

void RegressionDataset::validate() const {
  if (features.rows() < 1 || features.cols() < 1) throw InvalidArgument("dataset needs m >= 1 rows and d >= 1 features");
  if (targets.size() != features.rows()) {
    throw InvalidArgument("dataset has " + std::to_string(features.rows()) + " feature rows but " +
                          std::to_string(targets.size()) + " targets");
  }
  if (!features.allFinite() || !targets.allFinite()) throw InvalidArgument("dataset contains non-finite entries");
}

RegressionDataset RegressionDataset::slice(Eigen::Index begin, Eigen::Index count) const {
  if (begin < 0 || count < 0 || begin + count > rows()) throw InvalidArgument("dataset slice out of range");
  return RegressionDataset{features.middleRows(begin, count), targets.segment(begin, count)};
}

double RegressionDataset::feature_bound() const { return features.rowwise().norm().maxCoeff(); }

double RegressionDataset::target_bound() const { return targets.cwiseAbs().maxCoeff(); }

Eigen::VectorXd LinearModel::squared_losses(const RegressionDataset& data) const {
  check_model(data, weights);
  return (data.features * weights - data.targets).array().square().matrix();
}

double surrogate_loss(const RegressionDataset& data, const Utility& u, double gamma, const LinearModel& model) {
  check_model(data, model.weights);
  return loss_at(data, u, gamma, model.weights);
}

Eigen::VectorXd surrogate_gradient(const RegressionDataset& data, const Utility& u, double gamma,
                                   const Eigen::VectorXd& weights) {
  check_model(data, weights);
  const Eigen::VectorXd r = data.targets - data.features * weights;
  Eigen::VectorXd coef(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) coef[i] = -2.0 * u.derivative(r[i] * r[i] - gamma) * r[i];
  return data.features.transpose() * coef;
}

Eigen::VectorXd project_to_ball(const Eigen::VectorXd& w, std::optional<double> radius) {
  if (!radius) return w;
  const double n = w.norm();
  if (n <= *radius) return w;
  return w * (*radius / n);
}

LmoResult solve_lmo(const RegressionDataset& data, const Utility& u, double gamma, std::optional<double> norm_bound,
                    const LmoSettings& settings) {
  data.validate();
  if (!std::isfinite(gamma)) throw InvalidArgument("gamma must be finite");
  if (norm_bound && !(*norm_bound > 0.0)) throw InvalidArgument("norm bound must be positive");
  if (settings.max_iter < 0 || !(settings.grad_tol >= 0.0)) throw InvalidArgument("invalid LMO settings");

  const Eigen::Index d = data.dim();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double f = loss_at(data, u, gamma, w);

  const Eigen::VectorXd least_squares =
      project_to_ball(data.features.completeOrthogonalDecomposition().solve(data.targets), norm_bound);
  if (least_squares.allFinite()) {
    const double f_ls = loss_at(data, u, gamma, least_squares);
    if (f_ls < f) {
      w = least_squares;
      f = f_ls;
    }
  }
  if (!std::isfinite(f)) throw NumericalFailure("surrogate loss is not finite at the initial point");

  LmoResult result;
  int iter = 0;
  double grad_norm = 0.0;
  for (;; ++iter) {
    const Eigen::VectorXd g = surrogate_gradient(data, u, gamma, w);
    grad_norm = (w - project_to_ball(w - g, norm_bound)).norm();
    if (!std::isfinite(grad_norm)) {
      throw NumericalFailure("gradient is not finite at iteration " + std::to_string(iter));
    }
    if (grad_norm <= settings.grad_tol * (1.0 + std::abs(f))) {
      result.converged = true;
      break;
    }
    if (iter == settings.max_iter) break;

    double step = 1.0;
    bool moved = false;
    while (step > 1e-30) {
      const Eigen::VectorXd candidate = project_to_ball(w - step * g, norm_bound);
      const double f_new = loss_at(data, u, gamma, candidate);
      if (std::isfinite(f_new) && f_new <= f + settings.armijo * g.dot(candidate - w)) {
        moved = (candidate - w).squaredNorm() > 0.0;
        w = candidate;
        f = f_new;
        break;
      }
      step *= 0.5;
    }
    // No representable step decreases f: w is optimal to machine precision.
    if (!moved) break;
  }

  result.model = LinearModel{w, norm_bound};
  result.objective = f;
  result.iterations = iter;
  result.grad_norm = grad_norm;
  return result;
}

}  // namespace ubsr
