#include "ubsr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ubsr/errors.hpp"
#include "ubsr/estimator.hpp"
#include "ubsr/rng.hpp"

namespace ubsr {
namespace {

double estimate_losses(const Eigen::VectorXd& z, const Utility& u, double lambda, double tol) {
  const std::span<const double> values(z.data(), static_cast<std::size_t>(z.size()));
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const SrProblem bracket{lambda, *mn - 1.0, *mx + 1.0, 1.0};
  return estimate_ubsr(values, u, bracket, tol).value;
}

// Rounds x toward +inf onto a grid with `bits` significant bits, so that every
// dyadic midpoint of [0, x] down to depth 52 - bits is exactly representable.
double round_up_to_bits(double x, int bits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  return std::ldexp(std::ceil(std::ldexp(mantissa, bits)), exponent - bits);
}

// Significant bits kept in beta_0 for a run of `iterations` rounds.
int beta0_bits(int iterations) { return std::max(1, std::min(32, 52 - iterations)); }

}  // namespace

void BisectionConfig::validate() const {
  if (iterations < 1) throw InvalidArgument("bisection needs T >= 1 iterations");
  if (!utility.strictly_increasing() || !(utility.slope_at_zero() > 0.0)) {
    throw InvalidArgument("bisection requires a strictly increasing utility with ell'(0) > 0; got " +
                          utility.to_string());
  }
  if (!(estimator_tol > 0.0)) throw InvalidArgument("estimator tolerance must be positive");
  if (norm_bound && !(*norm_bound > 0.0)) throw InvalidArgument("norm bound must be positive");
}

double ubsr_of_model(const LinearModel& model, const RegressionDataset& data, const Utility& u, double lambda,
                     double tol) {
  data.validate();
  return estimate_losses(model.squared_losses(data), u, lambda, tol);
}

std::pair<RegressionDataset, RegressionDataset> split_halves(const RegressionDataset& data,
                                                             std::optional<std::uint64_t> shuffle_seed) {
  data.validate();
  if (data.rows() < 2) throw InvalidArgument("training data needs at least two rows to split");
  RegressionDataset source = data;
  if (shuffle_seed) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(data.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    SplitMix64 rng(*shuffle_seed);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[rng.below(i + 1)]);
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      source.features.row(static_cast<Eigen::Index>(i)) = data.features.row(order[i]);
      source.targets[static_cast<Eigen::Index>(i)] = data.targets[order[i]];
    }
  }
  const Eigen::Index n = data.rows() / 2;
  return {source.slice(0, n), source.slice(n, data.rows() - n)};
}

TrainResult train(const RegressionDataset& train_half, const RegressionDataset& estimate_half,
                  const BisectionConfig& cfg) {
  cfg.validate();
  train_half.validate();
  estimate_half.validate();
  if (train_half.dim() != estimate_half.dim()) throw InvalidArgument("training halves differ in feature count");

  const Utility& u = cfg.utility;
  TrainResult out;
  BisectionTrace& trace = out.trace;

  const LinearModel h0{Eigen::VectorXd::Zero(train_half.dim()), cfg.norm_bound};
  try {
    trace.beta0_estimate = ubsr_of_model(h0, estimate_half, u, cfg.lambda, cfg.estimator_tol);
  } catch (const Error& e) {
    throw Error(std::string("initial UBSR estimate failed: ") + e.what());
  }
  // Quantizing beta_0 upward keeps every interval endpoint exact, so the
  // width after t rounds is exactly beta_0 * 2^-t. The precision does not
  // depend on T up to 20 rounds, so a shorter run is a prefix of a longer one.
  trace.beta0 = round_up_to_bits(trace.beta0_estimate + cfg.beta0_margin, beta0_bits(cfg.iterations));

  double alpha = 0.0;
  double beta = trace.beta0;
  LinearModel current = h0;
  double current_estimate = trace.beta0_estimate;
  LinearModel best = h0;
  double best_estimate = trace.beta0_estimate;

  for (int t = 1; t <= cfg.iterations; ++t) {
    TraceRecord rec;
    rec.t = t;
    rec.gamma_t = (alpha + beta) / 2.0;
    LmoResult g;
    try {
      g = solve_lmo(train_half, u, rec.gamma_t, cfg.norm_bound, cfg.lmo);
      rec.gamma_hat = ubsr_of_model(g.model, estimate_half, u, cfg.lambda, cfg.estimator_tol);
    } catch (const Error& e) {
      throw Error("bisection iteration " + std::to_string(t) + " failed: " + e.what());
    }
    rec.lmo_objective = g.objective;
    rec.lmo_iterations = g.iterations;
    rec.weights = g.model.weights;

    // Ties go to the upper branch: the test is strict.
    if (rec.gamma_hat < rec.gamma_t) {
      rec.branch = Branch::Lower;
      beta = rec.gamma_t;
    } else {
      rec.branch = Branch::Upper;
      alpha = rec.gamma_t;
    }
    rec.alpha = alpha;
    rec.beta = beta;

    if (rec.gamma_hat > trace.beta0) trace.beta0_exceeded = true;
    current = g.model;
    current_estimate = rec.gamma_hat;
    if (rec.gamma_hat < best_estimate) {
      best = g.model;
      best_estimate = rec.gamma_hat;
    }
    trace.records.push_back(std::move(rec));
  }

  out.model = cfg.best_so_far ? best : current;
  out.final_ubsr_estimate = cfg.best_so_far ? best_estimate : current_estimate;
  trace.final_model = out.model;
  return out;
}

TrainResult train(const RegressionDataset& data, const BisectionConfig& cfg) {
  auto [first, second] = split_halves(data, cfg.shuffle_seed);
  return train(first, second, cfg);
}

}  // namespace ubsr
