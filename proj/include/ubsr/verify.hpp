#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ubsr/distributions.hpp"
#include "ubsr/estimator.hpp"

namespace ubsr {

/// Outcome of one structural check. `details` carries every number the check
/// asserted on; a failing check names the violated inequality in `message`.
struct VerificationReport {
  std::string name;
  bool passed = false;
  /// Precondition did not hold; the check passed vacuously.
  bool skipped = false;
  std::map<std::string, double> details;
  std::string message;
};

/// Shortfall of U(0,10), U(10,20) and their even mixture under the hinge with
/// lambda = 2: the mixture's UBSR exceeds the average of the two.
VerificationReport check_nonconvexity();

/// alpha -> SR[alpha f1 + (1-alpha) f2] on `grid` evenly spaced alphas in
/// [0,1] must be monotone (either direction) up to `slack`.
VerificationReport check_pseudolinearity(const Distribution& f1, const Distribution& f2, const Utility& u,
                                         double lambda, int grid, double slack = 1e-8);

/**
 * Directional derivative of SR along F' - F at F.
 *
 * Predicted value -(L_{F'}(t*) - L_F(t*)) / L_F'(t*) at t* = SR[F] versus the
 * forward difference (SR[(1-eps)F + eps F'] - SR[F]) / eps for every eps in
 * `eps_grid`. Passes when the relative error at the smallest eps is <= `rel_tol`.
 * Fails, naming the cause, if L_F'(t*) = 0.
 */
VerificationReport check_gradient(const Distribution& f, const Distribution& f_prime, const Utility& u, double lambda,
                                  const std::vector<double>& eps_grid, double rel_tol = 1e-3);

/// If SR[f1] <= 0 and SR[f2] <= 0 then every mixture in `alphas` must have SR <= 1e-9.
VerificationReport check_randomization_invariance(const Distribution& f1, const Distribution& f2, const Utility& u,
                                                  double lambda, const std::vector<double>& alphas);

/// Bracket [t* - half_width, t* + half_width] around the exact UBSR t*, with
/// eta = min(L_F(t_lo) - lambda, lambda - L_F(t_hi)) from the exact L_F.
SrProblem instance_problem(const Distribution& d, const Utility& u, double lambda, double half_width);

/// Tail certificate for the coverage experiments: sub-Gaussian half-range for
/// Uniform, sigma for Gaussian; sub-exponential K = 2/rate
/// for Exponential. Throws InvalidArgument for the remaining kinds.
TailSpec default_tail(const Distribution& d);

struct ConcentrationSettings {
  std::vector<std::size_t> n_grid{100, 1000, 10000};
  std::vector<double> delta_grid{0.05, 0.1};
  std::size_t trials = 2000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct ConcentrationRow {
  std::size_t n = 0;
  double delta = 0.0;
  std::size_t trial = 0;
  double abs_error = 0.0;
  double bound = 0.0;
  bool covered = false;
};

struct ConcentrationResult {
  VerificationReport report;
  std::vector<ConcentrationRow> rows;
  double true_ubsr = 0.0;
};

/**
 * Empirical coverage of the concentration bound. Trial i draws with seed
 * settings.seed + i; sizes in n_grid reuse prefixes of that trial's stream.
 *
 * Passes when, at every (n, delta), coverage >= 1 - 2 delta -
 * 2 sqrt(delta (1 - delta) / trials), and, when n_grid has at least two sizes,
 * the least-squares slope of log median |error| against log n lies in [-0.6, -0.4].
 */
ConcentrationResult run_concentration_suite(const TailSpec& tail, const Distribution& dist, const Utility& u,
                                            const SrProblem& prob, const ConcentrationSettings& settings);

}  // namespace ubsr
