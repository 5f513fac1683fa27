#pragma once

#include <cstddef>
#include <span>

#include "ubsr/utility.hpp"

namespace ubsr {

/// One UBSR instance: threshold lambda, a bracket [t_lo, t_hi] on which the
/// expected shortfall crosses lambda, and the crossing margin eta > 0.
struct SrProblem {
  double lambda = 0.0;
  double t_lo = -1.0;
  double t_hi = 1.0;
  double eta = 1.0;

  /// Throws InvalidArgument unless t_lo < t_hi and eta > 0.
  void validate() const;
  double width() const { return t_hi - t_lo; }
};

struct TailSpec {
  enum class Kind { SubGaussian, SubExponential };
  Kind kind = Kind::SubGaussian;
  /// sigma for SubGaussian, K for SubExponential.
  double parameter = 1.0;
};

/// q_n(t) = (1/n) sum_i ell(z_i - t) - lambda.
double q_n(std::span<const double> z, const Utility& u, double lambda, double t);

struct Estimate {
  double value = 0.0;
  int iterations = 0;
  /// Bracket after any expansion.
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int expansions = 0;
  double q_at_estimate = 0.0;
};

/// Default bisection tolerance 1e-9 * max(1, |t_hi - t_lo|).
double default_estimator_tol(double t_lo, double t_hi);

/**
 * SAA estimate of SR_lambda: the smallest t with q_n(t) <= 0, located by
 * bisection to a bracket no wider than `tol`.
 *
 * If [prob.t_lo, prob.t_hi] does not satisfy q_n(t_lo) > 0 >= q_n(t_hi), the
 * bracket is doubled symmetrically about its centre (at most 64 times) and the
 * number of doublings is reported. Throws BracketFailure when q_n stays
 * single-signed.
 */
Estimate estimate_ubsr(std::span<const double> z, const Utility& u, const SrProblem& prob, double tol);

/// As above with bracket [min z - 1, max z + 1] and the default tolerance.
Estimate estimate_ubsr(std::span<const double> z, const Utility& u, double lambda);

/// 2 G sigma (t_U - t_L) / eta * sqrt(log(1/delta) / n); holds w.p. 1 - 2 delta.
double bound_subgaussian(double lipschitz, double sigma, const SrProblem& prob, std::size_t n, double delta);

/// 4 e G K (t_U - t_L) / eta * log(1/delta) / n; holds w.p. 1 - 2 delta.
double bound_subexponential(double lipschitz, double k, const SrProblem& prob, std::size_t n, double delta);

/// Dispatches on the tail kind.
double concentration_bound(const TailSpec& tail, double lipschitz, const SrProblem& prob, std::size_t n,
                           double delta);

}  // namespace ubsr
