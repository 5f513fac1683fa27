#include "ubsr/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ubsr/errors.hpp"

namespace ubsr {
namespace {

constexpr int kMaxExpansions = 64;

template <class Ell>
double mean_shortfall(std::span<const double> z, Ell&& ell, double t) {
  double acc = 0.0;
  for (const double v : z) acc += ell(v - t);
  return acc / static_cast<double>(z.size());
}

void check_delta(double delta, std::size_t n) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in (0, 1]");
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
}

}  // namespace

void SrProblem::validate() const {
  if (!std::isfinite(lambda) || !std::isfinite(t_lo) || !std::isfinite(t_hi)) {
    throw InvalidArgument("SrProblem fields must be finite");
  }
  if (!(t_lo < t_hi)) throw InvalidArgument("SrProblem requires t_lo < t_hi");
  if (!(eta > 0.0)) throw InvalidArgument("SrProblem requires eta > 0");
}

double q_n(std::span<const double> z, const Utility& u, double lambda, double t) {
  if (z.empty()) throw InvalidArgument("q_n needs at least one sample");
  // Dispatch once so the inner loop is branch-free on the utility kind.
  switch (u.kind()) {
    case Utility::Kind::Linear:
      return mean_shortfall(z, [](double x) { return x; }, t) - lambda;
    case Utility::Kind::Hinge:
      return mean_shortfall(z, [](double x) { return x > 0.0 ? x : 0.0; }, t) - lambda;
    case Utility::Kind::SmoothHingeBlend:
      return mean_shortfall(z, [&u](double x) { return u.eval(x); }, t) - lambda;
  }
  return 0.0;
}

double default_estimator_tol(double t_lo, double t_hi) { return 1e-9 * std::max(1.0, std::abs(t_hi - t_lo)); }

Estimate estimate_ubsr(std::span<const double> z, const Utility& u, const SrProblem& prob, double tol) {
  if (z.empty()) throw InvalidArgument("estimate_ubsr needs at least one sample");
  if (!(tol > 0.0)) throw InvalidArgument("estimator tolerance must be positive");
  if (!std::isfinite(prob.t_lo) || !std::isfinite(prob.t_hi) || !(prob.t_lo < prob.t_hi)) {
    throw InvalidArgument("estimator bracket requires finite t_lo < t_hi");
  }
  auto q = [&](double t) { return q_n(z, u, prob.lambda, t); };

  Estimate est;
  double lo = prob.t_lo;
  double hi = prob.t_hi;
  // Need q(lo) > 0 >= q(hi).
  while (!(q(lo) > 0.0 && q(hi) <= 0.0)) {
    if (est.expansions == kMaxExpansions) {
      throw BracketFailure("q_n does not change sign on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                           "] after " + std::to_string(kMaxExpansions) + " doublings");
    }
    const double centre = 0.5 * (lo + hi);
    const double half = hi - lo;
    lo = centre - half;
    hi = centre + half;
    ++est.expansions;
  }
  est.bracket_lo = lo;
  est.bracket_hi = hi;

  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (q(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++est.iterations;
  }
  est.value = hi;
  est.q_at_estimate = q(hi);
  return est;
}

Estimate estimate_ubsr(std::span<const double> z, const Utility& u, double lambda) {
  if (z.empty()) throw InvalidArgument("estimate_ubsr needs at least one sample");
  const auto [mn, mx] = std::minmax_element(z.begin(), z.end());
  SrProblem prob{lambda, *mn - 1.0, *mx + 1.0, 1.0};
  return estimate_ubsr(z, u, prob, default_estimator_tol(prob.t_lo, prob.t_hi));
}

double bound_subgaussian(double lipschitz, double sigma, const SrProblem& prob, std::size_t n, double delta) {
  prob.validate();
  check_delta(delta, n);
  return 2.0 * lipschitz * sigma * prob.width() / prob.eta * std::sqrt(std::log(1.0 / delta) / static_cast<double>(n));
}

double bound_subexponential(double lipschitz, double k, const SrProblem& prob, std::size_t n, double delta) {
  prob.validate();
  check_delta(delta, n);
  return 4.0 * std::numbers::e * lipschitz * k * prob.width() / prob.eta * std::log(1.0 / delta) /
         static_cast<double>(n);
}

double concentration_bound(const TailSpec& tail, double lipschitz, const SrProblem& prob, std::size_t n,
                           double delta) {
  if (!(tail.parameter > 0.0)) throw InvalidArgument("tail parameter must be positive");
  return tail.kind == TailSpec::Kind::SubGaussian ? bound_subgaussian(lipschitz, tail.parameter, prob, n, delta)
                                                  : bound_subexponential(lipschitz, tail.parameter, prob, n, delta);
}

}  // namespace ubsr
