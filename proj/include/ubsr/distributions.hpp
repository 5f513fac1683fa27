#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ubsr/utility.hpp"

namespace ubsr {

struct Uniform {
  double lo;
  double hi;
};

struct Gaussian {
  double mu;
  double sigma;
};

/// Exponential law with the given rate, supported on [0, inf).
struct Exponential {
  double rate;
};

struct PointMass {
  double z;
};

struct Atom {
  double value;
  double prob;
};

struct FiniteDiscrete {
  std::vector<Atom> atoms;
};

struct MixtureComponent;

struct Mixture {
  std::vector<MixtureComponent> components;
};

/**
 * Analytic real-valued law. Construct through the named factories, which
 * validate parameters (probabilities nonnegative and summing to 1 within
 * 1e-12, lo < hi, positive scales).
 */
class Distribution {
 public:
  using Variant = std::variant<Uniform, Gaussian, Exponential, PointMass, FiniteDiscrete, Mixture>;

  static Distribution uniform(double lo, double hi);
  static Distribution gaussian(double mu, double sigma);
  static Distribution exponential(double rate);
  static Distribution point_mass(double z);
  static Distribution discrete(std::vector<Atom> atoms);
  static Distribution mixture(std::vector<MixtureComponent> components);
  /// alpha*first + (1-alpha)*second.
  static Distribution mixture(double alpha, const Distribution& first, const Distribution& second);

  const Variant& get() const { return law_; }

  double mean() const;

  /// Canonical text form, parseable by parse_distribution().
  std::string to_string() const;

 private:
  explicit Distribution(Variant law) : law_(std::move(law)) {}
  Variant law_;
};

struct MixtureComponent {
  Distribution dist;
  double weight;
};

/// Sample i.i.d. draws of a law, seeded by the caller.
struct SampleVector {
  std::vector<double> values;
  std::uint64_t seed = 0;
};

/// n i.i.d. draws; deterministic in (d, n, seed). Throws InvalidArgument if n == 0.
SampleVector sample(const Distribution& d, std::size_t n, std::uint64_t seed);

/// L_F(t) = E[ell(Z - t)] for Z ~ d.
///
/// Closed forms for Linear and Hinge on every kind; SmoothHingeBlend on the
/// continuous kinds splits into a closed-form tail plus Gauss-Kronrod
/// quadrature over the finite quadratic window [t - tau, t + tau].
double l_f_exact(const Distribution& d, const Utility& u, double t);

/// dL_F/dt = -E[ell'(Z - t)]. Hinge uses the right derivative of ell at 0.
double l_f_slope(const Distribution& d, const Utility& u, double t);

struct UbsrOptions {
  /// Bisection stops once the bracket is no wider than this.
  double tol = 1e-10;
};

/**
 * SR_lambda[F] = inf{ t : L_F(t) <= lambda }.
 *
 * Closed form where available (Linear on every kind; Hinge on Uniform,
 * PointMass, Exponential, FiniteDiscrete). Otherwise monotone bisection on
 * l_f_exact after doubling a bracket outward from [-1, 1] up to 2^60. When
 * L_F is flat at level lambda the leftmost crossing is returned.
 *
 * Throws EmptyAcceptanceSet when L_F(t) > lambda everywhere.
 */
double ubsr_exact(const Distribution& d, const Utility& u, double lambda, UbsrOptions opts = {});

}  // namespace ubsr
