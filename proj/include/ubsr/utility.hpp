#pragma once

#include <string>

namespace ubsr {

/**
 * Convex nondecreasing utility ell applied to the shortfall Z - t.
 *
 * Three families are supported:
 *  - Linear:            ell(x) = x
 *  - Hinge:             ell(x) = max(0, x)
 *  - SmoothHingeBlend:  ell(x) = a*x + (1-a)*h_tau(x), where h_tau is the
 *                       Huber-style smoothing of the hinge
 *                         h_tau(x) = 0                   x <= -tau
 *                                  = (x+tau)^2/(4 tau)   |x| <= tau
 *                                  = x                   x >= tau
 *
 * All three are 1-Lipschitz. Hinge is only nondecreasing; the optimizer
 * rejects it because its analysis needs a strictly increasing utility.
 */
class Utility {
 public:
  enum class Kind { Linear, Hinge, SmoothHingeBlend };

  static Utility linear();
  static Utility hinge();
  /// Throws InvalidArgument unless a in (0,1] and tau > 0.
  static Utility blend(double a, double tau);

  Kind kind() const { return kind_; }
  double blend_weight() const { return a_; }
  double blend_width() const { return tau_; }

  double operator()(double x) const { return eval(x); }

  double eval(double x) const {
    switch (kind_) {
      case Kind::Linear:
        return x;
      case Kind::Hinge:
        return x > 0.0 ? x : 0.0;
      case Kind::SmoothHingeBlend:
        return a_ * x + (1.0 - a_) * smooth_hinge(x);
    }
    return x;
  }

  /// ell'(x); at the hinge kink returns the right derivative 1.
  double derivative(double x) const {
    switch (kind_) {
      case Kind::Linear:
        return 1.0;
      case Kind::Hinge:
        return x >= 0.0 ? 1.0 : 0.0;
      case Kind::SmoothHingeBlend:
        return a_ + (1.0 - a_) * smooth_hinge_slope(x);
    }
    return 1.0;
  }

  /// Global Lipschitz constant G.
  double lipschitz() const { return 1.0; }

  /// U = ell'(0). For Hinge this is the right derivative.
  double slope_at_zero() const { return derivative(0.0); }

  /// True when ell is strictly increasing (Linear and SmoothHingeBlend).
  bool strictly_increasing() const { return kind_ != Kind::Hinge; }

  /// Canonical text form, parseable by parse_utility().
  std::string to_string() const;

  friend bool operator==(const Utility&, const Utility&) = default;

 private:
  Utility(Kind kind, double a, double tau) : kind_(kind), a_(a), tau_(tau) {}

  double smooth_hinge(double x) const {
    if (x <= -tau_) return 0.0;
    if (x >= tau_) return x;
    const double s = x + tau_;
    return s * s / (4.0 * tau_);
  }

  double smooth_hinge_slope(double x) const {
    if (x <= -tau_) return 0.0;
    if (x >= tau_) return 1.0;
    return (x + tau_) / (2.0 * tau_);
  }

  Kind kind_;
  double a_;
  double tau_;
};

}  // namespace ubsr
