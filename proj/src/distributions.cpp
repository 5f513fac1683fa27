#include "ubsr/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ubsr/errors.hpp"
#include "ubsr/rng.hpp"

namespace ubsr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kProbSumTol = 1e-12;
constexpr double kExpansionCap = 0x1.0p60;
// Gaussian density is below 1e-300 outside mu +- 40 sigma.
constexpr double kGaussianReach = 40.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Integral of g(z) f(z) over [a, b] intersected with the support, for a
// continuous law with density f. g is smooth on the window.
template <class G>
double integrate_against(const Uniform& d, G&& g, double a, double b) {
  const double lo = std::max(a, d.lo);
  const double hi = std::min(b, d.hi);
  if (!(lo < hi)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, lo, hi, 12, 1e-14) /
         (d.hi - d.lo);
}

template <class G>
double integrate_against(const Gaussian& d, G&& g, double a, double b) {
  const double lo = std::max(a, d.mu - kGaussianReach * d.sigma);
  const double hi = std::min(b, d.mu + kGaussianReach * d.sigma);
  if (!(lo < hi)) return 0.0;
  auto weighted = [&](double z) { return g(z) * normal_pdf((z - d.mu) / d.sigma) / d.sigma; };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(weighted, lo, hi, 12, 1e-14);
}

template <class G>
double integrate_against(const Exponential& d, G&& g, double a, double b) {
  const double lo = std::max(a, 0.0);
  const double hi = b;
  if (!(lo < hi)) return 0.0;
  auto weighted = [&](double z) { return g(z) * d.rate * std::exp(-d.rate * z); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(weighted, lo, hi, 12, 1e-14);
}

// P(Z > s)
double survival(const Uniform& d, double s) {
  if (s <= d.lo) return 1.0;
  if (s >= d.hi) return 0.0;
  return (d.hi - s) / (d.hi - d.lo);
}
double survival(const Gaussian& d, double s) { return normal_cdf((d.mu - s) / d.sigma); }
double survival(const Exponential& d, double s) { return s <= 0.0 ? 1.0 : std::exp(-d.rate * s); }

// E[(Z - s)_+]
double partial_expectation(const Uniform& d, double s) {
  if (s <= d.lo) return 0.5 * (d.lo + d.hi) - s;
  if (s >= d.hi) return 0.0;
  const double r = d.hi - s;
  return r * r / (2.0 * (d.hi - d.lo));
}
double partial_expectation(const Gaussian& d, double s) {
  const double k = (d.mu - s) / d.sigma;
  return d.sigma * normal_pdf(k) + (d.mu - s) * normal_cdf(k);
}
double partial_expectation(const Exponential& d, double s) {
  if (s <= 0.0) return 1.0 / d.rate - s;
  return std::exp(-d.rate * s) / d.rate;
}

double mean_of(const Uniform& d) { return 0.5 * (d.lo + d.hi); }
double mean_of(const Gaussian& d) { return d.mu; }
double mean_of(const Exponential& d) { return 1.0 / d.rate; }

template <class Law>
double continuous_l_f(const Law& d, const Utility& u, double t) {
  switch (u.kind()) {
    case Utility::Kind::Linear:
      return mean_of(d) - t;
    case Utility::Kind::Hinge:
      return partial_expectation(d, t);
    case Utility::Kind::SmoothHingeBlend: {
      const double a = u.blend_weight();
      const double tau = u.blend_width();
      const double s = t + tau;
      auto quadratic = [t, tau](double z) {
        const double r = z - t + tau;
        return r * r / (4.0 * tau);
      };
      // E[h_tau(Z - t)] = window part + E[(Z - t) 1{Z > t + tau}]
      const double smooth = integrate_against(d, quadratic, t - tau, s) +
                            partial_expectation(d, s) + tau * survival(d, s);
      return a * (mean_of(d) - t) + (1.0 - a) * smooth;
    }
  }
  return 0.0;
}

template <class Law>
double continuous_slope(const Law& d, const Utility& u, double t) {
  switch (u.kind()) {
    case Utility::Kind::Linear:
      return -1.0;
    case Utility::Kind::Hinge:
      return -survival(d, t);
    case Utility::Kind::SmoothHingeBlend: {
      const double a = u.blend_weight();
      const double tau = u.blend_width();
      const double s = t + tau;
      auto ramp = [t, tau](double z) { return (z - t + tau) / (2.0 * tau); };
      const double smooth = integrate_against(d, ramp, t - tau, s) + survival(d, s);
      return -(a + (1.0 - a) * smooth);
    }
  }
  return 0.0;
}

double l_f_variant(const Distribution::Variant& law, const Utility& u, double t);
double slope_variant(const Distribution::Variant& law, const Utility& u, double t);

double l_f_variant(const Distribution::Variant& law, const Utility& u, double t) {
  return std::visit(
      Overloaded{
          [&](const Uniform& d) { return continuous_l_f(d, u, t); },
          [&](const Gaussian& d) { return continuous_l_f(d, u, t); },
          [&](const Exponential& d) { return continuous_l_f(d, u, t); },
          [&](const PointMass& d) { return u(d.z - t); },
          [&](const FiniteDiscrete& d) {
            double acc = 0.0;
            for (const auto& atom : d.atoms) acc += atom.prob * u(atom.value - t);
            return acc;
          },
          [&](const Mixture& d) {
            double acc = 0.0;
            for (const auto& c : d.components) acc += c.weight * l_f_variant(c.dist.get(), u, t);
            return acc;
          },
      },
      law);
}

double slope_variant(const Distribution::Variant& law, const Utility& u, double t) {
  return std::visit(
      Overloaded{
          [&](const Uniform& d) { return continuous_slope(d, u, t); },
          [&](const Gaussian& d) { return continuous_slope(d, u, t); },
          [&](const Exponential& d) { return continuous_slope(d, u, t); },
          [&](const PointMass& d) { return -u.derivative(d.z - t); },
          [&](const FiniteDiscrete& d) {
            double acc = 0.0;
            for (const auto& atom : d.atoms) acc -= atom.prob * u.derivative(atom.value - t);
            return acc;
          },
          [&](const Mixture& d) {
            double acc = 0.0;
            for (const auto& c : d.components) acc += c.weight * slope_variant(c.dist.get(), u, t);
            return acc;
          },
      },
      law);
}

// Smallest s with P(Z > s) = 0, or +inf.
double essential_sup(const Distribution::Variant& law) {
  return std::visit(Overloaded{
                        [](const Uniform& d) { return d.hi; },
                        [](const Gaussian&) { return kInf; },
                        [](const Exponential&) { return kInf; },
                        [](const PointMass& d) { return d.z; },
                        [](const FiniteDiscrete& d) {
                          double m = -kInf;
                          for (const auto& a : d.atoms)
                            if (a.prob > 0.0) m = std::max(m, a.value);
                          return m;
                        },
                        [](const Mixture& d) {
                          double m = -kInf;
                          for (const auto& c : d.components)
                            if (c.weight > 0.0) m = std::max(m, essential_sup(c.dist.get()));
                          return m;
                        },
                    },
                    law);
}

double hinge_discrete_root(const FiniteDiscrete& d, double lambda) {
  std::vector<Atom> atoms;
  for (const auto& a : d.atoms)
    if (a.prob > 0.0) atoms.push_back(a);
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.value > y.value; });
  // On [v_{k+1}, v_k] (descending order), L(t) = A_k - P_k t.
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    mass += atoms[k].prob;
    moment += atoms[k].prob * atoms[k].value;
    const double next = k + 1 < atoms.size() ? atoms[k + 1].value : -kInf;
    const double t = (moment - lambda) / mass;
    if (t >= next) return t;
  }
  return (moment - lambda) / mass;
}

double bisect_acceptance(const Distribution::Variant& law, const Utility& u, double lambda, double tol) {
  auto accepted = [&](double t) { return l_f_variant(law, u, t) <= lambda; };
  double lo = -1.0;
  double hi = 1.0;
  while (!accepted(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kExpansionCap) {
      throw EmptyAcceptanceSet("L_F(t) > lambda for every t up to 2^60 (lambda = " + fmt(lambda) + ")");
    }
  }
  while (accepted(lo)) {
    hi = lo;
    lo *= 2.0;
    if (lo < -kExpansionCap) {
      throw BracketFailure("L_F(t) <= lambda for every t down to -2^60; UBSR is unbounded below");
    }
  }
  // Invariant: L(lo) > lambda >= L(hi).
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (accepted(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double sample_one(const Distribution::Variant& law, SplitMix64& rng) {
  return std::visit(
      Overloaded{
          [&](const Uniform& d) { return d.lo + (d.hi - d.lo) * rng.uniform(); },
          [&](const Gaussian& d) {
            const boost::math::normal_distribution<double> normal(d.mu, d.sigma);
            return boost::math::quantile(normal, rng.uniform_open());
          },
          [&](const Exponential& d) { return -std::log1p(-rng.uniform()) / d.rate; },
          [&](const PointMass& d) { return d.z; },
          [&](const FiniteDiscrete& d) {
            const double v = rng.uniform();
            double cumulative = 0.0;
            const Atom* last = nullptr;
            for (const auto& a : d.atoms) {
              if (a.prob <= 0.0) continue;
              cumulative += a.prob;
              last = &a;
              if (v < cumulative) return a.value;
            }
            return last->value;
          },
          [&](const Mixture& d) {
            const double v = rng.uniform();
            double cumulative = 0.0;
            const MixtureComponent* last = nullptr;
            for (const auto& c : d.components) {
              if (c.weight <= 0.0) continue;
              cumulative += c.weight;
              last = &c;
              if (v < cumulative) return sample_one(c.dist.get(), rng);
            }
            return sample_one(last->dist.get(), rng);
          },
      },
      law);
}

}  // namespace

Distribution Distribution::uniform(double lo, double hi) {
  require_finite(lo, "uniform lo");
  require_finite(hi, "uniform hi");
  if (!(lo < hi)) throw InvalidArgument("uniform requires lo < hi, got " + fmt(lo) + "," + fmt(hi));
  return Distribution(Uniform{lo, hi});
}

Distribution Distribution::gaussian(double mu, double sigma) {
  require_finite(mu, "gaussian mu");
  require_finite(sigma, "gaussian sigma");
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian requires sigma > 0, got " + fmt(sigma));
  return Distribution(Gaussian{mu, sigma});
}

Distribution Distribution::exponential(double rate) {
  require_finite(rate, "exponential rate");
  if (!(rate > 0.0)) throw InvalidArgument("exponential requires rate > 0, got " + fmt(rate));
  return Distribution(Exponential{rate});
}

Distribution Distribution::point_mass(double z) {
  require_finite(z, "point mass location");
  return Distribution(PointMass{z});
}

Distribution Distribution::discrete(std::vector<Atom> atoms) {
  if (atoms.empty()) throw InvalidArgument("discrete distribution needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    require_finite(a.value, "discrete atom value");
    if (!(a.prob >= 0.0) || !std::isfinite(a.prob)) {
      throw InvalidArgument("discrete atom probability must be a finite nonnegative number");
    }
    total += a.prob;
  }
  if (std::abs(total - 1.0) > kProbSumTol) {
    throw InvalidArgument("discrete probabilities sum to " + fmt(total) + ", expected 1");
  }
  return Distribution(FiniteDiscrete{std::move(atoms)});
}

Distribution Distribution::mixture(std::vector<MixtureComponent> components) {
  if (components.empty()) throw InvalidArgument("mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
      throw InvalidArgument("mixture weight must be a finite nonnegative number");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kProbSumTol) {
    throw InvalidArgument("mixture weights sum to " + fmt(total) + ", expected 1");
  }
  return Distribution(Mixture{std::move(components)});
}

Distribution Distribution::mixture(double alpha, const Distribution& first, const Distribution& second) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("mixture alpha must lie in [0,1]");
  return mixture({MixtureComponent{first, alpha}, MixtureComponent{second, 1.0 - alpha}});
}

double Distribution::mean() const {
  return std::visit(Overloaded{
                        [](const Uniform& d) { return mean_of(d); },
                        [](const Gaussian& d) { return mean_of(d); },
                        [](const Exponential& d) { return mean_of(d); },
                        [](const PointMass& d) { return d.z; },
                        [](const FiniteDiscrete& d) {
                          double m = 0.0;
                          for (const auto& a : d.atoms) m += a.prob * a.value;
                          return m;
                        },
                        [](const Mixture& d) {
                          double m = 0.0;
                          for (const auto& c : d.components) m += c.weight * c.dist.mean();
                          return m;
                        },
                    },
                    law_);
}

std::string Distribution::to_string() const {
  return std::visit(Overloaded{
                        [](const Uniform& d) { return "uniform:" + fmt(d.lo) + "," + fmt(d.hi); },
                        [](const Gaussian& d) { return "gauss:" + fmt(d.mu) + "," + fmt(d.sigma); },
                        [](const Exponential& d) { return "exp:" + fmt(d.rate); },
                        [](const PointMass& d) { return "point:" + fmt(d.z); },
                        [](const FiniteDiscrete& d) {
                          std::string s = "discrete:";
                          for (std::size_t i = 0; i < d.atoms.size(); ++i) {
                            if (i) s += ",";
                            s += fmt(d.atoms[i].value) + ":" + fmt(d.atoms[i].prob);
                          }
                          return s;
                        },
                        [](const Mixture& d) {
                          std::string s = "mix:";
                          for (std::size_t i = 0; i < d.components.size(); ++i) {
                            if (i) s += "|";
                            s += fmt(d.components[i].weight) + "*(" + d.components[i].dist.to_string() + ")";
                          }
                          return s;
                        },
                    },
                    law_);
}

SampleVector sample(const Distribution& d, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
  SampleVector out;
  out.seed = seed;
  out.values.resize(n);
  SplitMix64 rng(seed);
  for (auto& v : out.values) v = sample_one(d.get(), rng);
  return out;
}

double l_f_exact(const Distribution& d, const Utility& u, double t) {
  const double v = l_f_variant(d.get(), u, t);
  if (!std::isfinite(v)) throw NumericalFailure("L_F(" + fmt(t) + ") is not finite");
  return v;
}

double l_f_slope(const Distribution& d, const Utility& u, double t) { return slope_variant(d.get(), u, t); }

double ubsr_exact(const Distribution& d, const Utility& u, double lambda, UbsrOptions opts) {
  if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
  if (!(opts.tol > 0.0)) throw InvalidArgument("ubsr tolerance must be positive");
  const auto& law = d.get();

  if (u.kind() == Utility::Kind::Linear) return d.mean() - lambda;

  if (u.kind() == Utility::Kind::Hinge) {
    // L_F >= 0 and L_F(t) = 0 exactly for t >= ess sup Z.
    if (lambda < 0.0) throw EmptyAcceptanceSet("hinge utility has L_F >= 0 > lambda");
    if (lambda == 0.0) {
      const double top = essential_sup(law);
      if (!std::isfinite(top)) throw EmptyAcceptanceSet("hinge utility with lambda = 0 on unbounded support");
      return top;
    }
    if (const auto* uni = std::get_if<Uniform>(&law)) {
      const double width = uni->hi - uni->lo;
      if (lambda < 0.5 * width) return uni->hi - std::sqrt(2.0 * width * lambda);
      return mean_of(*uni) - lambda;
    }
    if (const auto* pm = std::get_if<PointMass>(&law)) return pm->z - lambda;
    if (const auto* ex = std::get_if<Exponential>(&law)) {
      if (lambda >= 1.0 / ex->rate) return 1.0 / ex->rate - lambda;
      return -std::log(lambda * ex->rate) / ex->rate;
    }
    if (const auto* fd = std::get_if<FiniteDiscrete>(&law)) return hinge_discrete_root(*fd, lambda);
  }

  return bisect_acceptance(law, u, lambda, opts.tol);
}

}  // namespace ubsr
