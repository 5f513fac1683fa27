#include "ubsr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>

#include "ubsr/errors.hpp"
#include "ubsr/parallel.hpp"
#include "ubsr/rng.hpp"

namespace ubsr {
namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string key(const std::string& prefix, double v) {
  std::ostringstream os;
  os << prefix << v;
  return os.str();
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

VerificationReport check_nonconvexity() {
  VerificationReport r;
  r.name = "nonconvexity";
  const Utility hinge = Utility::hinge();
  const double lambda = 2.0;
  const auto f1 = Distribution::uniform(0.0, 10.0);
  const auto f2 = Distribution::uniform(10.0, 20.0);
  const auto mix = Distribution::mixture(0.5, f1, f2);

  const double sr1 = ubsr_exact(f1, hinge, lambda);
  const double sr2 = ubsr_exact(f2, hinge, lambda);
  const double sr_mix = ubsr_exact(mix, hinge, lambda);
  const double average = 0.5 * sr1 + 0.5 * sr2;
  const double gap = sr_mix - average;

  r.details = {{"sr1", sr1},
               {"sr2", sr2},
               {"sr_mixture", sr_mix},
               {"average", average},
               {"gap", gap},
               {"sr1_closed_form", 10.0 - std::sqrt(40.0)},
               {"sr2_closed_form", 20.0 - std::sqrt(40.0)},
               {"sr_mixture_closed_form", 20.0 - std::sqrt(80.0)}};
  const double err = std::max({std::abs(sr1 - (10.0 - std::sqrt(40.0))), std::abs(sr2 - (20.0 - std::sqrt(40.0))),
                               std::abs(sr_mix - (20.0 - std::sqrt(80.0)))});
  r.details["max_closed_form_error"] = err;

  r.passed = gap > 0.0 && err <= 1e-8;
  if (gap <= 0.0) r.message = "violated: SR(mixture) > average, slack " + num(gap);
  else if (err > 1e-8) r.message = "violated: |SR - closed form| <= 1e-8, measured " + num(err);
  return r;
}

VerificationReport check_pseudolinearity(const Distribution& f1, const Distribution& f2, const Utility& u,
                                         double lambda, int grid, double slack) {
  if (grid < 2) throw InvalidArgument("pseudo-linearity grid needs at least two points");
  VerificationReport r;
  r.name = "pseudolinear";
  std::vector<double> values(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) {
    const double alpha = static_cast<double>(k) / (grid - 1);
    values[static_cast<std::size_t>(k)] = ubsr_exact(Distribution::mixture(alpha, f1, f2), u, lambda);
  }
  // Largest step against each direction.
  double worst_up = 0.0;
  double worst_down = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    worst_up = std::max(worst_up, values[k - 1] - values[k]);
    worst_down = std::max(worst_down, values[k] - values[k - 1]);
  }
  const bool nondecreasing = worst_up <= slack;
  const bool nonincreasing = worst_down <= slack;
  r.details = {{"sr_alpha0", values.front()},
               {"sr_alpha1", values.back()},
               {"grid", grid},
               {"max_decrease", worst_up},
               {"max_increase", worst_down},
               {"direction", nondecreasing && nonincreasing ? 0.0 : (nondecreasing ? 1.0 : -1.0)}};
  r.passed = nondecreasing || nonincreasing;
  if (!r.passed) {
    r.message = "violated: monotone in alpha; increases by " + num(worst_down) + " and decreases by " +
                num(worst_up) + " (slack " + num(slack) + ")";
  }
  return r;
}

VerificationReport check_gradient(const Distribution& f, const Distribution& f_prime, const Utility& u, double lambda,
                                  const std::vector<double>& eps_grid, double rel_tol) {
  if (eps_grid.empty()) throw InvalidArgument("gradient check needs at least one epsilon");
  VerificationReport r;
  r.name = "gradient";
  const UbsrOptions tight{1e-13};
  const double t_star = ubsr_exact(f, u, lambda, tight);
  const double slope = l_f_slope(f, u, t_star);
  r.details["t_star"] = t_star;
  r.details["l_f_slope"] = slope;
  if (slope == 0.0) {
    r.passed = false;
    r.message = "non-differentiable: L_F'(SR[F]) = 0";
    return r;
  }
  const double predicted = -(l_f_exact(f_prime, u, t_star) - l_f_exact(f, u, t_star)) / slope;
  r.details["predicted"] = predicted;

  // Same route for the base point and the perturbed points so that
  // closed-form/bisection discrepancies do not enter the difference quotient.
  const double base = ubsr_exact(Distribution::mixture(1.0, f, f_prime), u, lambda, tight);
  double smallest_eps = eps_grid.front();
  double error_at_smallest = 0.0;
  for (const double eps : eps_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("gradient epsilon must lie in (0, 1]");
    const double perturbed = ubsr_exact(Distribution::mixture(1.0 - eps, f, f_prime), u, lambda, tight);
    const double fd = (perturbed - base) / eps;
    const double scale = std::max(std::abs(predicted), 1e-12);
    const double rel = predicted == fd ? 0.0 : std::abs(fd - predicted) / scale;
    r.details[key("fd_eps", eps)] = fd;
    r.details[key("rel_error_eps", eps)] = rel;
    if (eps <= smallest_eps) {
      smallest_eps = eps;
      error_at_smallest = rel;
    }
  }
  r.details["rel_error"] = error_at_smallest;
  r.passed = error_at_smallest <= rel_tol;
  if (!r.passed) {
    r.message = "violated: relative error <= " + num(rel_tol) + " at eps " + num(smallest_eps) + ", measured " +
                num(error_at_smallest);
  }
  return r;
}

VerificationReport check_randomization_invariance(const Distribution& f1, const Distribution& f2, const Utility& u,
                                                  double lambda, const std::vector<double>& alphas) {
  VerificationReport r;
  r.name = "randomization";
  const double sr1 = ubsr_exact(f1, u, lambda);
  const double sr2 = ubsr_exact(f2, u, lambda);
  r.details = {{"sr1", sr1}, {"sr2", sr2}};
  if (sr1 > 0.0 || sr2 > 0.0) {
    r.passed = true;
    r.skipped = true;
    r.message = "skipped: a component is not acceptable (SR > 0)";
    return r;
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const double alpha : alphas) {
    const double sr = ubsr_exact(Distribution::mixture(alpha, f1, f2), u, lambda);
    r.details[key("sr_alpha", alpha)] = sr;
    worst = std::max(worst, sr);
  }
  r.details["max_mixture_sr"] = worst;
  r.passed = worst <= 1e-9;
  if (!r.passed) r.message = "violated: SR(mixture) <= 0, measured " + num(worst);
  return r;
}

SrProblem instance_problem(const Distribution& d, const Utility& u, double lambda, double half_width) {
  if (!(half_width > 0.0)) throw InvalidArgument("bracket half-width must be positive");
  const double t_star = ubsr_exact(d, u, lambda);
  SrProblem prob{lambda, t_star - half_width, t_star + half_width, 0.0};
  prob.eta = std::min(l_f_exact(d, u, prob.t_lo) - lambda, lambda - l_f_exact(d, u, prob.t_hi));
  if (!(prob.eta > 0.0)) {
    throw InvalidArgument("bracket of half-width " + num(half_width) + " has no positive crossing margin");
  }
  return prob;
}

TailSpec default_tail(const Distribution& d) {
  const auto& law = d.get();
  if (const auto* uni = std::get_if<Uniform>(&law)) return {TailSpec::Kind::SubGaussian, 0.5 * (uni->hi - uni->lo)};
  if (const auto* g = std::get_if<Gaussian>(&law)) return {TailSpec::Kind::SubGaussian, g->sigma};
  if (const auto* e = std::get_if<Exponential>(&law)) return {TailSpec::Kind::SubExponential, 2.0 / e->rate};
  throw InvalidArgument("no default tail certificate for " + d.to_string() + "; pass --tail explicitly");
}

ConcentrationResult run_concentration_suite(const TailSpec& tail, const Distribution& dist, const Utility& u,
                                            const SrProblem& prob, const ConcentrationSettings& settings) {
  prob.validate();
  if (settings.n_grid.empty() || settings.delta_grid.empty() || settings.trials == 0) {
    throw InvalidArgument("concentration suite needs nonempty n grid, delta grid and trials");
  }
  ConcentrationResult out;
  out.true_ubsr = ubsr_exact(dist, u, prob.lambda);
  const std::size_t n_max = *std::max_element(settings.n_grid.begin(), settings.n_grid.end());
  const std::size_t cells = settings.n_grid.size();
  const double tol = default_estimator_tol(prob.t_lo, prob.t_hi);

  // errors[trial * cells + k] for n_grid[k].
  std::vector<double> errors(settings.trials * cells);
  parallel_for(settings.trials, settings.threads, [&](std::size_t trial) {
    const SampleVector z = sample(dist, n_max, trial_seed(settings.seed, trial));
    for (std::size_t k = 0; k < cells; ++k) {
      const std::span<const double> prefix(z.values.data(), settings.n_grid[k]);
      errors[trial * cells + k] = std::abs(estimate_ubsr(prefix, u, prob, tol).value - out.true_ubsr);
    }
  });

  VerificationReport& r = out.report;
  r.name = "concentration";
  r.passed = true;
  r.details["true_ubsr"] = out.true_ubsr;
  r.details["t_lo"] = prob.t_lo;
  r.details["t_hi"] = prob.t_hi;
  r.details["eta"] = prob.eta;
  r.details["trials"] = static_cast<double>(settings.trials);
  const double trials = static_cast<double>(settings.trials);

  std::vector<double> log_n, log_median;
  for (std::size_t k = 0; k < cells; ++k) {
    const std::size_t n = settings.n_grid[k];
    std::vector<double> column(settings.trials);
    for (std::size_t i = 0; i < settings.trials; ++i) column[i] = errors[i * cells + k];
    const double med = median(column);
    r.details[key("median_error_n", static_cast<double>(n))] = med;
    log_n.push_back(std::log(static_cast<double>(n)));
    log_median.push_back(std::log(std::max(med, 1e-300)));

    for (const double delta : settings.delta_grid) {
      const double bound = concentration_bound(tail, u.lipschitz(), prob, n, delta);
      std::size_t covered = 0;
      for (std::size_t i = 0; i < settings.trials; ++i) {
        const bool ok = column[i] <= bound;
        covered += ok ? 1 : 0;
        out.rows.push_back({n, delta, i, column[i], bound, ok});
      }
      const double coverage = static_cast<double>(covered) / trials;
      const double threshold = 1.0 - 2.0 * delta - 2.0 * std::sqrt(delta * (1.0 - delta) / trials);
      const std::string suffix = "_n" + num(static_cast<double>(n)) + "_delta" + num(delta);
      r.details["coverage" + suffix] = coverage;
      r.details["bound" + suffix] = bound;
      r.details["threshold" + suffix] = threshold;
      if (coverage < threshold) {
        r.passed = false;
        r.message += "violated: coverage >= " + num(threshold) + " at n=" + num(static_cast<double>(n)) +
                     " delta=" + num(delta) + ", measured " + num(coverage) + "; ";
      }
    }
  }
  std::vector<double> distinct = log_n;
  std::sort(distinct.begin(), distinct.end());
  if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() >= 2) {
    const double slope = fit_slope(log_n, log_median);
    r.details["median_error_slope"] = slope;
    if (slope < -0.6 || slope > -0.4) {
      r.passed = false;
      r.message += "violated: median-error slope in [-0.6, -0.4], measured " + num(slope) + "; ";
    }
  }
  return out;
}

}  // namespace ubsr
