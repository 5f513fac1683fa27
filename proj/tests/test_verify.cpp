#include <doctest.h>

#include <cmath>

#include "ubsr/distributions.hpp"
#include "ubsr/errors.hpp"
#include "ubsr/rng.hpp"
#include "ubsr/verify.hpp"

using ubsr::Distribution;
using ubsr::Utility;

namespace {

Distribution random_law(ubsr::SplitMix64& rng) {
  const double c = -5 + 10 * rng.uniform();
  const double s = 0.5 + 4 * rng.uniform();
  switch (rng.below(5)) {
    case 0: return Distribution::uniform(c, c + s);
    case 1: return Distribution::gaussian(c, s);
    case 2: return Distribution::exponential(1.0 / s);
    case 3: return Distribution::point_mass(c);
    default: {
      const double p = 0.1 + 0.8 * rng.uniform();
      return Distribution::discrete({{c, p}, {c + s, 1 - p}});
    }
  }
}

}  // namespace

TEST_CASE("non-convexity reproduction") {
  const auto r = ubsr::check_nonconvexity();
  CHECK(r.passed);
  CHECK(r.details.at("sr1") == doctest::Approx(3.6754447).epsilon(1e-7));
  CHECK(r.details.at("sr_mixture") == doctest::Approx(11.0557281).epsilon(1e-7));
  CHECK(r.details.at("gap") == doctest::Approx(2.3803).epsilon(1e-4));
  CHECK(r.details.at("max_closed_form_error") <= 1e-8);
}

TEST_CASE("pseudo-linearity examples") {
  const auto same = Distribution::gaussian(1, 2);
  const auto flat = ubsr::check_pseudolinearity(same, same, Utility::blend(0.5, 1.0), 0.5, 11);
  CHECK(flat.passed);
  CHECK(flat.details.at("sr_alpha0") == doctest::Approx(flat.details.at("sr_alpha1")).epsilon(1e-12));

  const auto u = ubsr::check_pseudolinearity(Distribution::uniform(0, 10), Distribution::uniform(10, 20),
                                             Utility::hinge(), 2.0, 101);
  CHECK(u.passed);
  // alpha weights the first law, so the sequence runs from SR[f2] down to SR[f1].
  CHECK(u.details.at("sr_alpha0") == doctest::Approx(20 - std::sqrt(40.0)).epsilon(1e-9));
  CHECK(u.details.at("sr_alpha1") == doctest::Approx(10 - std::sqrt(40.0)).epsilon(1e-9));
  CHECK(u.details.at("direction") == -1.0);

  const auto pm = ubsr::check_pseudolinearity(Distribution::point_mass(0), Distribution::point_mass(5),
                                              Utility::linear(), 1.0, 21);
  CHECK(pm.passed);
  CHECK(pm.details.at("sr_alpha0") == doctest::Approx(4.0));
  CHECK(pm.details.at("sr_alpha1") == doctest::Approx(-1.0));
}

TEST_CASE("pseudo-linearity holds for random pairs") {
  ubsr::SplitMix64 rng(50);
  const std::vector<Utility> utils{Utility::linear(), Utility::hinge(), Utility::blend(0.5, 1.0),
                                   Utility::blend(0.2, 2.0)};
  for (int i = 0; i < 60; ++i) {
    const auto f1 = random_law(rng);
    const auto f2 = random_law(rng);
    const auto& u = utils[rng.below(utils.size())];
    const double lambda = 0.1 + 2 * rng.uniform();
    CAPTURE(f1.to_string());
    CAPTURE(f2.to_string());
    CAPTURE(u.to_string());
    const auto r = ubsr::check_pseudolinearity(f1, f2, u, lambda, 41);
    CHECK_MESSAGE(r.passed, r.message);
  }
}

TEST_CASE("a non-monotone sequence is reported") {
  // A negative slack rejects even a constant sequence.
  const auto r = ubsr::check_pseudolinearity(Distribution::uniform(0, 1), Distribution::uniform(0, 1),
                                             Utility::hinge(), 0.2, 5, -1.0);
  CHECK_FALSE(r.passed);
  CHECK(r.message.find("violated") != std::string::npos);
}

TEST_CASE("gradient examples") {
  const auto zero = ubsr::check_gradient(Distribution::uniform(0, 1), Distribution::uniform(0, 1),
                                         Utility::blend(0.5, 1.0), 0.3, {1e-3});
  CHECK(zero.passed);
  CHECK(zero.details.at("predicted") == 0.0);
  CHECK(zero.details.at("fd_eps0.001") == 0.0);

  const auto pm = ubsr::check_gradient(Distribution::point_mass(0), Distribution::point_mass(1), Utility::linear(),
                                       0.0, {1e-2, 1e-3});
  CHECK(pm.passed);
  CHECK(pm.details.at("predicted") == doctest::Approx(1.0));

  const auto smooth = ubsr::check_gradient(Distribution::uniform(0, 10), Distribution::uniform(10, 20),
                                           Utility::blend(0.9, 0.5), 2.0, {1e-3, 1e-4, 1e-5});
  CHECK(smooth.passed);
  CHECK(smooth.details.at("rel_error_eps1e-05") <= 1e-3);
}

TEST_CASE("finite-difference error shrinks with epsilon") {
  ubsr::SplitMix64 rng(71);
  int checked = 0;
  while (checked < 10) {
    const auto f = Distribution::gaussian(-2 + 4 * rng.uniform(), 0.5 + rng.uniform());
    const auto fp = Distribution::uniform(-3 + 2 * rng.uniform(), 2 + 3 * rng.uniform());
    const auto r = ubsr::check_gradient(f, fp, Utility::blend(0.3 + 0.6 * rng.uniform(), 0.5 + rng.uniform()),
                                        0.5, {1e-1, 1e-2, 1e-3});
    if (std::abs(r.details.at("predicted")) < 1e-3) continue;
    ++checked;
    CHECK(r.passed);
    CHECK(r.details.at("rel_error_eps0.01") <= 1.1 * r.details.at("rel_error_eps0.1"));
    CHECK(r.details.at("rel_error_eps0.001") <= 1.1 * r.details.at("rel_error_eps0.01"));
  }
}

TEST_CASE("gradient reports a zero slope") {
  // Hinge on a law whose UBSR sits at its essential supremum: L_F'(t*) = 0.
  const auto r = ubsr::check_gradient(Distribution::uniform(0, 1), Distribution::uniform(0, 2), Utility::hinge(), 0.0,
                                      {1e-3});
  CHECK_FALSE(r.passed);
  CHECK(r.message.find("non-differentiable") != std::string::npos);
}

TEST_CASE("randomization invariance examples") {
  const auto same = ubsr::check_randomization_invariance(Distribution::point_mass(-1), Distribution::point_mass(-1),
                                                         Utility::linear(), 0.0, {0.0, 0.5, 1.0});
  CHECK(same.passed);
  CHECK_FALSE(same.skipped);

  const auto half = ubsr::check_randomization_invariance(Distribution::point_mass(-2), Distribution::point_mass(-1),
                                                         Utility::linear(), 0.0, {0.5});
  CHECK(half.passed);
  CHECK(half.details.at("max_mixture_sr") == doctest::Approx(-1.5));

  std::vector<double> alphas;
  for (int k = 0; k <= 20; ++k) alphas.push_back(k / 20.0);
  const auto uni = ubsr::check_randomization_invariance(Distribution::uniform(0, 10), Distribution::uniform(0, 4),
                                                        Utility::hinge(), 6.0, alphas);
  CHECK(uni.passed);
  CHECK(uni.details.at("sr1") == doctest::Approx(-1.0));
  CHECK(uni.details.at("sr2") == doctest::Approx(-4.0));
  CHECK(uni.details.at("max_mixture_sr") <= 0.0);

  const auto skipped = ubsr::check_randomization_invariance(Distribution::point_mass(1), Distribution::point_mass(-1),
                                                            Utility::linear(), 0.0, {0.5});
  CHECK(skipped.passed);
  CHECK(skipped.skipped);
}

TEST_CASE("instance problem and default tails") {
  const auto d = Distribution::uniform(0, 10);
  const auto prob = ubsr::instance_problem(d, Utility::hinge(), 2.0, 5.0);
  CHECK(prob.width() == doctest::Approx(10.0));
  CHECK(prob.eta > 0.0);
  CHECK(prob.eta == doctest::Approx(2.0 - std::pow(10 - prob.t_hi, 2) / 20));
  const auto sg = ubsr::default_tail(d);
  CHECK(sg.kind == ubsr::TailSpec::Kind::SubGaussian);
  CHECK(sg.parameter == 5.0);
  CHECK(ubsr::default_tail(Distribution::exponential(1)).parameter == 2.0);
  CHECK(ubsr::default_tail(Distribution::gaussian(0, 3)).parameter == 3.0);
  CHECK_THROWS_AS(ubsr::default_tail(Distribution::point_mass(0)), ubsr::InvalidArgument);
}

TEST_CASE("concentration suite is thread-count invariant") {
  const auto d = Distribution::uniform(0, 10);
  const auto u = Utility::hinge();
  const auto prob = ubsr::instance_problem(d, u, 2.0, 5.0);
  ubsr::ConcentrationSettings s;
  s.n_grid = {100, 400};
  s.delta_grid = {0.1};
  s.trials = 200;
  s.seed = 3;
  s.threads = 1;
  const auto a = ubsr::run_concentration_suite(ubsr::default_tail(d), d, u, prob, s);
  s.threads = 3;
  const auto b = ubsr::run_concentration_suite(ubsr::default_tail(d), d, u, prob, s);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(a.rows.size() == 400);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].abs_error == b.rows[i].abs_error);
    CHECK(a.rows[i].covered == b.rows[i].covered);
  }
  CHECK(a.report.details == b.report.details);
  CHECK(a.report.passed);
  CHECK(a.true_ubsr == doctest::Approx(10 - std::sqrt(40.0)));
}
