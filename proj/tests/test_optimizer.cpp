#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ubsr/distributions.hpp"
#include "ubsr/errors.hpp"
#include "ubsr/optimizer.hpp"
#include "ubsr/rng.hpp"

using ubsr::BisectionConfig;
using ubsr::LinearModel;
using ubsr::RegressionDataset;
using ubsr::Utility;

namespace {

RegressionDataset linear_data(std::size_t m, double slope, std::uint64_t seed, double noise_half_width) {
  ubsr::SplitMix64 rng(seed);
  RegressionDataset d{Eigen::MatrixXd(m, 1), Eigen::VectorXd(m)};
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i) {
    d.features(i, 0) = -2 + 4 * rng.uniform();
    d.targets(i) = slope * d.features(i, 0) + noise_half_width * (2 * rng.uniform() - 1);
  }
  return d;
}

void check_trace_shape(const ubsr::TrainResult& r) {
  const auto& tr = r.trace;
  double prev_alpha = 0.0;
  double prev_beta = tr.beta0;
  for (const auto& rec : tr.records) {
    CHECK(rec.gamma_t == (prev_alpha + prev_beta) / 2);
    CHECK(rec.beta - rec.alpha == std::ldexp(tr.beta0, -rec.t));
    CHECK(rec.beta - rec.alpha == (prev_beta - prev_alpha) / 2);
    CHECK(rec.alpha >= prev_alpha);
    CHECK(rec.beta <= prev_beta);
    CHECK(rec.alpha <= rec.beta);
    CHECK((rec.branch == ubsr::Branch::Lower) == (rec.gamma_hat < rec.gamma_t));
    prev_alpha = rec.alpha;
    prev_beta = rec.beta;
  }
}

}  // namespace

TEST_CASE("noise-free data recovers the slope") {
  const auto data = linear_data(400, 2.0, 1, 0.0);
  BisectionConfig cfg;
  cfg.iterations = 20;
  cfg.lambda = 1.0;
  cfg.utility = Utility::linear();
  const auto r = ubsr::train(data, cfg);
  CHECK(std::abs(r.model.weights(0) - 2.0) <= 1e-3);
  const auto [first, second] = ubsr::split_halves(data, std::nullopt);
  const double sr = ubsr::ubsr_of_model(r.model, second, cfg.utility, cfg.lambda, 1e-12);
  CHECK(std::abs(sr - (-1.0)) <= 2e-3);
  CHECK(r.trace.records.size() == 20);
  check_trace_shape(r);
}

TEST_CASE("interval halves exactly and branches follow the strict test") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const auto data = linear_data(600, 3.0, seed, 1.0);
    BisectionConfig cfg;
    cfg.iterations = 16;
    cfg.lambda = 0.5;
    cfg.utility = Utility::blend(0.5, 3.0);
    const auto r = ubsr::train(data, cfg);
    check_trace_shape(r);
    CHECK(r.trace.beta0 >= r.trace.beta0_estimate);
    // 32 significant bits: the rounding moves beta_0 by less than 2^-31 relative.
    CHECK(r.trace.beta0 - r.trace.beta0_estimate <= std::ldexp(r.trace.beta0, -31));
    CHECK(r.model.weights == r.trace.records.back().weights);
    CHECK(r.final_ubsr_estimate == r.trace.records.back().gamma_hat);
  }
}

TEST_CASE("a shorter run is a prefix of a longer one") {
  const auto data = linear_data(400, 2.0, 12, 1.0);
  BisectionConfig cfg;
  cfg.lambda = 0.5;
  cfg.utility = Utility::blend(0.5, 3.0);
  cfg.iterations = 16;
  const auto full = ubsr::train(data, cfg);
  for (int t : {1, 5, 9, 20}) {
    cfg.iterations = t;
    const auto part = ubsr::train(data, cfg);
    CHECK(part.trace.beta0 == full.trace.beta0);
    const auto common = std::min<std::size_t>(static_cast<std::size_t>(t), full.trace.records.size());
    for (std::size_t k = 0; k < common; ++k) {
      CHECK(part.trace.records[k].alpha == full.trace.records[k].alpha);
      CHECK(part.trace.records[k].beta == full.trace.records[k].beta);
      CHECK(part.trace.records[k].weights == full.trace.records[k].weights);
    }
    if (t <= 16) CHECK(part.model.weights == full.trace.records[static_cast<std::size_t>(t) - 1].weights);
  }
}

TEST_CASE("training is deterministic") {
  const auto data = linear_data(300, -1.5, 9, 0.5);
  BisectionConfig cfg;
  cfg.iterations = 10;
  cfg.lambda = 0.3;
  cfg.shuffle_seed = 44;
  const auto a = ubsr::train(data, cfg);
  const auto b = ubsr::train(data, cfg);
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    CHECK(a.trace.records[i].gamma_hat == b.trace.records[i].gamma_hat);
    CHECK(a.trace.records[i].weights == b.trace.records[i].weights);
    CHECK(a.trace.records[i].lmo_objective == b.trace.records[i].lmo_objective);
  }
}

TEST_CASE("best-so-far variant returns the smallest estimate") {
  const auto data = linear_data(400, 1.0, 12, 1.0);
  BisectionConfig cfg;
  cfg.iterations = 8;
  cfg.lambda = 0.5;
  cfg.best_so_far = true;
  const auto r = ubsr::train(data, cfg);
  double best = r.trace.beta0_estimate;
  for (const auto& rec : r.trace.records) best = std::min(best, rec.gamma_hat);
  CHECK(r.final_ubsr_estimate == best);
}

TEST_CASE("configuration validation") {
  const auto data = linear_data(20, 1.0, 1, 0.1);
  BisectionConfig cfg;
  cfg.utility = Utility::hinge();
  CHECK_THROWS_AS(ubsr::train(data, cfg), ubsr::InvalidArgument);
  cfg.utility = Utility::blend(0.5, 1.0);
  cfg.iterations = 0;
  CHECK_THROWS_AS(ubsr::train(data, cfg), ubsr::InvalidArgument);
  cfg.iterations = 3;
  cfg.norm_bound = -1.0;
  CHECK_THROWS_AS(ubsr::train(data, cfg), ubsr::InvalidArgument);
  cfg.norm_bound.reset();
  RegressionDataset other{Eigen::MatrixXd::Zero(5, 2), Eigen::VectorXd::Zero(5)};
  CHECK_THROWS_AS(ubsr::train(data, other, cfg), ubsr::InvalidArgument);
}

TEST_CASE("ubsr_of_model examples") {
  const auto data = linear_data(50, 2.0, 3, 0.0);
  LinearModel w2{Eigen::VectorXd::Constant(1, 2.0), std::nullopt};
  CHECK(ubsr::ubsr_of_model(w2, data, Utility::linear(), 1.0, 1e-12) == doctest::Approx(-1.0).epsilon(1e-9));

  RegressionDataset ones{Eigen::MatrixXd::Random(30, 1), Eigen::VectorXd::Ones(30)};
  LinearModel zero{Eigen::VectorXd::Zero(1), std::nullopt};
  CHECK(ubsr::ubsr_of_model(zero, ones, Utility::linear(), 0.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));

  // z = y^2 with y = sqrt(10 U) is exactly Uniform(0, 10).
  const auto uz = ubsr::sample(ubsr::Distribution::uniform(0, 1), 100'000, 21);
  RegressionDataset push{Eigen::MatrixXd::Zero(100'000, 1), Eigen::VectorXd(100'000)};
  for (Eigen::Index i = 0; i < 100'000; ++i) push.targets(i) = std::sqrt(10 * uz.values[static_cast<std::size_t>(i)]);
  CHECK(std::abs(ubsr::ubsr_of_model(zero, push, Utility::hinge(), 2.0, 1e-10) - (10 - std::sqrt(40.0))) <= 0.05);
}

TEST_CASE("split halves by index with optional shuffle") {
  const auto data = linear_data(7, 1.0, 2, 0.3);
  const auto [a, b] = ubsr::split_halves(data, std::nullopt);
  CHECK(a.rows() == 3);
  CHECK(b.rows() == 4);
  CHECK(a.targets(0) == data.targets(0));
  CHECK(b.targets(0) == data.targets(3));
  const auto [c, d] = ubsr::split_halves(data, 5);
  const auto [e, f] = ubsr::split_halves(data, 5);
  CHECK(c.targets == e.targets);
  CHECK(d.targets == f.targets);
  // Shuffling permutes rows: the multiset of targets is preserved.
  std::vector<double> before(data.targets.data(), data.targets.data() + 7);
  std::vector<double> after(c.targets.data(), c.targets.data() + 3);
  after.insert(after.end(), d.targets.data(), d.targets.data() + 4);
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  CHECK(before == after);
  RegressionDataset one{Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1)};
  CHECK_THROWS_AS(ubsr::split_halves(one, std::nullopt), ubsr::InvalidArgument);
}

TEST_CASE("small instance lands near the grid optimum") {
  const auto data = linear_data(1200, 3.0, 17, 1.0);
  BisectionConfig cfg;
  cfg.iterations = 14;
  cfg.lambda = 0.5;
  cfg.utility = Utility::blend(0.5, 3.0);
  const auto r = ubsr::train(data, cfg);
  const auto [first, second] = ubsr::split_halves(data, std::nullopt);
  auto sr_of = [&](double w) {
    std::vector<double> z(static_cast<std::size_t>(second.rows()));
    for (Eigen::Index i = 0; i < second.rows(); ++i) {
      const double res = second.targets(i) - w * second.features(i, 0);
      z[static_cast<std::size_t>(i)] = res * res;
    }
    return oracle::sample_ubsr(z, cfg.utility, cfg.lambda);
  };
  const auto [w_best, sr_best] = oracle::grid_min(sr_of, 2.0, 4.0, 0.01);
  CHECK(sr_of(r.model.weights(0)) - sr_best <= 0.05);
}
