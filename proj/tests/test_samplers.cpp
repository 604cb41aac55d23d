#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ndc/dataset.hpp"
#include "ndc/metrics.hpp"
#include "ndc/rng.hpp"
#include "ndc/samplers.hpp"
#include "test_support.hpp"

using namespace ndc;
using test_support::random_dataset;

namespace {

Dataset one_dim(std::initializer_list<double> xs, std::initializer_list<int> labels) {
  Dataset::Builder b(1);
  auto it = labels.begin();
  for (double x : xs) {
    const double row[1] = {x};
    b.add(row, *it++);
  }
  return std::move(b).build();
}

}  // namespace

TEST_CASE("f1 plan sizes at the calibration point") {
  // gamma 1, eps 0.1, delta 1/e, d 3 puts every term at exactly
  // ceil(100 * 4) = 400 for a balanced dataset
  const auto plan = f1_sample_size(1.0, 0.1, std::exp(-1.0), 3, 50, 50);
  CHECK(plan.s1 == 400);
  CHECK(plan.s2 == 400);
  CHECK(plan.s3 == 400);
  CHECK(plan.s4 == 0);
  CHECK(plan.total == 1200);
  CHECK(plan.positive_draws() == 800);
  CHECK(plan.negative_draws() == 400);
  CHECK(plan.mode == Mode::f1);
  CHECK(plan.inputs.gamma == 1.0);
  CHECK(plan.inputs.y_pos == 50);
  CHECK(plan.inputs.y_neg == 50);
}

TEST_CASE("mcc plan sizes at the calibration point") {
  const auto plan = mcc_sample_size(0.1, std::exp(-1.0), 3, 50, 50);
  CHECK(plan.s1 == 400);
  CHECK(plan.s2 == 400);
  CHECK(plan.s3 == 400);
  CHECK(plan.s4 == 400);
  CHECK(plan.total == 1600);
  CHECK(plan.mode == Mode::mcc);
  // gamma does not size the mcc plan; the stored inputs pin it to 1
  CHECK(plan.inputs.gamma == 1.0);
}

TEST_CASE("stricter gamma inflates only the threshold term") {
  const auto easy = f1_sample_size(1.0, 0.1, std::exp(-1.0), 3, 50, 50);
  const auto hard = f1_sample_size(0.5, 0.1, std::exp(-1.0), 3, 50, 50);
  CHECK(hard.s1 == 3600);  // (2 - 0.5)^2 / 0.5^2 = 9 times the base term
  CHECK(hard.s2 == easy.s2);
  CHECK(hard.s3 == easy.s3);
  CHECK(hard.s1 > easy.s1);
}

TEST_CASE("class imbalance inflates the negative term quadratically") {
  const auto skewed = f1_sample_size(1.0, 0.1, std::exp(-1.0), 3, 100, 300);
  CHECK(skewed.s3 == 3600);  // (300/100)^2 = 9 times the base term
  const auto inverted = f1_sample_size(1.0, 0.1, std::exp(-1.0), 3, 300, 100);
  CHECK(inverted.s3 == 45);  // ceil((1/3)^2 * 100 * 4)
}

TEST_CASE("plan input validation") {
  const double del = 0.1;
  CHECK_THROWS_WITH_AS(f1_sample_size(0.0, 0.1, del, 3, 5, 5), "gamma must be in (0,1]",
                       std::invalid_argument);
  CHECK_THROWS_AS(f1_sample_size(1.5, 0.1, del, 3, 5, 5), std::invalid_argument);
  CHECK_THROWS_WITH_AS(f1_sample_size(1.0, 0.0, del, 3, 5, 5), "epsilon must be in (0,1)",
                       std::invalid_argument);
  CHECK_THROWS_AS(f1_sample_size(1.0, 1.0, del, 3, 5, 5), std::invalid_argument);
  CHECK_THROWS_WITH_AS(f1_sample_size(1.0, 0.1, 0.0, 3, 5, 5), "delta must be in (0,1)",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(f1_sample_size(1.0, 0.1, del, 0, 5, 5),
                       "complexity term d must be >= 1", std::invalid_argument);
  CHECK_THROWS_WITH_AS(f1_sample_size(1.0, 0.1, del, 3, 0, 5),
                       "both classes must be nonempty", std::invalid_argument);
  CHECK_THROWS_AS(mcc_sample_size(0.1, del, 3, 5, 0), std::invalid_argument);
  CHECK_THROWS_WITH_AS(mcc_sample_size(0.1, del, 3, 5, 5, 0.0),
                       "const factor must be positive", std::invalid_argument);
  // a term overflowing any reasonable budget is rejected rather than wrapped
  CHECK_THROWS_WITH_AS(f1_sample_size(1.0, 1e-7, del, 3, 1, 1000000),
                       "sample-size term out of range", std::invalid_argument);
}

TEST_CASE("stratified counts produce per-stratum inverse-probability weights") {
  const auto data = random_dataset(4, 6, 2, 11);
  const auto c = stratified_uniform_counts(data, 2, 3, 99);
  REQUIRE(c.size() == 5);
  CHECK(c.strategy == "stratified-uniform");
  CHECK(c.seed == 99);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(data.label(c.indices[k]) == +1);
    CHECK(c.weights[k] == 2.0);  // 4 positives over 2 draws
  }
  for (std::size_t k = 2; k < 5; ++k) {
    CHECK(data.label(c.indices[k]) == -1);
    CHECK(c.weights[k] == 2.0);  // 6 negatives over 3 draws
  }
}

TEST_CASE("plan-driven draws record the plan and drop the size request") {
  const auto data = random_dataset(30, 20, 2, 12);
  const auto plan = f1_sample_size(1.0, 0.5, 0.5, 1, 30, 20);
  CHECK(plan.total == plan.s1 + plan.s2 + plan.s3);
  const auto c = stratified_uniform(data, plan, 5);
  REQUIRE(c.plan.has_value());
  CHECK(!c.requested_size.has_value());
  CHECK(c.size() == plan.total);
  CHECK(c.plan->mode == Mode::f1);
  const double w_pos = 30.0 / static_cast<double>(plan.positive_draws());
  const double w_neg = 20.0 / static_cast<double>(plan.negative_draws());
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k < plan.positive_draws()) {
      CHECK(data.label(c.indices[k]) == +1);
      CHECK(c.weights[k] == doctest::Approx(w_pos).epsilon(1e-15));
    } else {
      CHECK(data.label(c.indices[k]) == -1);
      CHECK(c.weights[k] == doctest::Approx(w_neg).epsilon(1e-15));
    }
  }
}

TEST_CASE("same seed reproduces draws, a new seed changes them") {
  const auto data = random_dataset(50, 50, 3, 13);
  const auto a = stratified_uniform_counts(data, 25, 25, 1234);
  const auto b = stratified_uniform_counts(data, 25, 25, 1234);
  CHECK(a.indices == b.indices);
  CHECK(a.weights == b.weights);
  const auto c = stratified_uniform_counts(data, 25, 25, 1235);
  CHECK(a.indices != c.indices);

  const auto u1 = uniform(data, 30, 7);
  const auto u2 = uniform(data, 30, 7);
  CHECK(u1.indices == u2.indices);
}

TEST_CASE("stratum and draw-count mismatches are rejected") {
  const auto both = random_dataset(5, 5, 2, 14);
  CHECK_THROWS_WITH_AS(stratified_uniform_counts(both, 0, 0, 1),
                       "sample size must be >= 1", std::invalid_argument);
  CHECK_THROWS_WITH_AS(stratified_uniform_counts(both, 3, 0, 1),
                       "negative stratum is nonempty but its draw count is zero",
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(stratified_uniform_counts(both, 0, 3, 1),
                       "positive stratum is nonempty but its draw count is zero",
                       std::runtime_error);

  const auto pos_only = random_dataset(5, 0, 2, 15);
  CHECK_THROWS_WITH_AS(stratified_uniform_counts(pos_only, 3, 2, 1),
                       "negative stratum is empty but its draw count is positive",
                       std::runtime_error);
  CHECK(stratified_uniform_counts(pos_only, 3, 0, 1).size() == 3);

  const auto neg_only = random_dataset(0, 5, 2, 16);
  CHECK_THROWS_WITH_AS(stratified_uniform_counts(neg_only, 2, 3, 1),
                       "positive stratum is empty but its draw count is positive",
                       std::runtime_error);
}

TEST_CASE("stratified weighted cells are unbiased for the full table") {
  const auto data = random_dataset(40, 60, 3, 17);
  LinearQuery q;
  q.weights = {0.8, -0.5, 0.3, 0.1};
  const auto full = contingency(data, q);
  REQUIRE(full.total() == 100.0);

  const int reps = 1500;
  std::vector<double> tp(reps), fp(reps), fn(reps), tn(reps);
  for (int r = 0; r < reps; ++r) {
    const auto c = stratified_uniform_counts(data, 25, 25, derive_seed(7, static_cast<std::uint64_t>(r)));
    const auto t = contingency(data, q, c.view());
    // the reweighted table always carries the full class masses
    CHECK(t.tp + t.fn == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(t.tn + t.fp == doctest::Approx(60.0).epsilon(1e-12));
    tp[r] = t.tp;
    fp[r] = t.fp;
    fn[r] = t.fn;
    tn[r] = t.tn;
  }

  auto within_3se = [&](const std::vector<double>& xs, double target) {
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    const double se = std::sqrt(var / xs.size());
    CHECK(std::abs(mean - target) <= 3.0 * se + 1e-9);
  };
  within_3se(tp, full.tp);
  within_3se(fp, full.fp);
  within_3se(fn, full.fn);
  within_3se(tn, full.tn);
}

TEST_CASE("uniform sampler weights every draw by n over m") {
  const auto data = random_dataset(30, 30, 2, 18);
  const auto c = uniform(data, 10, 3);
  REQUIRE(c.size() == 10);
  CHECK(c.strategy == "uniform");
  CHECK(c.requested_size == 10);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(c.indices[k] < 60);
    CHECK(c.weights[k] == 6.0);
  }
  CHECK_THROWS_WITH_AS(uniform(data, 0, 3), "sample size must be >= 1", std::invalid_argument);
}

TEST_CASE("lightweight scores split mass between uniform and distance parts") {
  // points {0,0,0,3}: the far point gets q = 1/8 + 0.375 = 1/2 exactly,
  // the near ones 1/6, so inverse-probability weights are 1/(2m) and 6/m
  const auto data = one_dim({0.0, 0.0, 0.0, 3.0}, {+1, +1, +1, -1});
  const std::size_t m = 2000;
  const auto c = kmeans_lightweight_sampler(data, m, 4242);
  REQUIRE(c.size() == m);
  std::size_t far_draws = 0;
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (c.indices[k] == 3) {
      ++far_draws;
      CHECK(c.weights[k] == doctest::Approx(0.001).epsilon(1e-9));
    } else {
      CHECK(c.weights[k] == doctest::Approx(0.003).epsilon(1e-9));
    }
    weight_sum += c.weights[k];
  }
  // the far point carries half the mass; 3 sigma on 2000 draws is about 67
  CHECK(far_draws > 900);
  CHECK(far_draws < 1100);
  // reweighting is unbiased for the point count
  CHECK(weight_sum == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("coincident points fall back to plain uniform scores") {
  const auto data = one_dim({2.0, 2.0, 2.0}, {+1, -1, +1});
  const auto c = kmeans_lightweight_sampler(data, 12, 5);
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(c.weights[k] == doctest::Approx(0.25));
}

TEST_CASE("matrix-based samplers chase the high-leverage point") {
  // twenty clustered points and one far outlier: the outlier's leverage is
  // near 1 while the cluster shares the rest, so it shows up in about half
  // of all proportional draws
  Dataset::Builder b(1);
  for (int i = 0; i < 20; ++i) {
    const double row[1] = {0.01 * i};
    b.add(row, i % 2 == 0 ? +1 : -1);
  }
  const double far[1] = {100.0};
  b.add(far, +1);
  const auto data = std::move(b).build();

  for (const char* name : {"leverage", "lewis"}) {
    const auto c = sample_by_strategy(data, name, 400, 31);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c.indices[k] == 20) ++hits;
      CHECK(c.weights[k] > 0.0);
    }
    INFO(name);
    CHECK(hits > 100);
    CHECK(hits < 300);
  }
}

TEST_CASE("exhaustive mode takes every point once at unit weight") {
  const auto data = random_dataset(6, 4, 2, 19);
  for (const auto& name : known_strategies()) {
    const auto c = sample_by_strategy(data, name, 3, 77, true);
    CHECK(c.strategy == name);
    REQUIRE(c.size() == 10);
    CHECK(c.requested_size == 10);
    for (std::size_t k = 0; k < 10; ++k) {
      CHECK(c.indices[k] == k);
      CHECK(c.weights[k] == 1.0);
    }
  }
  // the plan route keeps the plan attached instead of a size request
  const auto plan = f1_sample_size(1.0, 0.5, 0.5, 1, 6, 4);
  const auto c = stratified_uniform(data, plan, 0, true);
  CHECK(c.plan.has_value());
  CHECK(!c.requested_size.has_value());
  CHECK(c.size() == 10);
}

TEST_CASE("strategy dispatch splits stratified draws proportionally") {
  const auto data = random_dataset(80, 20, 2, 20);
  const auto c = sample_by_strategy(data, "stratified-uniform", 10, 8);
  REQUIRE(c.size() == 10);
  CHECK(c.requested_size == 10);
  std::size_t pos_draws = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (data.label(c.indices[k]) == +1) ++pos_draws;
  }
  CHECK(pos_draws == 8);

  // round-half-up at a 75/25 split with m = 2, then clamp keeps one each
  const auto tiny = random_dataset(75, 25, 2, 21);
  const auto c2 = sample_by_strategy(tiny, "stratified-uniform", 2, 8);
  REQUIRE(c2.size() == 2);
  CHECK(tiny.label(c2.indices[0]) == +1);
  CHECK(c2.weights[0] == 75.0);
  CHECK(c2.weights[1] == 25.0);

  // heavy imbalance still leaves the minority stratum one draw
  const auto skew = random_dataset(99, 1, 2, 22);
  const auto c3 = sample_by_strategy(skew, "stratified-uniform", 2, 8);
  CHECK(c3.weights[0] == 99.0);
  CHECK(c3.weights[1] == 1.0);
}

TEST_CASE("strategy dispatch rejects bad names and sizes") {
  const auto data = random_dataset(5, 5, 2, 23);
  CHECK_THROWS_WITH_AS(sample_by_strategy(data, "foo", 4, 1), "unknown strategy 'foo'",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(sample_by_strategy(data, "uniform", 0, 1), "sample size must be >= 1",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(sample_by_strategy(data, "stratified-uniform", 1, 1),
                       "stratified sampling needs m >= 2 here", std::invalid_argument);
  CHECK(known_strategies() == std::vector<std::string>{"uniform", "stratified-uniform",
                                                       "leverage", "lewis", "kmeans"});
}
