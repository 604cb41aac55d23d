#include "ndc/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ndc/kernels.hpp"
#include "ndc/numerics.hpp"
#include "ndc/rng.hpp"

namespace ndc {

namespace {

void check_plan_inputs(double epsilon, double delta, std::size_t d, std::size_t y_pos,
                       std::size_t y_neg, double const_factor) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  if (d == 0) throw std::invalid_argument("complexity term d must be >= 1");
  if (y_pos == 0 || y_neg == 0) throw std::invalid_argument("both classes must be nonempty");
  if (!(const_factor > 0.0)) throw std::invalid_argument("const factor must be positive");
}

std::size_t ceil_term(double factor, double term, double complexity) {
  const double v = factor * term * complexity;
  if (!(v >= 0.0) || v > 1e15) throw std::invalid_argument("sample-size term out of range");
  return static_cast<std::size_t>(std::ceil(v));
}

// inverse-CDF draw: cum is an inclusive prefix-sum of nonnegative masses
std::size_t draw_from_cdf(const std::vector<double>& cum, Rng& rng) {
  const double total = cum.back();
  const double u = rng.real() * total;
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) --it;
  return static_cast<std::size_t>(it - cum.begin());
}

Coreset exhaustive_coreset(const Dataset& data, const std::string& strategy,
                           std::uint64_t seed) {
  Coreset c;
  c.strategy = strategy;
  c.seed = seed;
  c.requested_size = data.size();
  c.indices.resize(data.size());
  std::iota(c.indices.begin(), c.indices.end(), std::size_t{0});
  c.weights.assign(data.size(), 1.0);
  return c;
}

Coreset score_proportional(std::vector<double> scores, const std::string& strategy,
                           std::size_t m, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("sample size must be >= 1");
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  if (!(total > 0.0)) throw std::runtime_error(strategy + ": all sampling scores are zero");

  std::vector<double> cum(scores.size());
  double run = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    run += scores[i];
    cum[i] = run;
  }

  Coreset c;
  c.strategy = strategy;
  c.seed = seed;
  c.requested_size = m;
  c.indices.reserve(m);
  c.weights.reserve(m);
  Rng rng(seed);
  const double denom = static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = draw_from_cdf(cum, rng);
    c.indices.push_back(i);
    c.weights.push_back(total / (denom * scores[i]));
  }
  return c;
}

}  // namespace

SampleSizePlan f1_sample_size(double gamma, double epsilon, double delta, std::size_t d,
                              std::size_t y_pos, std::size_t y_neg, double const_factor) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0,1]");
  check_plan_inputs(epsilon, delta, d, y_pos, y_neg, const_factor);

  const double complexity = static_cast<double>(d) + std::log(1.0 / delta);
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  const double ratio = static_cast<double>(y_neg) / static_cast<double>(y_pos);

  SampleSizePlan plan;
  plan.mode = Mode::f1;
  plan.inputs = {gamma, epsilon, delta, d, y_pos, y_neg, const_factor};
  const double g = (2.0 - gamma) * (2.0 - gamma) / (gamma * gamma);
  plan.s1 = ceil_term(const_factor, g * inv_eps2, complexity);
  plan.s2 = ceil_term(const_factor, inv_eps2, complexity);
  plan.s3 = ceil_term(const_factor, ratio * ratio * inv_eps2, complexity);
  plan.s4 = 0;
  plan.total = plan.s1 + plan.s2 + plan.s3;
  return plan;
}

SampleSizePlan mcc_sample_size(double epsilon, double delta, std::size_t d, std::size_t y_pos,
                               std::size_t y_neg, double const_factor) {
  check_plan_inputs(epsilon, delta, d, y_pos, y_neg, const_factor);

  const double complexity = static_cast<double>(d) + std::log(1.0 / delta);
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  const double ratio = static_cast<double>(y_neg) / static_cast<double>(y_pos);

  SampleSizePlan plan;
  plan.mode = Mode::mcc;
  plan.inputs = {1.0, epsilon, delta, d, y_pos, y_neg, const_factor};
  plan.s1 = ceil_term(const_factor, inv_eps2, complexity);
  plan.s2 = plan.s1;
  plan.s3 = ceil_term(const_factor, ratio * ratio * inv_eps2, complexity);
  plan.s4 = plan.s3;
  plan.total = plan.s1 + plan.s2 + plan.s3 + plan.s4;
  return plan;
}

Coreset stratified_uniform_counts(const Dataset& data, std::size_t s_pos, std::size_t s_neg,
                                  std::uint64_t seed, bool exhaustive) {
  if (exhaustive) {
    auto c = exhaustive_coreset(data, "stratified-uniform", seed);
    return c;
  }
  if (s_pos + s_neg == 0) throw std::invalid_argument("sample size must be >= 1");
  if (s_pos > 0 && data.num_positive() == 0) {
    throw std::runtime_error("positive stratum is empty but its draw count is positive");
  }
  if (s_neg > 0 && data.num_negative() == 0) {
    throw std::runtime_error("negative stratum is empty but its draw count is positive");
  }
  if (s_pos == 0 && data.num_positive() > 0) {
    throw std::runtime_error("positive stratum is nonempty but its draw count is zero");
  }
  if (s_neg == 0 && data.num_negative() > 0) {
    throw std::runtime_error("negative stratum is nonempty but its draw count is zero");
  }

  Coreset c;
  c.strategy = "stratified-uniform";
  c.seed = seed;
  c.indices.reserve(s_pos + s_neg);
  c.weights.reserve(s_pos + s_neg);
  Rng rng(seed);

  const auto& pos = data.positives();
  const auto& neg = data.negatives();
  const double w_pos = s_pos ? static_cast<double>(pos.size()) / static_cast<double>(s_pos) : 0.0;
  const double w_neg = s_neg ? static_cast<double>(neg.size()) / static_cast<double>(s_neg) : 0.0;
  for (std::size_t k = 0; k < s_pos; ++k) {
    c.indices.push_back(pos[rng.below(pos.size())]);
    c.weights.push_back(w_pos);
  }
  for (std::size_t k = 0; k < s_neg; ++k) {
    c.indices.push_back(neg[rng.below(neg.size())]);
    c.weights.push_back(w_neg);
  }
  return c;
}

Coreset stratified_uniform(const Dataset& data, const SampleSizePlan& plan, std::uint64_t seed,
                           bool exhaustive) {
  Coreset c = stratified_uniform_counts(data, plan.positive_draws(), plan.negative_draws(),
                                        seed, exhaustive);
  c.plan = plan;
  c.requested_size.reset();
  return c;
}

Coreset uniform(const Dataset& data, std::size_t m, std::uint64_t seed, bool exhaustive) {
  if (exhaustive) return exhaustive_coreset(data, "uniform", seed);
  if (m == 0) throw std::invalid_argument("sample size must be >= 1");
  Coreset c;
  c.strategy = "uniform";
  c.seed = seed;
  c.requested_size = m;
  c.indices.reserve(m);
  Rng rng(seed);
  const double w = static_cast<double>(data.size()) / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) c.indices.push_back(rng.below(data.size()));
  c.weights.assign(m, w);
  return c;
}

Coreset leverage_sampler(const Dataset& data, std::size_t m, std::uint64_t seed,
                         bool exhaustive) {
  if (exhaustive) return exhaustive_coreset(data, "leverage", seed);
  auto scores = numerics::leverage_scores(numerics::augmented_features(data));
  return score_proportional(std::move(scores), "leverage", m, seed);
}

Coreset lewis_sampler(const Dataset& data, std::size_t m, std::uint64_t seed, bool exhaustive) {
  if (exhaustive) return exhaustive_coreset(data, "lewis", seed);
  auto scores = numerics::lewis_weights(numerics::augmented_features(data));
  return score_proportional(std::move(scores), "lewis", m, seed);
}

Coreset kmeans_lightweight_sampler(const Dataset& data, std::size_t m, std::uint64_t seed,
                                   bool exhaustive) {
  if (exhaustive) return exhaustive_coreset(data, "kmeans", seed);
  const std::size_t n = data.size();
  const std::size_t dim = data.dim();

  std::vector<double> mean(dim, 0.0);
  auto flat = data.feature_matrix();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) mean[j] += flat[i * dim + j];
  }
  for (double& v : mean) v /= static_cast<double>(n);

  std::vector<double> d2(n);
  kernels::sq_dist(flat, dim, mean, d2);
  const double total = std::accumulate(d2.begin(), d2.end(), 0.0);

  std::vector<double> q(n);
  const double base = 0.5 / static_cast<double>(n);
  if (total > 0.0) {
    for (std::size_t i = 0; i < n; ++i) q[i] = base + 0.5 * d2[i] / total;
  } else {
    // all points coincide: plain uniform
    std::fill(q.begin(), q.end(), 1.0 / static_cast<double>(n));
  }
  return score_proportional(std::move(q), "kmeans", m, seed);
}

Coreset sample_by_strategy(const Dataset& data, const std::string& strategy, std::size_t m,
                           std::uint64_t seed, bool exhaustive) {
  if (strategy == "uniform") return uniform(data, m, seed, exhaustive);
  if (strategy == "leverage") return leverage_sampler(data, m, seed, exhaustive);
  if (strategy == "lewis") return lewis_sampler(data, m, seed, exhaustive);
  if (strategy == "kmeans") return kmeans_lightweight_sampler(data, m, seed, exhaustive);
  if (strategy == "stratified-uniform") {
    if (exhaustive) return stratified_uniform_counts(data, 0, 0, seed, true);
    if (m == 0) throw std::invalid_argument("sample size must be >= 1");
    // proportional split, round-half-up on the positive side, each nonempty
    // stratum keeps at least one draw
    const double share = static_cast<double>(m) * static_cast<double>(data.num_positive()) /
                         static_cast<double>(data.size());
    std::size_t s_pos = static_cast<std::size_t>(std::floor(share + 0.5));
    if (data.num_positive() > 0 && data.num_negative() > 0) {
      if (m < 2) throw std::invalid_argument("stratified sampling needs m >= 2 here");
      s_pos = std::clamp<std::size_t>(s_pos, 1, m - 1);
    } else if (data.num_positive() > 0) {
      s_pos = m;
    } else {
      s_pos = 0;
    }
    auto c = stratified_uniform_counts(data, s_pos, m - s_pos, seed, false);
    c.requested_size = m;
    return c;
  }
  throw std::invalid_argument("unknown strategy '" + strategy + "'");
}

const std::vector<std::string>& known_strategies() {
  static const std::vector<std::string> names = {"uniform", "stratified-uniform", "leverage",
                                                 "lewis", "kmeans"};
  return names;
}

}  // namespace ndc
