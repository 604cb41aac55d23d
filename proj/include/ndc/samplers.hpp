#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ndc/dataset.hpp"

namespace ndc {

enum class Mode { f1, mcc };

struct PlanInputs {
  double gamma = 1.0;  // unused in mcc mode
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t d = 0;  // query-space complexity term
  std::size_t y_pos = 0;
  std::size_t y_neg = 0;
  double const_factor = 1.0;
};

// Per-stratum draw counts. s1/s2 are positive-class terms, s3/s4 negative;
// the F1 plan has no fourth term (s4 = 0).
struct SampleSizePlan {
  std::size_t s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  std::size_t total = 0;
  Mode mode = Mode::f1;
  PlanInputs inputs;

  std::size_t positive_draws() const { return s1 + s2; }
  std::size_t negative_draws() const { return s3 + s4; }
};

// Draw counts sufficient for the F1 guarantee at accuracy eps and confidence
// 1-3*delta over a query family of complexity d, for a dataset with y_pos
// positives and y_neg negatives. Terms are ceiled separately.
SampleSizePlan f1_sample_size(double gamma, double epsilon, double delta, std::size_t d,
                              std::size_t y_pos, std::size_t y_neg,
                              double const_factor = 1.0);

// Draw counts for the MCC guarantee (confidence 1-4*delta); gamma enters the
// verification band, not the sizes.
SampleSizePlan mcc_sample_size(double epsilon, double delta, std::size_t d,
                               std::size_t y_pos, std::size_t y_neg,
                               double const_factor = 1.0);

struct Coreset {
  std::vector<std::size_t> indices;
  std::vector<double> weights;
  std::string strategy;
  std::uint64_t seed = 0;
  std::optional<SampleSizePlan> plan;          // set for plan-driven draws
  std::optional<std::size_t> requested_size;   // set for size-driven draws

  WeightedView view() const { return {indices, weights}; }
  std::size_t size() const { return indices.size(); }
};

// Stratified uniform sampling with replacement: s_pos draws from the
// positives at weight Y+/s_pos each, s_neg from the negatives at Y-/s_neg.
// exhaustive=true instead takes every point once at weight 1.
Coreset stratified_uniform(const Dataset& data, const SampleSizePlan& plan,
                           std::uint64_t seed, bool exhaustive = false);
Coreset stratified_uniform_counts(const Dataset& data, std::size_t s_pos, std::size_t s_neg,
                                  std::uint64_t seed, bool exhaustive = false);

// m i.i.d. uniform draws with replacement, weight n/m each.
Coreset uniform(const Dataset& data, std::size_t m, std::uint64_t seed,
                bool exhaustive = false);

// m i.i.d. draws proportional to statistical leverage of the augmented row
// [x | 1], weight 1/(m p_i).
Coreset leverage_sampler(const Dataset& data, std::size_t m, std::uint64_t seed,
                         bool exhaustive = false);

// m i.i.d. draws proportional to L1 Lewis weights of the augmented rows.
Coreset lewis_sampler(const Dataset& data, std::size_t m, std::uint64_t seed,
                      bool exhaustive = false);

// m i.i.d. draws from the lightweight-coreset distribution
// q(x) = 1/(2n) + d(x, mean)^2 / (2 sum d^2), weight 1/(m q).
Coreset kmeans_lightweight_sampler(const Dataset& data, std::size_t m, std::uint64_t seed,
                                   bool exhaustive = false);

// Dispatch by CLI strategy name: uniform | stratified-uniform | leverage |
// lewis | kmeans. Stratified splits m proportionally to the class masses.
Coreset sample_by_strategy(const Dataset& data, const std::string& strategy, std::size_t m,
                           std::uint64_t seed, bool exhaustive = false);

const std::vector<std::string>& known_strategies();

}  // namespace ndc
