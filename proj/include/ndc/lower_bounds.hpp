#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ndc/dataset.hpp"
#include "ndc/metrics.hpp"
#include "ndc/samplers.hpp"

namespace ndc {

enum class LabelRule { all_positive, alternating };

// Hard instance on n = C(d, d/2) points in R^(d+1), one per size-d/2 subset
// of the d coordinates (lexicographic order). Every point p has a matched
// separator w_p that classifies p by a +-1/2 margin while every other point's
// sign is forced by its own coordinates, so any coreset that misses p gets
// w_p's score badly wrong.
struct AdversarialInstance {
  Dataset data;     // dim = d + 1; queries use no augmentation
  std::size_t d = 0;
  Mode mode = Mode::f1;
  LabelRule label_rule = LabelRule::all_positive;
  std::vector<std::vector<int>> subsets;      // 0-based coordinate subsets, sorted
  std::vector<LinearQuery> matched_queries;   // one per point, augment = false
  std::vector<int> x_signs;                   // mcc mode: forced prediction of each point
};

inline constexpr std::size_t kMaxLowerBoundDim = 16;  // n = C(16,8) = 12870 tops

// F1-mode instance: every non-matched point is pushed to the wrong side, so
// w_p's only true positive is p itself. Requires even d >= 2.
AdversarialInstance gen_f1_instance(std::size_t d, LabelRule rule = LabelRule::all_positive);

// MCC-mode instance: exactly n/2 positive labels (first half in enumeration
// order), and within each class the first half of the points get forced
// prediction +label, the rest -label (halves floored). Requires even d >= 4.
AdversarialInstance gen_mcc_instance(std::size_t d);

struct CollapseRecord {
  std::size_t omitted = 0;
  double full_score = 0.0;      // matched query's metric on all n points
  double omitted_score = 0.0;   // same metric with the matched point removed
  double full_numerator = 0.0;  // mcc: tp*tn - fp*fn; f1: the tp mass
  double omitted_numerator = 0.0;
};

// Exact evaluation of the matched query with and without its point. In F1
// mode the omitted point must be a positive one.
CollapseRecord demonstrate_collapse(const AdversarialInstance& inst, std::size_t omit);

struct SweepReport {
  std::string strategy;
  std::size_t m = 0;
  std::size_t trials = 0;
  double mean_collapse_fraction = 0.0;  // matched queries zeroed while full score > 0
  std::vector<double> per_trial_fraction;
};

// Draws size-m coresets without replacement under the named strategy's
// distribution and reports how many matched queries collapse to zero per
// draw. m may equal n (the identity case, zero collapses).
SweepReport coreset_failure_sweep(const AdversarialInstance& inst, const std::string& strategy,
                                  std::size_t m, std::size_t trials, std::uint64_t seed);

// Writes the points in the sparse-text dataset format plus a JSON sidecar
// holding the subsets, labels, forced signs, and matched queries.
void export_instance(const AdversarialInstance& inst, const std::string& data_path,
                     const std::string& sidecar_path);

}  // namespace ndc
