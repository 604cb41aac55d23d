#pragma once

#include <span>
#include <vector>

#include "ndc/dataset.hpp"

namespace ndc {

struct ContingencyTable {
  double tp = 0.0, fp = 0.0, fn = 0.0, tn = 0.0;

  double total() const { return tp + fp + fn + tn; }
  // fraction of actual positives / predicted positives (weighted)
  double actual_positive_rate() const { return (tp + fn) / total(); }
  double predicted_positive_rate() const { return (tp + fp) / total(); }
};

// Separating hyperplane used as a query. In augmented mode `weights` has
// dim+1 entries; the last one multiplies an implicit constant-1 coordinate.
// With augment=false the points carry their own final coordinate and
// `weights` matches the feature dimension exactly.
struct LinearQuery {
  std::vector<double> weights;
  bool augment = true;
};

// Ties go negative: a decision value of exactly zero predicts -1.
inline int predict_sign(double decision_value) { return decision_value > 0.0 ? +1 : -1; }

double decision_value(const LinearQuery& q, std::span<const double> x);

struct MetricResult {
  double value = 0.0;
  bool degenerate = false;  // the formula's denominator vanished
};

// F1 = tp / (tp + (fp + fn) / 2); zero when tp is zero with errors present,
// degenerate when the whole denominator is zero.
MetricResult f1_score(const ContingencyTable& t);

// MCC = (tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn)); degenerate when
// any denominator factor vanishes.
MetricResult mcc_score(const ContingencyTable& t);

// Equivalent MCC expression in terms of the actual/predicted positive rates;
// kept as an independent route for cross-checking the count form.
double mcc_normalized(const ContingencyTable& t);

// d_v(a, b) = |a - b| / (a + b + v) for nonnegative a, b and v > 0.
double dv_distance(double a, double b, double v);

ContingencyTable contingency(const Dataset& data, const LinearQuery& q);
ContingencyTable contingency(const Dataset& data, const LinearQuery& q, WeightedView view);

}  // namespace ndc
