#include "ndc/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "ndc/kernels.hpp"

namespace ndc {

namespace {

// Split an augmented query into (coefficients over raw features, bias); in
// raw mode the bias coordinate lives in the data itself.
void check_and_split(const LinearQuery& q, std::size_t dim, std::span<const double>& coef,
                     double& bias) {
  const std::size_t expect = q.augment ? dim + 1 : dim;
  if (q.weights.size() != expect) {
    throw std::invalid_argument("query has " + std::to_string(q.weights.size()) +
                                " weights, expected " + std::to_string(expect));
  }
  if (q.augment) {
    coef = std::span<const double>(q.weights.data(), dim);
    bias = q.weights[dim];
  } else {
    coef = q.weights;
    bias = 0.0;
  }
}

}  // namespace

double decision_value(const LinearQuery& q, std::span<const double> x) {
  std::span<const double> coef;
  double bias = 0.0;
  check_and_split(q, x.size(), coef, bias);
  double s = bias;
  for (std::size_t j = 0; j < x.size(); ++j) s += coef[j] * x[j];
  return s;
}

MetricResult f1_score(const ContingencyTable& t) {
  const double denom = t.tp + 0.5 * (t.fp + t.fn);
  if (denom == 0.0) return {0.0, true};
  return {t.tp / denom, false};
}

MetricResult mcc_score(const ContingencyTable& t) {
  const double pp = t.tp + t.fp;
  const double ap = t.tp + t.fn;
  const double pn = t.tn + t.fn;
  const double an = t.tn + t.fp;
  if (pp == 0.0 || ap == 0.0 || pn == 0.0 || an == 0.0) return {0.0, true};
  const double num = t.tp * t.tn - t.fp * t.fn;
  return {num / std::sqrt(pp * ap * an * pn), false};
}

double mcc_normalized(const ContingencyTable& t) {
  const double n = t.total();
  if (n == 0.0) return 0.0;
  const double ap = t.actual_positive_rate();
  const double pp = t.predicted_positive_rate();
  const double denom = ap * pp * (1.0 - ap) * (1.0 - pp);
  if (denom <= 0.0) return 0.0;
  return (t.tp / n - ap * pp) / std::sqrt(denom);
}

double dv_distance(double a, double b, double v) {
  if (!(v > 0.0)) throw std::invalid_argument("dv_distance needs v > 0");
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("dv_distance needs nonnegative inputs");
  return std::abs(a - b) / (a + b + v);
}

ContingencyTable contingency(const Dataset& data, const LinearQuery& q) {
  std::span<const double> coef;
  double bias = 0.0;
  check_and_split(q, data.dim(), coef, bias);
  return kernels::contingency(data.feature_matrix(), data.dim(), data.labels(),
                              data.weights(), coef, bias);
}

ContingencyTable contingency(const Dataset& data, const LinearQuery& q, WeightedView view) {
  std::span<const double> coef;
  double bias = 0.0;
  check_and_split(q, data.dim(), coef, bias);
  if (view.indices.empty()) {
    auto w = view.weights.empty() ? data.weights() : view.weights;
    if (w.size() != data.size()) {
      throw std::invalid_argument("weight vector does not match dataset size");
    }
    return kernels::contingency(data.feature_matrix(), data.dim(), data.labels(), w, coef,
                                bias);
  }
  if (view.weights.size() != view.indices.size()) {
    throw std::invalid_argument("weighted view needs one weight per index");
  }
  for (std::size_t i : view.indices) {
    if (i >= data.size()) throw std::out_of_range("view index out of range");
  }
  return kernels::contingency_subset(data.feature_matrix(), data.dim(), data.labels(),
                                     view.indices, view.weights, coef, bias);
}

}  // namespace ndc
