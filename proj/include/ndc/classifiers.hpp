#pragma once

#include <cstdint>
#include <vector>

#include "ndc/dataset.hpp"
#include "ndc/kernels.hpp"
#include "ndc/metrics.hpp"

namespace ndc {

struct TrainConfig {
  kernels::LossKind loss = kernels::LossKind::logistic;
  double l2_reg = 1e-4;
  std::size_t epochs = 200;
  double step_size = 0.5;
  std::uint64_t seed = 0;  // reserved; full-batch training draws no randomness

  void validate() const;  // throws std::invalid_argument on bad fields
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  LinearQuery to_query() const;  // augmented-mode query over raw features
};

// Full-batch (sub)gradient descent on the weight-normalized loss plus an L2
// ridge term, over standardized features (the standardization is folded back
// into the returned raw-space model). Multiplicity weights come from the
// view, so training on a weighted coreset and on the equivalent duplicated
// dataset produce the same model.
LinearModel train(const Dataset& data, const TrainConfig& cfg,
                  std::vector<double>* objective_trace = nullptr);
LinearModel train(const Dataset& data, WeightedView view, const TrainConfig& cfg,
                  std::vector<double>* objective_trace = nullptr);

std::vector<int> predict(const LinearModel& model, const Dataset& data);

}  // namespace ndc
