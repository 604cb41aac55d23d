#include "ndc/classifiers.hpp"

#include <cmath>
#include <stdexcept>

namespace ndc {

void TrainConfig::validate() const {
  if (epochs == 0) throw std::invalid_argument("epochs must be >= 1");
  if (!(step_size > 0.0)) throw std::invalid_argument("step size must be positive");
  if (l2_reg < 0.0) throw std::invalid_argument("l2 penalty must be nonnegative");
}

LinearQuery LinearModel::to_query() const {
  LinearQuery q;
  q.weights = weights;
  q.weights.push_back(bias);
  q.augment = true;
  return q;
}

namespace {

struct TrainingBlock {
  std::vector<double> rows;  // standardized, row-major
  std::vector<std::int8_t> labels;
  std::vector<double> weights;
  double weight_norm = 0.0;
  std::vector<double> mean, scale;  // per-column standardization
};

TrainingBlock gather(const Dataset& data, WeightedView view) {
  const std::size_t dim = data.dim();
  TrainingBlock blk;

  std::vector<std::size_t> all;
  std::span<const std::size_t> idx = view.indices;
  if (idx.empty()) {
    all.resize(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    idx = all;
  }
  std::span<const double> w = view.weights;
  if (!w.empty() && w.size() != idx.size()) {
    throw std::invalid_argument("weighted view needs one weight per index");
  }

  const std::size_t s = idx.size();
  blk.rows.resize(s * dim);
  blk.labels.resize(s);
  blk.weights.resize(s);
  bool has_pos = false, has_neg = false;
  for (std::size_t k = 0; k < s; ++k) {
    const std::size_t i = idx[k];
    if (i >= data.size()) throw std::out_of_range("view index out of range");
    auto x = data.features(i);
    std::copy(x.begin(), x.end(), blk.rows.begin() + k * dim);
    blk.labels[k] = static_cast<std::int8_t>(data.label(i));
    blk.weights[k] = w.empty() ? data.weight(i) : w[k];
    if (!(blk.weights[k] > 0.0)) throw std::invalid_argument("view weights must be positive");
    (data.label(i) > 0 ? has_pos : has_neg) = true;
    blk.weight_norm += blk.weights[k];
  }
  if (!has_pos || !has_neg) {
    throw std::runtime_error("training needs at least one point of each class");
  }

  // weighted mean/variance per column from the training split itself
  blk.mean.assign(dim, 0.0);
  blk.scale.assign(dim, 1.0);
  for (std::size_t k = 0; k < s; ++k) {
    for (std::size_t j = 0; j < dim; ++j) blk.mean[j] += blk.weights[k] * blk.rows[k * dim + j];
  }
  for (double& m : blk.mean) m /= blk.weight_norm;
  std::vector<double> var(dim, 0.0);
  for (std::size_t k = 0; k < s; ++k) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double c = blk.rows[k * dim + j] - blk.mean[j];
      var[j] += blk.weights[k] * c * c;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    const double sd = std::sqrt(var[j] / blk.weight_norm);
    blk.scale[j] = sd > 0.0 ? sd : 1.0;  // constant columns stay at scale 1
  }
  for (std::size_t k = 0; k < s; ++k) {
    for (std::size_t j = 0; j < dim; ++j) {
      blk.rows[k * dim + j] = (blk.rows[k * dim + j] - blk.mean[j]) / blk.scale[j];
    }
  }
  return blk;
}

}  // namespace

LinearModel train(const Dataset& data, WeightedView view, const TrainConfig& cfg,
                  std::vector<double>* objective_trace) {
  cfg.validate();
  const std::size_t dim = data.dim();
  TrainingBlock blk = gather(data, view);

  std::vector<double> coef(dim, 0.0);
  double bias = 0.0;
  if (objective_trace) objective_trace->clear();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto lg = kernels::loss_grad(blk.rows, dim, blk.labels, blk.weights, blk.weight_norm,
                                 cfg.loss, cfg.l2_reg, coef, bias);
    if (objective_trace) objective_trace->push_back(lg.objective);
    for (std::size_t j = 0; j < dim; ++j) coef[j] -= cfg.step_size * lg.grad[j];
    bias -= cfg.step_size * lg.grad_bias;
  }

  // fold the standardization back so the model applies to raw features
  LinearModel model;
  model.weights.resize(dim);
  model.bias = bias;
  for (std::size_t j = 0; j < dim; ++j) {
    model.weights[j] = coef[j] / blk.scale[j];
    model.bias -= coef[j] * blk.mean[j] / blk.scale[j];
  }
  return model;
}

LinearModel train(const Dataset& data, const TrainConfig& cfg,
                  std::vector<double>* objective_trace) {
  return train(data, WeightedView{}, cfg, objective_trace);
}

std::vector<int> predict(const LinearModel& model, const Dataset& data) {
  if (model.weights.size() != data.dim()) {
    throw std::invalid_argument("model dimension does not match dataset");
  }
  std::vector<double> dv(data.size());
  kernels::decision_values(data.feature_matrix(), data.dim(), model.weights, model.bias, dv);
  std::vector<int> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = predict_sign(dv[i]);
  return out;
}

}  // namespace ndc
