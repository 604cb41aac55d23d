#include "ndc/kernels.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ndc::kernels {

namespace {

inline double dot(const double* x, const double* c, std::size_t dim) {
  double s = 0.0;
  for (std::size_t j = 0; j < dim; ++j) s += x[j] * c[j];
  return s;
}

struct BlockRange {
  std::size_t begin, end;
};

inline BlockRange block_range(std::size_t n, std::size_t b) {
  // kReductionBlocks contiguous ranges; combining per-block partials in block
  // order keeps results independent of the thread count
  const std::size_t chunk = (n + kReductionBlocks - 1) / kReductionBlocks;
  const std::size_t begin = b * chunk;
  return {std::min(begin, n), std::min(begin + chunk, n)};
}

inline void accumulate(ContingencyTable& t, int label, double dv, double w) {
  const bool pos = dv > 0.0;
  if (label > 0) {
    (pos ? t.tp : t.fn) += w;
  } else {
    (pos ? t.fp : t.tn) += w;
  }
}

// stable log(1 + exp(-t))
inline double log1pexp_neg(double t) {
  if (t > 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

}  // namespace

// --- decision values --------------------------------------------------------

void decision_values_serial(std::span<const double> rows, std::size_t dim,
                            std::span<const double> coef, double bias,
                            std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = dot(rows.data() + i * dim, coef.data(), dim) + bias;
  }
}

void decision_values_parallel(std::span<const double> rows, std::size_t dim,
                              std::span<const double> coef, double bias,
                              std::span<double> out) {
  const std::size_t n = out.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    out[i] = dot(rows.data() + static_cast<std::size_t>(i) * dim, coef.data(), dim) + bias;
  }
}

void decision_values(std::span<const double> rows, std::size_t dim,
                     std::span<const double> coef, double bias, std::span<double> out) {
  if (out.size() < kParallelCutoff) {
    decision_values_serial(rows, dim, coef, bias, out);
  } else {
    decision_values_parallel(rows, dim, coef, bias, out);
  }
}

// --- contingency ------------------------------------------------------------

ContingencyTable contingency_serial(std::span<const double> rows, std::size_t dim,
                                    std::span<const std::int8_t> labels,
                                    std::span<const double> weights,
                                    std::span<const double> coef, double bias) {
  ContingencyTable t;
  const std::size_t n = labels.size();
  for (std::size_t i = 0; i < n; ++i) {
    accumulate(t, labels[i], dot(rows.data() + i * dim, coef.data(), dim) + bias, weights[i]);
  }
  return t;
}

ContingencyTable contingency_parallel(std::span<const double> rows, std::size_t dim,
                                      std::span<const std::int8_t> labels,
                                      std::span<const double> weights,
                                      std::span<const double> coef, double bias) {
  const std::size_t n = labels.size();
  ContingencyTable blocks[kReductionBlocks];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(kReductionBlocks); ++b) {
    auto [begin, end] = block_range(n, static_cast<std::size_t>(b));
    ContingencyTable local;
    for (std::size_t i = begin; i < end; ++i) {
      accumulate(local, labels[i], dot(rows.data() + i * dim, coef.data(), dim) + bias,
                 weights[i]);
    }
    blocks[b] = local;
  }
  ContingencyTable t;
  for (const auto& blk : blocks) {
    t.tp += blk.tp;
    t.fp += blk.fp;
    t.fn += blk.fn;
    t.tn += blk.tn;
  }
  return t;
}

ContingencyTable contingency(std::span<const double> rows, std::size_t dim,
                             std::span<const std::int8_t> labels,
                             std::span<const double> weights,
                             std::span<const double> coef, double bias) {
  if (labels.size() < kParallelCutoff) {
    return contingency_serial(rows, dim, labels, weights, coef, bias);
  }
  return contingency_parallel(rows, dim, labels, weights, coef, bias);
}

ContingencyTable contingency_subset_serial(std::span<const double> rows, std::size_t dim,
                                           std::span<const std::int8_t> labels,
                                           std::span<const std::size_t> indices,
                                           std::span<const double> weights,
                                           std::span<const double> coef, double bias) {
  ContingencyTable t;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices[k];
    accumulate(t, labels[i], dot(rows.data() + i * dim, coef.data(), dim) + bias, weights[k]);
  }
  return t;
}

ContingencyTable contingency_subset(std::span<const double> rows, std::size_t dim,
                                    std::span<const std::int8_t> labels,
                                    std::span<const std::size_t> indices,
                                    std::span<const double> weights,
                                    std::span<const double> coef, double bias) {
  const std::size_t m = indices.size();
  if (m < kParallelCutoff) {
    return contingency_subset_serial(rows, dim, labels, indices, weights, coef, bias);
  }
  ContingencyTable blocks[kReductionBlocks];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(kReductionBlocks); ++b) {
    auto [begin, end] = block_range(m, static_cast<std::size_t>(b));
    ContingencyTable local;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t i = indices[k];
      accumulate(local, labels[i], dot(rows.data() + i * dim, coef.data(), dim) + bias,
                 weights[k]);
    }
    blocks[b] = local;
  }
  ContingencyTable t;
  for (const auto& blk : blocks) {
    t.tp += blk.tp;
    t.fp += blk.fp;
    t.fn += blk.fn;
    t.tn += blk.tn;
  }
  return t;
}

// --- loss / gradient --------------------------------------------------------

namespace {

// per-point contribution at margin t = y * (coef.x + b):
//   logistic: loss log(1+e^-t), dloss/dt = -1/(1+e^t)
//   hinge:    loss max(0, 1-t), dloss/dt = -1 while t < 1
inline void loss_terms(LossKind kind, double t, double& loss, double& dldt) {
  if (kind == LossKind::logistic) {
    loss = log1pexp_neg(t);
    dldt = -1.0 / (1.0 + std::exp(t));
  } else {
    loss = t < 1.0 ? 1.0 - t : 0.0;
    dldt = t < 1.0 ? -1.0 : 0.0;
  }
}

void loss_grad_block(std::span<const double> rows, std::size_t dim,
                     std::span<const std::int8_t> y, std::span<const double> w,
                     LossKind kind, std::span<const double> coef, double bias,
                     std::size_t begin, std::size_t end, double* acc) {
  // acc layout: [grad_0..grad_{dim-1}, grad_bias, loss]
  for (std::size_t i = begin; i < end; ++i) {
    const double* x = rows.data() + i * dim;
    const double t = y[i] * (dot(x, coef.data(), dim) + bias);
    double loss, dldt;
    loss_terms(kind, t, loss, dldt);
    const double scale = w[i] * dldt * y[i];
    for (std::size_t j = 0; j < dim; ++j) acc[j] += scale * x[j];
    acc[dim] += scale;
    acc[dim + 1] += w[i] * loss;
  }
}

LossGrad finalize_loss_grad(const double* acc, std::size_t dim, double weight_norm,
                            double l2_reg, std::span<const double> coef) {
  LossGrad out;
  out.grad.resize(dim);
  double sq = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    out.grad[j] = acc[j] / weight_norm + l2_reg * coef[j];
    sq += coef[j] * coef[j];
  }
  out.grad_bias = acc[dim] / weight_norm;  // no ridge on the bias
  out.objective = acc[dim + 1] / weight_norm + 0.5 * l2_reg * sq;
  return out;
}

}  // namespace

LossGrad loss_grad_serial(std::span<const double> rows, std::size_t dim,
                          std::span<const std::int8_t> y, std::span<const double> w,
                          double weight_norm, LossKind kind, double l2_reg,
                          std::span<const double> coef, double bias) {
  std::vector<double> acc(dim + 2, 0.0);
  loss_grad_block(rows, dim, y, w, kind, coef, bias, 0, y.size(), acc.data());
  return finalize_loss_grad(acc.data(), dim, weight_norm, l2_reg, coef);
}

LossGrad loss_grad_parallel(std::span<const double> rows, std::size_t dim,
                            std::span<const std::int8_t> y, std::span<const double> w,
                            double weight_norm, LossKind kind, double l2_reg,
                            std::span<const double> coef, double bias) {
  const std::size_t n = y.size();
  const std::size_t stride = dim + 2;
  std::vector<double> block_acc(kReductionBlocks * stride, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(kReductionBlocks); ++b) {
    auto [begin, end] = block_range(n, static_cast<std::size_t>(b));
    loss_grad_block(rows, dim, y, w, kind, coef, bias, begin, end,
                    block_acc.data() + static_cast<std::size_t>(b) * stride);
  }
  std::vector<double> acc(stride, 0.0);
  for (std::size_t b = 0; b < kReductionBlocks; ++b) {
    for (std::size_t j = 0; j < stride; ++j) acc[j] += block_acc[b * stride + j];
  }
  return finalize_loss_grad(acc.data(), dim, weight_norm, l2_reg, coef);
}

LossGrad loss_grad(std::span<const double> rows, std::size_t dim,
                   std::span<const std::int8_t> y, std::span<const double> w,
                   double weight_norm, LossKind kind, double l2_reg,
                   std::span<const double> coef, double bias) {
  if (y.size() < kParallelCutoff) {
    return loss_grad_serial(rows, dim, y, w, weight_norm, kind, l2_reg, coef, bias);
  }
  return loss_grad_parallel(rows, dim, y, w, weight_norm, kind, l2_reg, coef, bias);
}

// --- squared distances ------------------------------------------------------

void sq_dist_serial(std::span<const double> rows, std::size_t dim,
                    std::span<const double> center, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = rows.data() + i * dim;
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double dxy = x[j] - center[j];
      s += dxy * dxy;
    }
    out[i] = s;
  }
}

void sq_dist_parallel(std::span<const double> rows, std::size_t dim,
                      std::span<const double> center, std::span<double> out) {
  const std::size_t n = out.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const double* x = rows.data() + static_cast<std::size_t>(i) * dim;
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double dxy = x[j] - center[j];
      s += dxy * dxy;
    }
    out[i] = s;
  }
}

void sq_dist(std::span<const double> rows, std::size_t dim, std::span<const double> center,
             std::span<double> out) {
  if (out.size() < kParallelCutoff) {
    sq_dist_serial(rows, dim, center, out);
  } else {
    sq_dist_parallel(rows, dim, center, out);
  }
}

}  // namespace ndc::kernels
