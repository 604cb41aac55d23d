#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ndc/metrics.hpp"

// Data-parallel inner loops, each in two flavors: a plain serial reference
// and an OpenMP version. The parallel versions accumulate into a fixed number
// of index-range blocks that are combined in block order, so results do not
// depend on the thread count. Tests compare the two flavors; the bench/
// target times them against each other.
namespace ndc::kernels {

inline constexpr std::size_t kReductionBlocks = 64;
// below this many rows the OpenMP fork costs more than it buys
inline constexpr std::size_t kParallelCutoff = 8192;

// --- decision values: out[i] = coef . x_i + bias ---------------------------

void decision_values_serial(std::span<const double> rows, std::size_t dim,
                            std::span<const double> coef, double bias,
                            std::span<double> out);
void decision_values_parallel(std::span<const double> rows, std::size_t dim,
                              std::span<const double> coef, double bias,
                              std::span<double> out);
void decision_values(std::span<const double> rows, std::size_t dim,
                     std::span<const double> coef, double bias,
                     std::span<double> out);

// --- weighted contingency over all rows ------------------------------------

ContingencyTable contingency_serial(std::span<const double> rows, std::size_t dim,
                                    std::span<const std::int8_t> labels,
                                    std::span<const double> weights,
                                    std::span<const double> coef, double bias);
ContingencyTable contingency_parallel(std::span<const double> rows, std::size_t dim,
                                      std::span<const std::int8_t> labels,
                                      std::span<const double> weights,
                                      std::span<const double> coef, double bias);
ContingencyTable contingency(std::span<const double> rows, std::size_t dim,
                             std::span<const std::int8_t> labels,
                             std::span<const double> weights,
                             std::span<const double> coef, double bias);

// --- weighted contingency over an index subset -----------------------------

ContingencyTable contingency_subset_serial(std::span<const double> rows, std::size_t dim,
                                           std::span<const std::int8_t> labels,
                                           std::span<const std::size_t> indices,
                                           std::span<const double> weights,
                                           std::span<const double> coef, double bias);
ContingencyTable contingency_subset(std::span<const double> rows, std::size_t dim,
                                    std::span<const std::int8_t> labels,
                                    std::span<const std::size_t> indices,
                                    std::span<const double> weights,
                                    std::span<const double> coef, double bias);

// --- full-batch loss/gradient for linear classifiers -----------------------

enum class LossKind { logistic, hinge };

struct LossGrad {
  double objective = 0.0;          // weight-normalized data loss + L2 term
  std::vector<double> grad;        // d(objective)/d(coef)
  double grad_bias = 0.0;
};

// rows is an S x dim block (already gathered/standardized), y in {+1,-1},
// w are per-row multiplicity weights summing to weight_norm.
LossGrad loss_grad_serial(std::span<const double> rows, std::size_t dim,
                          std::span<const std::int8_t> y, std::span<const double> w,
                          double weight_norm, LossKind kind, double l2_reg,
                          std::span<const double> coef, double bias);
LossGrad loss_grad_parallel(std::span<const double> rows, std::size_t dim,
                            std::span<const std::int8_t> y, std::span<const double> w,
                            double weight_norm, LossKind kind, double l2_reg,
                            std::span<const double> coef, double bias);
LossGrad loss_grad(std::span<const double> rows, std::size_t dim,
                   std::span<const std::int8_t> y, std::span<const double> w,
                   double weight_norm, LossKind kind, double l2_reg,
                   std::span<const double> coef, double bias);

// --- squared distance to a fixed center (lightweight-coreset scores) -------

void sq_dist_serial(std::span<const double> rows, std::size_t dim,
                    std::span<const double> center, std::span<double> out);
void sq_dist_parallel(std::span<const double> rows, std::size_t dim,
                      std::span<const double> center, std::span<double> out);
void sq_dist(std::span<const double> rows, std::size_t dim,
             std::span<const double> center, std::span<double> out);

}  // namespace ndc::kernels
