#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ndc/dataset.hpp"

namespace ndc::numerics {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// singular values below kRankThreshold * sigma_max count as zero
inline constexpr double kRankThreshold = 1e-10;

// Row leverage scores via a thin SVD: squared row norms of the rank-r left
// factor. They sum to the numerical rank and each lies in [0, 1].
std::vector<double> leverage_scores(const Matrix& a);

struct LewisOptions {
  double tol = 1e-8;   // relative fixed-point tolerance
  int max_iter = 100;
};

// L1 Lewis weights: the fixed point of w_i = sqrt(a_i^T (A^T W^-1 A)^-1 a_i),
// initialized from leverage scores. Rank-deficient inputs are handled by
// working in the column space (Lewis weights are invariant under invertible
// right-multiplication).
std::vector<double> lewis_weights(const Matrix& a, const LewisOptions& opt = {});

// n x (dim+1) matrix [X | 1] whose rows are the points with a constant
// bias coordinate appended.
Matrix augmented_features(const Dataset& data);

}  // namespace ndc::numerics
