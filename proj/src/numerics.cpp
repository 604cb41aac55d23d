#include "ndc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ndc::numerics {

namespace {

// Thin SVD factor spanning the column space: B = U_r * diag(sigma_r). Rows of
// B relate to rows of A by an invertible right factor, so leverage and Lewis
// computations can run on B even when A has dependent or dead columns.
Matrix column_space_factor(const Matrix& a, Eigen::Index* rank_out) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? kRankThreshold * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  }
  *rank_out = rank;
  if (rank == 0) return Matrix(a.rows(), 0);
  Matrix b = svd.matrixU().leftCols(rank);
  for (Eigen::Index j = 0; j < rank; ++j) b.col(j) *= sv(j);
  return b;
}

}  // namespace

std::vector<double> leverage_scores(const Matrix& a) {
  if (a.rows() == 0) throw std::invalid_argument("leverage_scores: empty matrix");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? kRankThreshold * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  }
  std::vector<double> tau(static_cast<std::size_t>(a.rows()), 0.0);
  if (rank == 0) return tau;  // zero matrix: every score is zero
  const auto u = svd.matrixU().leftCols(rank);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double s = u.row(i).squaredNorm();
    tau[static_cast<std::size_t>(i)] = std::clamp(s, 0.0, 1.0);
  }
  return tau;
}

std::vector<double> lewis_weights(const Matrix& a, const LewisOptions& opt) {
  if (a.rows() == 0) throw std::invalid_argument("lewis_weights: empty matrix");
  Eigen::Index rank = 0;
  Matrix b = column_space_factor(a, &rank);
  if (rank == 0) throw std::invalid_argument("lewis_weights: rank-zero matrix");

  const Eigen::Index n = b.rows();
  constexpr double kFloor = 1e-12;

  Eigen::VectorXd w(n);
  {
    std::vector<double> tau = leverage_scores(a);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = std::max(tau[static_cast<std::size_t>(i)], kFloor);
  }

  Eigen::VectorXd q(n);
  auto quadratic_forms = [&](const Eigen::VectorXd& weights) {
    // q_i = b_i^T (B^T diag(1/w) B)^{-1} b_i
    Matrix gram = Matrix::Zero(rank, rank);
    for (Eigen::Index i = 0; i < n; ++i) {
      gram.noalias() += (b.row(i).transpose() * b.row(i)) / weights(i);
    }
    Eigen::LDLT<Matrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw std::runtime_error("lewis_weights: singular weighted Gram matrix");
    }
    Matrix solved = ldlt.solve(b.transpose());  // rank x n
    for (Eigen::Index i = 0; i < n; ++i) {
      q(i) = b.row(i).dot(solved.col(i));
    }
  };

  bool converged = false;
  for (int it = 0; it < opt.max_iter; ++it) {
    quadratic_forms(w);
    double max_rel = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double next = std::max(std::sqrt(std::max(q(i), 0.0)), kFloor);
      max_rel = std::max(max_rel, std::abs(next - w(i)) / std::max(w(i), kFloor));
      w(i) = next;
    }
    if (max_rel <= opt.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error("lewis_weights: no convergence within iteration budget");
  }

  // self-check of the fixed point: w_i^2 must match the quadratic form
  quadratic_forms(w);
  double max_resid = 0.0, max_w2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    max_resid = std::max(max_resid, std::abs(w(i) * w(i) - q(i)));
    max_w2 = std::max(max_w2, w(i) * w(i));
  }
  if (max_resid > 1e-6 * std::max(max_w2, kFloor)) {
    throw std::runtime_error("lewis_weights: fixed-point residual too large");
  }

  return {w.data(), w.data() + n};
}

Matrix augmented_features(const Dataset& data) {
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index dim = static_cast<Eigen::Index>(data.dim());
  Matrix m(n, dim + 1);
  auto flat = data.feature_matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      m(i, j) = flat[static_cast<std::size_t>(i) * data.dim() + static_cast<std::size_t>(j)];
    }
    m(i, dim) = 1.0;
  }
  return m;
}

}  // namespace ndc::numerics
