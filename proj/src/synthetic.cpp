#include "ndc/synthetic.hpp"

#include <stdexcept>
#include <utility>

#include "ndc/metrics.hpp"
#include "ndc/rng.hpp"

namespace ndc {

Dataset make_two_gaussians(std::size_t n_pos, std::size_t n_neg, std::size_t dim,
                           double separation, std::uint64_t seed) {
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("both classes need points");
  if (dim == 0) throw std::invalid_argument("dim must be positive");
  if (separation < 0.0) throw std::invalid_argument("separation must be nonnegative");

  Rng rng(derive_seed(seed, 0xa11ce));
  const std::vector<double> axis = rng.unit_vector(dim);

  Dataset::Builder b(dim);
  std::vector<double> x(dim);
  auto emit = [&](std::size_t count, int label) {
    const double shift = 0.5 * separation * label;
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < dim; ++j) x[j] = rng.gaussian() + shift * axis[j];
      b.add(x, label);
    }
  };
  emit(n_pos, +1);
  emit(n_neg, -1);
  return std::move(b).build();
}

Dataset make_noisy_separable(std::size_t n, std::size_t dim, double flip_prob,
                             std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least two points");
  if (dim == 0) throw std::invalid_argument("dim must be positive");
  if (flip_prob < 0.0 || flip_prob >= 0.5) {
    throw std::invalid_argument("flip probability must be in [0, 0.5)");
  }

  Rng rng(derive_seed(seed, 0xb0b));
  const std::vector<double> normal = rng.unit_vector(dim);

  std::vector<std::vector<double>> xs(n, std::vector<double>(dim));
  std::vector<int> ys(n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dv = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      xs[i][j] = rng.gaussian();
      dv += xs[i][j] * normal[j];
    }
    int y = predict_sign(dv);
    if (rng.real() < flip_prob) y = -y;
    ys[i] = y;
    if (y > 0) ++pos;
  }
  // keep the dataset usable for training: force one point over if a class is empty
  if (pos == 0) ys[n - 1] = +1;
  if (pos == n) ys[n - 1] = -1;

  Dataset::Builder b(dim);
  for (std::size_t i = 0; i < n; ++i) b.add(xs[i], ys[i]);
  return std::move(b).build();
}

}  // namespace ndc
