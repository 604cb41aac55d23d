#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ndc/kernels.hpp"
#include "ndc/rng.hpp"

namespace k = ndc::kernels;

namespace {

struct Block {
  std::size_t n = 0, dim = 0;
  std::vector<double> rows;
  std::vector<std::int8_t> labels;
  std::vector<double> weights;
  std::vector<double> coef;
  double bias = 0.0;
};

Block make_block(std::size_t n, std::size_t dim, std::uint64_t seed, bool integer_weights) {
  Block b;
  b.n = n;
  b.dim = dim;
  ndc::Rng rng(seed);
  b.rows.resize(n * dim);
  for (auto& v : b.rows) v = rng.gaussian();
  b.labels.resize(n);
  for (auto& l : b.labels) l = rng.real() < 0.4 ? -1 : +1;
  b.weights.resize(n);
  for (auto& w : b.weights) {
    w = integer_weights ? static_cast<double>(1 + rng.below(5)) : 0.25 + rng.real();
  }
  b.coef = rng.gaussian_vector(dim);
  b.bias = 0.3;
  return b;
}

}  // namespace

TEST_CASE("decision values match a scalar loop") {
  const Block b = make_block(257, 7, 1, false);
  std::vector<double> out(b.n);
  k::decision_values(b.rows, b.dim, b.coef, b.bias, out);
  for (std::size_t i : {std::size_t{0}, std::size_t{17}, b.n - 1}) {
    double s = b.bias;
    for (std::size_t j = 0; j < b.dim; ++j) s += b.rows[i * b.dim + j] * b.coef[j];
    CHECK(out[i] == doctest::Approx(s).epsilon(1e-14));
  }
}

TEST_CASE("serial and parallel flavors agree exactly on integer weights") {
  // integer weights make every partial sum exactly representable, so the
  // block-combined parallel reduction must match the serial loop bit for bit
  const Block b = make_block(10000, 5, 2, true);

  const ndc::ContingencyTable s =
      k::contingency_serial(b.rows, b.dim, b.labels, b.weights, b.coef, b.bias);
  const ndc::ContingencyTable p =
      k::contingency_parallel(b.rows, b.dim, b.labels, b.weights, b.coef, b.bias);
  CHECK(s.tp == p.tp);
  CHECK(s.fp == p.fp);
  CHECK(s.fn == p.fn);
  CHECK(s.tn == p.tn);
  CHECK(s.total() == static_cast<double>([&] {
          double t = 0;
          for (double w : b.weights) t += w;
          return t;
        }()));
}

TEST_CASE("serial and parallel flavors agree to rounding on general weights") {
  const Block b = make_block(20000, 6, 3, false);

  std::vector<double> out_s(b.n), out_p(b.n);
  k::decision_values_serial(b.rows, b.dim, b.coef, b.bias, out_s);
  k::decision_values_parallel(b.rows, b.dim, b.coef, b.bias, out_p);
  for (std::size_t i = 0; i < b.n; i += 501) {
    CHECK(out_s[i] == out_p[i]);  // per-row work is identical, no reduction
  }

  const ndc::ContingencyTable s =
      k::contingency_serial(b.rows, b.dim, b.labels, b.weights, b.coef, b.bias);
  const ndc::ContingencyTable p =
      k::contingency_parallel(b.rows, b.dim, b.labels, b.weights, b.coef, b.bias);
  CHECK(s.tp == doctest::Approx(p.tp).epsilon(1e-12));
  CHECK(s.fp == doctest::Approx(p.fp).epsilon(1e-12));
  CHECK(s.fn == doctest::Approx(p.fn).epsilon(1e-12));
  CHECK(s.tn == doctest::Approx(p.tn).epsilon(1e-12));

  const k::LossGrad gs = k::loss_grad_serial(b.rows, b.dim, b.labels, b.weights,
                                             static_cast<double>(b.n), k::LossKind::logistic,
                                             1e-3, b.coef, b.bias);
  const k::LossGrad gp = k::loss_grad_parallel(b.rows, b.dim, b.labels, b.weights,
                                               static_cast<double>(b.n), k::LossKind::logistic,
                                               1e-3, b.coef, b.bias);
  CHECK(gs.objective == doctest::Approx(gp.objective).epsilon(1e-12));
  CHECK(gs.grad_bias == doctest::Approx(gp.grad_bias).epsilon(1e-12));
  for (std::size_t j = 0; j < b.dim; ++j) {
    CHECK(gs.grad[j] == doctest::Approx(gp.grad[j]).epsilon(1e-12));
  }

  std::vector<double> d_s(b.n), d_p(b.n);
  k::sq_dist_serial(b.rows, b.dim, b.coef, d_s);
  k::sq_dist_parallel(b.rows, b.dim, b.coef, d_p);
  for (std::size_t i = 0; i < b.n; i += 997) CHECK(d_s[i] == d_p[i]);
}

TEST_CASE("contingency subset honors indices and weights") {
  const Block b = make_block(50, 3, 4, false);
  const std::vector<std::size_t> idx{3, 3, 10};
  const std::vector<double> w{1.0, 2.0, 5.0};
  const ndc::ContingencyTable t =
      k::contingency_subset(b.rows, b.dim, b.labels, idx, w, b.coef, b.bias);
  CHECK(t.total() == doctest::Approx(8.0));

  // duplicated index == summed weight
  const std::vector<std::size_t> idx2{3, 10};
  const std::vector<double> w2{3.0, 5.0};
  const ndc::ContingencyTable t2 =
      k::contingency_subset(b.rows, b.dim, b.labels, idx2, w2, b.coef, b.bias);
  CHECK(t.tp == doctest::Approx(t2.tp));
  CHECK(t.tn == doctest::Approx(t2.tn));
}

TEST_CASE("logistic loss and gradient match finite differences") {
  const Block b = make_block(40, 4, 5, false);
  const double wn = [&] {
    double t = 0;
    for (double w : b.weights) t += w;
    return t;
  }();

  for (const auto kind : {k::LossKind::logistic, k::LossKind::hinge}) {
    const k::LossGrad g =
        k::loss_grad(b.rows, b.dim, b.labels, b.weights, wn, kind, 1e-2, b.coef, b.bias);
    const double h = 1e-6;
    for (std::size_t j = 0; j < b.dim; ++j) {
      auto coef = b.coef;
      coef[j] += h;
      const double up =
          k::loss_grad(b.rows, b.dim, b.labels, b.weights, wn, kind, 1e-2, coef, b.bias)
              .objective;
      coef[j] -= 2 * h;
      const double dn =
          k::loss_grad(b.rows, b.dim, b.labels, b.weights, wn, kind, 1e-2, coef, b.bias)
              .objective;
      CHECK(g.grad[j] == doctest::Approx((up - dn) / (2 * h)).epsilon(1e-4));
    }
    const double up = k::loss_grad(b.rows, b.dim, b.labels, b.weights, wn, kind, 1e-2, b.coef,
                                   b.bias + h)
                          .objective;
    const double dn = k::loss_grad(b.rows, b.dim, b.labels, b.weights, wn, kind, 1e-2, b.coef,
                                   b.bias - h)
                          .objective;
    CHECK(g.grad_bias == doctest::Approx((up - dn) / (2 * h)).epsilon(1e-4));
  }
}

TEST_CASE("logistic objective is stable for extreme margins") {
  // one point, huge positive margin: loss ~ exp(-t) ~ 0, no overflow
  const std::vector<double> rows{1000.0};
  const std::vector<std::int8_t> y{+1};
  const std::vector<double> w{1.0};
  const std::vector<double> coef{1.0};
  const auto g =
      k::loss_grad(rows, 1, y, w, 1.0, k::LossKind::logistic, 0.0, coef, 0.0);
  CHECK(g.objective >= 0.0);
  CHECK(g.objective < 1e-300);

  // huge negative margin: loss ~ |t|, still finite
  const std::vector<std::int8_t> y2{-1};
  const auto g2 =
      k::loss_grad(rows, 1, y2, w, 1.0, k::LossKind::logistic, 0.0, coef, 0.0);
  CHECK(std::isfinite(g2.objective));
  CHECK(g2.objective == doctest::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("hinge ignores points beyond the margin") {
  // margin exactly 1: inactive (subgradient 0), margin 0.5: active
  const std::vector<double> rows{1.0, 0.5};
  const std::vector<std::int8_t> y{+1, +1};
  const std::vector<double> w{1.0, 1.0};
  const std::vector<double> coef{1.0};
  const auto g = k::loss_grad(rows, 1, y, w, 2.0, k::LossKind::hinge, 0.0, coef, 0.0);
  CHECK(g.objective == doctest::Approx(0.25));  // (0 + 0.5) / 2
  CHECK(g.grad[0] == doctest::Approx(-0.25));   // only the active point pulls
}
