// Times the serial kernel references against their OpenMP counterparts on a
// synthetic block and prints a small table. Also cross-checks that both
// flavors agree, so the ctest smoke entry fails loudly if they drift apart.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "ndc/kernels.hpp"
#include "ndc/rng.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < reps; ++r) {
    const auto start = clock_type::now();
    fn();
    best = std::min(best,
                    std::chrono::duration<double>(clock_type::now() - start).count());
  }
  return best;
}

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
  return std::string(buf, res.ptr);
}

void print_row(const std::string& name, double serial_s, double parallel_s) {
  std::cout << name << "  serial=" << fmt(serial_s) << "s  parallel=" << fmt(parallel_s)
            << "s  speedup=" << fmt(serial_s / parallel_s) << "x\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 200000;
  std::size_t dim = 32;
  int reps = 3;
  if (argc > 1) n = std::strtoull(argv[1], nullptr, 10);
  if (argc > 2) dim = std::strtoull(argv[2], nullptr, 10);
  if (argc > 3) reps = std::atoi(argv[3]);

  ndc::Rng rng(12345);
  std::vector<double> rows(n * dim);
  for (double& v : rows) v = rng.gaussian();
  std::vector<std::int8_t> labels(n);
  for (auto& l : labels) l = rng.real() < 0.5 ? -1 : +1;
  std::vector<double> weights(n, 1.0);
  std::vector<double> coef = rng.gaussian_vector(dim);
  const double bias = 0.1;

  int failures = 0;
  auto expect_close = [&](double a, double b, const char* what) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    if (!(std::abs(a - b) <= 1e-9 * scale)) {
      std::cerr << "mismatch in " << what << ": " << a << " vs " << b << '\n';
      ++failures;
    }
  };

  {
    std::vector<double> out_s(n), out_p(n);
    const double ts = time_best_of(
        reps, [&] { ndc::kernels::decision_values_serial(rows, dim, coef, bias, out_s); });
    const double tp = time_best_of(
        reps, [&] { ndc::kernels::decision_values_parallel(rows, dim, coef, bias, out_p); });
    for (std::size_t i = 0; i < n; i += n / 97 + 1) {
      expect_close(out_s[i], out_p[i], "decision_values");
    }
    print_row("decision_values", ts, tp);
  }

  {
    ndc::ContingencyTable t_s, t_p;
    const double ts = time_best_of(reps, [&] {
      t_s = ndc::kernels::contingency_serial(rows, dim, labels, weights, coef, bias);
    });
    const double tp = time_best_of(reps, [&] {
      t_p = ndc::kernels::contingency_parallel(rows, dim, labels, weights, coef, bias);
    });
    expect_close(t_s.tp, t_p.tp, "contingency.tp");
    expect_close(t_s.fp, t_p.fp, "contingency.fp");
    expect_close(t_s.fn, t_p.fn, "contingency.fn");
    expect_close(t_s.tn, t_p.tn, "contingency.tn");
    print_row("contingency    ", ts, tp);
  }

  {
    ndc::kernels::LossGrad g_s, g_p;
    const double wn = static_cast<double>(n);
    const double ts = time_best_of(reps, [&] {
      g_s = ndc::kernels::loss_grad_serial(rows, dim, labels, weights, wn,
                                           ndc::kernels::LossKind::logistic, 1e-4, coef,
                                           bias);
    });
    const double tp = time_best_of(reps, [&] {
      g_p = ndc::kernels::loss_grad_parallel(rows, dim, labels, weights, wn,
                                             ndc::kernels::LossKind::logistic, 1e-4, coef,
                                             bias);
    });
    expect_close(g_s.objective, g_p.objective, "loss_grad.objective");
    expect_close(g_s.grad_bias, g_p.grad_bias, "loss_grad.grad_bias");
    for (std::size_t j = 0; j < dim; ++j) expect_close(g_s.grad[j], g_p.grad[j], "loss_grad.grad");
    print_row("loss_grad      ", ts, tp);
  }

  {
    std::vector<double> out_s(n), out_p(n);
    const std::vector<double> center = coef;
    const double ts = time_best_of(
        reps, [&] { ndc::kernels::sq_dist_serial(rows, dim, center, out_s); });
    const double tp = time_best_of(
        reps, [&] { ndc::kernels::sq_dist_parallel(rows, dim, center, out_p); });
    for (std::size_t i = 0; i < n; i += n / 97 + 1) {
      expect_close(out_s[i], out_p[i], "sq_dist");
    }
    print_row("sq_dist        ", ts, tp);
  }

  if (failures > 0) {
    std::cerr << failures << " kernel mismatches\n";
    return 1;
  }
  std::cout << "all kernel pairs agree\n";
  return 0;
}
