#include "ndc/guarantees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ndc/classifiers.hpp"
#include "ndc/kernels.hpp"
#include "ndc/rng.hpp"

namespace ndc {

bool f1_membership(const ContingencyTable& t, double gamma, double c, double epsilon) {
  const auto f1 = f1_score(t);
  if (f1.degenerate || f1.value < gamma) return false;
  const double n = t.total();
  const double low = n * (1.0 - c * epsilon) / (2.0 * c * (1.0 - epsilon));
  const double high = n * (1.0 + c * epsilon) / (2.0 * c * (1.0 + epsilon));
  return t.tp >= std::max(low, high);
}

bool mcc_membership(const ContingencyTable& t, double gamma) {
  const double floor = gamma * t.total();
  return t.tp >= floor && t.tn >= floor;
}

SlackCaps mcc_slack_caps(double epsilon, double gamma, double t_prime) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(epsilon < gamma)) {
    throw std::invalid_argument("slack caps need epsilon < gamma");
  }
  if (!(t_prime > 0.0 && t_prime < 1.0)) {
    throw std::invalid_argument("actual-positive rate must be strictly inside (0,1)");
  }
  const double root = std::sqrt(t_prime * (1.0 - t_prime) * gamma);
  const double ratio = epsilon / gamma;
  SlackCaps caps;
  caps.lower = (1.0 / gamma) / ((1.0 + ratio) * root);
  caps.upper = (1.0 / gamma) / ((1.0 - ratio) * root);
  return caps;
}

namespace {

struct SplitQuery {
  std::vector<double> coef;
  double bias = 0.0;
};

SplitQuery split_query(const LinearQuery& q, std::size_t dim) {
  SplitQuery s;
  if (q.augment) {
    if (q.weights.size() != dim + 1) throw std::invalid_argument("query/data dimension mismatch");
    s.coef.assign(q.weights.begin(), q.weights.end() - 1);
    s.bias = q.weights.back();
  } else {
    if (q.weights.size() != dim) throw std::invalid_argument("query/data dimension mismatch");
    s.coef = q.weights;
    s.bias = 0.0;
  }
  return s;
}

ContingencyTable full_table(const Dataset& data, const SplitQuery& q) {
  return kernels::contingency(data.feature_matrix(), data.dim(), data.labels(),
                              data.weights(), q.coef, q.bias);
}

// coreset rows gathered once so every query streams a dense block
struct GatheredCoreset {
  std::vector<double> rows;
  std::vector<std::int8_t> labels;
  std::vector<double> weights;
  std::size_t size = 0;
};

GatheredCoreset gather(const Dataset& data, const Coreset& c) {
  GatheredCoreset g;
  g.size = c.indices.size();
  g.rows.resize(g.size * data.dim());
  g.labels.resize(g.size);
  g.weights = c.weights;
  for (std::size_t k = 0; k < g.size; ++k) {
    auto x = data.features(c.indices[k]);
    std::copy(x.begin(), x.end(), g.rows.begin() + k * data.dim());
    g.labels[k] = static_cast<std::int8_t>(data.label(c.indices[k]));
  }
  return g;
}

void check_verify_inputs(const Dataset& data, const QuerySet& queries,
                         const SampleSizePlan& plan, const VerifyConfig& cfg, Mode mode) {
  if (queries.mode != mode || plan.mode != mode) {
    throw std::invalid_argument("query set / plan mode mismatch");
  }
  if (queries.queries.empty()) throw std::invalid_argument("empty query set");
  if (cfg.draws == 0) throw std::invalid_argument("need at least one draw");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  if (plan.inputs.y_pos != data.num_positive() || plan.inputs.y_neg != data.num_negative()) {
    throw std::invalid_argument("plan was sized for a different dataset");
  }
  if (std::abs(queries.epsilon - plan.inputs.epsilon) > 1e-12) {
    throw std::invalid_argument("query set and plan disagree on epsilon");
  }
}

}  // namespace

QuerySet generate_query_set(const Dataset& data, const QueryGenConfig& cfg) {
  if (cfg.count == 0) throw std::invalid_argument("query count must be >= 1");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
  if (cfg.mode == Mode::f1) {
    if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) {
      throw std::invalid_argument("gamma must be in [0,1]");
    }
    if (!(cfg.c > 0.0)) throw std::invalid_argument("c must be positive");
  } else if (!(cfg.gamma >= 0.0 && cfg.gamma <= 0.5)) {
    throw std::invalid_argument("mcc gamma must be in [0,0.5]");
  }

  const std::size_t dim = data.dim();
  const std::size_t max_attempts = cfg.max_attempts ? cfg.max_attempts : 400 * cfg.count;

  TrainConfig base_cfg;
  base_cfg.epochs = 150;
  base_cfg.step_size = 0.5;
  base_cfg.l2_reg = 1e-4;
  base_cfg.seed = cfg.seed;
  const LinearModel base = train(data, base_cfg);
  std::vector<double> theta = base.weights;
  theta.push_back(base.bias);
  double theta_norm = 0.0;
  for (double v : theta) theta_norm += v * v;
  theta_norm = std::sqrt(theta_norm);
  if (theta_norm == 0.0) theta_norm = 1.0;

  Rng rng(derive_seed(cfg.seed, 0x71c3));
  std::vector<double> dvs(data.size());

  QuerySet qs;
  qs.mode = cfg.mode;
  qs.gamma = cfg.gamma;
  qs.c = cfg.c;
  qs.epsilon = cfg.epsilon;

  std::size_t attempts = 0;
  while (qs.queries.size() < cfg.count && attempts < max_attempts) {
    ++attempts;
    LinearQuery cand;
    cand.augment = true;
    if (attempts % 2 == 1) {
      // jitter the trained separator
      const double r = std::exp(std::log(0.02) + rng.real() * (std::log(0.5) - std::log(0.02)));
      auto g = rng.unit_vector(dim + 1);
      cand.weights.resize(dim + 1);
      for (std::size_t j = 0; j <= dim; ++j) cand.weights[j] = theta[j] + r * theta_norm * g[j];
    } else {
      // fresh direction, bias chosen at a random decision-value quantile
      auto u = rng.unit_vector(dim);
      kernels::decision_values(data.feature_matrix(), dim, u, 0.0, dvs);
      const double qfrac = 0.15 + 0.7 * rng.real();
      std::vector<double> tmp = dvs;
      const std::size_t k = std::min<std::size_t>(
          static_cast<std::size_t>(qfrac * static_cast<double>(tmp.size())), tmp.size() - 1);
      std::nth_element(tmp.begin(), tmp.begin() + k, tmp.end());
      cand.weights = u;
      cand.weights.push_back(-tmp[k]);
    }

    const SplitQuery sq = split_query(cand, dim);
    const ContingencyTable t = full_table(data, sq);
    const bool ok = cfg.mode == Mode::f1 ? f1_membership(t, cfg.gamma, cfg.c, cfg.epsilon)
                                         : mcc_membership(t, cfg.gamma);
    if (!ok) continue;
    if (cfg.mode == Mode::f1) {
      // implied floor on the true-positive mass for any accepted query
      const double floor =
          cfg.gamma * static_cast<double>(data.num_positive()) / (2.0 - cfg.gamma);
      if (t.tp < floor - 1e-9) {
        throw std::logic_error("accepted query violates the implied tp floor");
      }
    }
    qs.queries.push_back(std::move(cand));
  }
  qs.acceptance_rate = attempts ? static_cast<double>(qs.queries.size()) /
                                      static_cast<double>(attempts)
                                : 0.0;
  if (qs.queries.size() < cfg.count) {
    throw std::runtime_error("could not fill the query family: accepted " +
                             std::to_string(qs.queries.size()) + " of " +
                             std::to_string(cfg.count) + " after " + std::to_string(attempts) +
                             " candidates (acceptance rate " +
                             std::to_string(qs.acceptance_rate) + ")");
  }
  return qs;
}

GuaranteeReport verify_f1(const Dataset& data, const QuerySet& queries,
                          const SampleSizePlan& plan, const VerifyConfig& cfg) {
  check_verify_inputs(data, queries, plan, cfg, Mode::f1);
  const std::size_t nq = queries.queries.size();
  const double bound = queries.c * queries.epsilon;

  std::vector<SplitQuery> split;
  split.reserve(nq);
  std::vector<double> full(nq);
  for (std::size_t qi = 0; qi < nq; ++qi) {
    split.push_back(split_query(queries.queries[qi], data.dim()));
    const ContingencyTable t = full_table(data, split.back());
    if (!f1_membership(t, queries.gamma, queries.c, queries.epsilon)) {
      throw std::invalid_argument("query " + std::to_string(qi) + " is outside the family");
    }
    full[qi] = f1_score(t).value;
  }

  GuaranteeReport rep;
  rep.mode = Mode::f1;
  rep.gamma = queries.gamma;
  rep.epsilon = queries.epsilon;
  rep.delta = cfg.delta;
  rep.c = queries.c;
  rep.plan = plan;
  rep.draws = cfg.draws;
  rep.num_queries = nq;
  rep.budget = 3.0 * cfg.delta;
  rep.acceptance_rate = queries.acceptance_rate;
  rep.queries.resize(nq);
  rep.draw_max_violation.assign(cfg.draws, 0.0);

  std::vector<double> mean_est(nq, 0.0), worst(nq, 0.0);
  for (std::size_t k = 0; k < cfg.draws; ++k) {
    const Coreset cs =
        stratified_uniform(data, plan, derive_seed(cfg.seed, k), cfg.exhaustive);
    const GatheredCoreset g = gather(data, cs);
    double draw_worst = 0.0;
    for (std::size_t qi = 0; qi < nq; ++qi) {
      const ContingencyTable t = kernels::contingency(g.rows, data.dim(), g.labels, g.weights,
                                                      split[qi].coef, split[qi].bias);
      const double est = f1_score(t).value;
      const double rel = std::abs(est - full[qi]) / full[qi];
      mean_est[qi] += est;
      worst[qi] = std::max(worst[qi], rel);
      draw_worst = std::max(draw_worst, rel);
    }
    rep.draw_max_violation[k] = draw_worst;
    if (draw_worst > bound) ++rep.failed_draws;
  }

  for (std::size_t qi = 0; qi < nq; ++qi) {
    auto& out = rep.queries[qi];
    out.full_value = full[qi];
    out.mean_estimate = mean_est[qi] / static_cast<double>(cfg.draws);
    out.worst_violation = worst[qi];
    out.bound_low = bound;
    out.bound_high = bound;
    out.pass = worst[qi] <= bound;
  }
  rep.failure_rate = static_cast<double>(rep.failed_draws) / static_cast<double>(cfg.draws);
  rep.pass = rep.failure_rate <= rep.budget;
  return rep;
}

GuaranteeReport verify_mcc(const Dataset& data, const QuerySet& queries,
                           const SampleSizePlan& plan, const VerifyConfig& cfg) {
  check_verify_inputs(data, queries, plan, cfg, Mode::mcc);
  if (!(queries.gamma > 0.0)) throw std::invalid_argument("mcc verification needs gamma > 0");
  const std::size_t nq = queries.queries.size();
  const double ratio = queries.epsilon / queries.gamma;

  std::vector<SplitQuery> split;
  split.reserve(nq);
  std::vector<double> full(nq), band_low(nq), band_high(nq);
  for (std::size_t qi = 0; qi < nq; ++qi) {
    split.push_back(split_query(queries.queries[qi], data.dim()));
    const ContingencyTable t = full_table(data, split.back());
    if (!mcc_membership(t, queries.gamma)) {
      throw std::invalid_argument("query " + std::to_string(qi) + " is outside the family");
    }
    full[qi] = mcc_score(t).value;
    const SlackCaps caps =
        mcc_slack_caps(queries.epsilon, queries.gamma, t.actual_positive_rate());
    band_low[qi] = full[qi] / (1.0 + ratio) - 2.0 * queries.epsilon * caps.lower;
    band_high[qi] = full[qi] / (1.0 - ratio) + 2.0 * queries.epsilon * caps.upper;
  }

  GuaranteeReport rep;
  rep.mode = Mode::mcc;
  rep.gamma = queries.gamma;
  rep.epsilon = queries.epsilon;
  rep.delta = cfg.delta;
  rep.c = queries.c;
  rep.plan = plan;
  rep.draws = cfg.draws;
  rep.num_queries = nq;
  rep.budget = 4.0 * cfg.delta;
  rep.acceptance_rate = queries.acceptance_rate;
  rep.queries.resize(nq);
  rep.draw_max_violation.assign(cfg.draws, 0.0);

  std::vector<double> mean_est(nq, 0.0);
  std::vector<double> worst(nq, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < cfg.draws; ++k) {
    const Coreset cs =
        stratified_uniform(data, plan, derive_seed(cfg.seed, k), cfg.exhaustive);
    const GatheredCoreset g = gather(data, cs);
    double draw_worst = -std::numeric_limits<double>::infinity();
    for (std::size_t qi = 0; qi < nq; ++qi) {
      const ContingencyTable t = kernels::contingency(g.rows, data.dim(), g.labels, g.weights,
                                                      split[qi].coef, split[qi].bias);
      const double est = mcc_score(t).value;
      // signed distance outside the band; <= 0 means inside
      const double excess = std::max(band_low[qi] - est, est - band_high[qi]);
      mean_est[qi] += est;
      worst[qi] = std::max(worst[qi], excess);
      draw_worst = std::max(draw_worst, excess);
    }
    rep.draw_max_violation[k] = draw_worst;
    if (draw_worst > 0.0) ++rep.failed_draws;
  }

  for (std::size_t qi = 0; qi < nq; ++qi) {
    auto& out = rep.queries[qi];
    out.full_value = full[qi];
    out.mean_estimate = mean_est[qi] / static_cast<double>(cfg.draws);
    out.worst_violation = worst[qi];
    out.bound_low = band_low[qi];
    out.bound_high = band_high[qi];
    out.pass = worst[qi] <= 0.0;
  }
  rep.failure_rate = static_cast<double>(rep.failed_draws) / static_cast<double>(cfg.draws);
  rep.pass = rep.failure_rate <= rep.budget;
  return rep;
}

CountDeviationStats per_count_deviations(const Dataset& data, const LinearQuery& q,
                                         const SampleSizePlan& plan, std::size_t draws,
                                         std::uint64_t seed) {
  if (draws == 0) throw std::invalid_argument("need at least one draw");
  const SplitQuery sq = split_query(q, data.dim());
  const ContingencyTable exact = full_table(data, sq);

  const double y_pos = static_cast<double>(data.num_positive());
  const double y_neg = static_cast<double>(data.num_negative());
  const double eps = plan.inputs.epsilon;
  const double pos_bound = eps * y_pos;
  const double neg_bound = eps * (y_pos + y_neg);

  std::size_t tp_ok = 0, fn_ok = 0, fp_ok = 0, tn_ok = 0;
  for (std::size_t k = 0; k < draws; ++k) {
    const Coreset cs = stratified_uniform(data, plan, derive_seed(seed, k));
    const GatheredCoreset g = gather(data, cs);
    const ContingencyTable t = kernels::contingency(g.rows, data.dim(), g.labels, g.weights,
                                                    sq.coef, sq.bias);
    if (std::abs(t.tp - exact.tp) <= pos_bound) ++tp_ok;
    if (std::abs(t.fn - exact.fn) <= pos_bound) ++fn_ok;
    if (std::abs(t.fp - exact.fp) <= neg_bound) ++fp_ok;
    if (std::abs(t.tn - exact.tn) <= neg_bound) ++tn_ok;
  }

  CountDeviationStats stats;
  stats.draws = draws;
  const double d = static_cast<double>(draws);
  stats.tp_ok = tp_ok / d;
  stats.fn_ok = fn_ok / d;
  stats.fp_ok = fp_ok / d;
  stats.tn_ok = tn_ok / d;
  return stats;
}

}  // namespace ndc
