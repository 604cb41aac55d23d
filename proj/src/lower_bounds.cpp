#include "ndc/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "ndc/numerics.hpp"
#include "ndc/rng.hpp"
#include "ndc/serialization.hpp"

namespace ndc {

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// all size-k subsets of {0..d-1} in lexicographic order
std::vector<std::vector<int>> enumerate_subsets(std::size_t d, std::size_t k) {
  std::vector<std::vector<int>> out;
  out.reserve(binomial(d, k));
  std::vector<int> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && cur[i] == static_cast<int>(d - k) + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (std::size_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

void check_dim(std::size_t d, std::size_t min_d) {
  if (d < min_d || d % 2 != 0) {
    throw std::invalid_argument("d must be an even number >= " + std::to_string(min_d));
  }
  if (d > kMaxLowerBoundDim) {
    throw std::invalid_argument("d capped at " + std::to_string(kMaxLowerBoundDim) +
                                " (instance size is d choose d/2)");
  }
}

// matched separator: 0 on the point's own coordinates, 1 elsewhere and on the
// constant slot, so only the omitted point's own +-1/2 margin depends on it
LinearQuery matched_query(const std::vector<int>& subset, std::size_t d) {
  LinearQuery q;
  q.augment = false;
  q.weights.assign(d + 1, 1.0);
  for (int c : subset) q.weights[static_cast<std::size_t>(c)] = 0.0;
  return q;
}

void verify_signs(const AdversarialInstance& inst, const std::vector<int>& expected_other) {
  // expected_other[q]: required sign of q under any other point's query
  const std::size_t n = inst.data.size();
  for (std::size_t p = 0; p < n; ++p) {
    const auto& w = inst.matched_queries[p].weights;
    for (std::size_t q = 0; q < n; ++q) {
      auto x = inst.data.features(q);
      double dv = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) dv += x[j] * w[j];
      const int got = predict_sign(dv);
      const int want = (q == p) ? inst.data.label(p) : expected_other[q];
      if (got != want) {
        throw std::logic_error("instance self-check failed at point " + std::to_string(q) +
                               " under query " + std::to_string(p));
      }
    }
  }
}

}  // namespace

AdversarialInstance gen_f1_instance(std::size_t d, LabelRule rule) {
  check_dim(d, 2);
  auto subsets = enumerate_subsets(d, d / 2);
  const std::size_t n = subsets.size();

  AdversarialInstance inst;
  inst.d = d;
  inst.mode = Mode::f1;
  inst.label_rule = rule;
  inst.subsets = subsets;

  Dataset::Builder b(d + 1);
  std::vector<double> x(d + 1);
  std::vector<int> expected_other(n);
  for (std::size_t p = 0; p < n; ++p) {
    const int y = (rule == LabelRule::all_positive || p % 2 == 0) ? +1 : -1;
    std::fill(x.begin(), x.end(), 0.0);
    for (int c : subsets[p]) x[static_cast<std::size_t>(c)] = -y;
    x[d] = 0.5 * y;
    b.add(x, y);
    inst.matched_queries.push_back(matched_query(subsets[p], d));
    expected_other[p] = -y;
  }
  inst.data = std::move(b).build();
  verify_signs(inst, expected_other);
  return inst;
}

AdversarialInstance gen_mcc_instance(std::size_t d) {
  check_dim(d, 4);
  auto subsets = enumerate_subsets(d, d / 2);
  const std::size_t n = subsets.size();

  AdversarialInstance inst;
  inst.d = d;
  inst.mode = Mode::mcc;
  inst.label_rule = LabelRule::all_positive;  // unused in this mode
  inst.subsets = subsets;
  inst.x_signs.resize(n);

  // first half of the enumeration is the positive class; within each class
  // the first floor(half) points get forced sign +label, the rest -label
  std::vector<int> labels(n);
  for (std::size_t p = 0; p < n; ++p) labels[p] = (p < n / 2) ? +1 : -1;
  const std::size_t pos_flip = n / 2 / 2;
  const std::size_t neg_flip = (n - n / 2) / 2;
  std::size_t pos_seen = 0, neg_seen = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (labels[p] > 0) {
      inst.x_signs[p] = (pos_seen < pos_flip) ? labels[p] : -labels[p];
      ++pos_seen;
    } else {
      inst.x_signs[p] = (neg_seen < neg_flip) ? labels[p] : -labels[p];
      ++neg_seen;
    }
  }

  Dataset::Builder b(d + 1);
  std::vector<double> x(d + 1);
  for (std::size_t p = 0; p < n; ++p) {
    std::fill(x.begin(), x.end(), 0.0);
    for (int c : subsets[p]) x[static_cast<std::size_t>(c)] = inst.x_signs[p];
    x[d] = 0.5 * labels[p];
    b.add(x, labels[p]);
    inst.matched_queries.push_back(matched_query(subsets[p], d));
  }
  inst.data = std::move(b).build();
  verify_signs(inst, inst.x_signs);
  return inst;
}

CollapseRecord demonstrate_collapse(const AdversarialInstance& inst, std::size_t omit) {
  const std::size_t n = inst.data.size();
  if (omit >= n) throw std::out_of_range("omitted index out of range");
  if (inst.mode == Mode::f1 && inst.data.label(omit) != +1) {
    throw std::invalid_argument("F1 collapse needs a positive omitted point");
  }

  std::vector<std::size_t> rest;
  rest.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != omit) rest.push_back(i);
  }
  const std::vector<double> unit(rest.size(), 1.0);

  const auto& q = inst.matched_queries[omit];
  const ContingencyTable full = contingency(inst.data, q);
  const ContingencyTable part = contingency(inst.data, q, {rest, unit});

  CollapseRecord rec;
  rec.omitted = omit;
  if (inst.mode == Mode::f1) {
    rec.full_score = f1_score(full).value;
    rec.omitted_score = f1_score(part).value;
    rec.full_numerator = full.tp;
    rec.omitted_numerator = part.tp;
  } else {
    rec.full_score = mcc_score(full).value;
    rec.omitted_score = mcc_score(part).value;
    rec.full_numerator = full.tp * full.tn - full.fp * full.fn;
    rec.omitted_numerator = part.tp * part.tn - part.fp * part.fn;
  }
  return rec;
}

SweepReport coreset_failure_sweep(const AdversarialInstance& inst, const std::string& strategy,
                                  std::size_t m, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = inst.data.size();
  if (m == 0 || m > n) throw std::invalid_argument("sweep size must be in [1, n]");
  if (trials == 0) throw std::invalid_argument("need at least one trial");

  // full scores once; only queries with a strictly positive full score count
  std::vector<double> full_scores(n);
  for (std::size_t p = 0; p < n; ++p) {
    const ContingencyTable t = contingency(inst.data, inst.matched_queries[p]);
    full_scores[p] =
        inst.mode == Mode::f1 ? f1_score(t).value : mcc_score(t).value;
  }

  // per-point selection masses for without-replacement draws
  std::vector<double> mass(n, 1.0);
  if (strategy == "uniform" || strategy == "stratified-uniform") {
    // equal within stratum; stratified handled by quota below
  } else if (strategy == "leverage") {
    numerics::Matrix a(static_cast<Eigen::Index>(n),
                       static_cast<Eigen::Index>(inst.data.dim()));
    for (std::size_t i = 0; i < n; ++i) {
      auto x = inst.data.features(i);
      for (std::size_t j = 0; j < x.size(); ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[j];
      }
    }
    mass = numerics::leverage_scores(a);
  } else if (strategy == "lewis") {
    numerics::Matrix a(static_cast<Eigen::Index>(n),
                       static_cast<Eigen::Index>(inst.data.dim()));
    for (std::size_t i = 0; i < n; ++i) {
      auto x = inst.data.features(i);
      for (std::size_t j = 0; j < x.size(); ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[j];
      }
    }
    mass = numerics::lewis_weights(a);
  } else if (strategy == "kmeans") {
    const std::size_t dim = inst.data.dim();
    std::vector<double> mean(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto x = inst.data.features(i);
      for (std::size_t j = 0; j < dim; ++j) mean[j] += x[j];
    }
    for (double& v : mean) v /= static_cast<double>(n);
    double total = 0.0;
    std::vector<double> d2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto x = inst.data.features(i);
      for (std::size_t j = 0; j < dim; ++j) d2[i] += (x[j] - mean[j]) * (x[j] - mean[j]);
      total += d2[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      mass[i] = total > 0.0 ? 0.5 / n + 0.5 * d2[i] / total : 1.0;
    }
  } else {
    throw std::invalid_argument("unknown strategy '" + strategy + "'");
  }

  SweepReport rep;
  rep.strategy = strategy;
  rep.m = m;
  rep.trials = trials;
  rep.per_trial_fraction.reserve(trials);

  std::vector<std::size_t> chosen;
  std::vector<char> present(n);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, trial));
    chosen.clear();

    if (strategy == "stratified-uniform") {
      const double share = static_cast<double>(m) *
                           static_cast<double>(inst.data.num_positive()) /
                           static_cast<double>(n);
      std::size_t pos_quota = static_cast<std::size_t>(std::floor(share + 0.5));
      pos_quota = std::min(pos_quota, inst.data.num_positive());
      std::size_t neg_quota = m - pos_quota;
      if (neg_quota > inst.data.num_negative()) {
        pos_quota += neg_quota - inst.data.num_negative();
        neg_quota = inst.data.num_negative();
      }
      auto draw_stratum = [&](const std::vector<std::size_t>& stratum, std::size_t k) {
        std::vector<std::size_t> pool = stratum;
        for (std::size_t i = 0; i < k; ++i) {
          std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
          std::swap(pool[i], pool[j]);
          chosen.push_back(pool[i]);
        }
      };
      draw_stratum(inst.data.positives(), pos_quota);
      draw_stratum(inst.data.negatives(), neg_quota);
    } else {
      // exponential race: the m smallest -log(u)/mass win; zero-mass rows
      // only fill leftover slots
      std::vector<std::pair<double, std::size_t>> keys(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = 1.0 - rng.real();
        const double key = mass[i] > 0.0 ? -std::log(u) / mass[i]
                                         : std::numeric_limits<double>::infinity();
        keys[i] = {key, i};
      }
      std::nth_element(keys.begin(), keys.begin() + m - 1, keys.end());
      for (std::size_t k = 0; k < m; ++k) chosen.push_back(keys[k].second);
    }

    std::fill(present.begin(), present.end(), 0);
    for (std::size_t i : chosen) present[i] = 1;

    const std::vector<double> unit(chosen.size(), 1.0);
    std::size_t collapsed = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if (present[p] || full_scores[p] <= 0.0) continue;
      const ContingencyTable t =
          contingency(inst.data, inst.matched_queries[p], {chosen, unit});
      const double score =
          inst.mode == Mode::f1 ? f1_score(t).value : mcc_score(t).value;
      if (score == 0.0) ++collapsed;
    }
    rep.per_trial_fraction.push_back(static_cast<double>(collapsed) /
                                     static_cast<double>(n));
  }
  rep.mean_collapse_fraction =
      std::accumulate(rep.per_trial_fraction.begin(), rep.per_trial_fraction.end(), 0.0) /
      static_cast<double>(trials);
  return rep;
}

void export_instance(const AdversarialInstance& inst, const std::string& data_path,
                     const std::string& sidecar_path) {
  {
    std::ofstream out(data_path);
    if (!out) throw std::runtime_error("cannot write '" + data_path + "'");
    save_sparse_text(inst.data, out);
  }
  json j;
  j["mode"] = to_string(inst.mode);
  j["d"] = inst.d;
  j["n"] = inst.data.size();
  if (inst.mode == Mode::f1) {
    j["label_rule"] =
        inst.label_rule == LabelRule::all_positive ? "all_positive" : "alternating";
  }
  j["subsets"] = inst.subsets;  // 0-based coordinates
  std::vector<int> labels(inst.data.size());
  for (std::size_t i = 0; i < inst.data.size(); ++i) labels[i] = inst.data.label(i);
  j["labels"] = labels;
  if (!inst.x_signs.empty()) j["x_signs"] = inst.x_signs;
  json queries = json::array();
  for (const auto& q : inst.matched_queries) queries.push_back(to_json(q));
  j["matched_queries"] = queries;
  save_json_file(j, sidecar_path);
}

}  // namespace ndc
