#include "ndc/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ndc/metrics.hpp"
#include "ndc/rng.hpp"
#include "ndc/samplers.hpp"
#include "ndc/serialization.hpp"

namespace ndc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// score a trained model on the full dataset with both measures
void score_model(const Dataset& data, const LinearModel& model, BenchRow& row) {
  const ContingencyTable t = contingency(data, model.to_query());
  row.f1 = f1_score(t).value;
  row.mcc = mcc_score(t).value;
}

void append_num(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_row(std::string& out, const BenchRow& row) {
  out += row.strategy;
  out += ',';
  append_num(out, row.fraction);
  out += ',';
  out += row.rep < 0 ? "mean" : std::to_string(row.rep);
  out += ',';
  out += std::to_string(row.size);
  out += ',';
  append_num(out, row.construction_seconds);
  out += ',';
  append_num(out, row.train_seconds);
  out += ',';
  append_num(out, row.f1);
  out += ',';
  append_num(out, row.mcc);
  out += '\n';
}

}  // namespace

BenchReport run_bench(const Dataset& data, const BenchConfig& cfg) {
  if (cfg.strategies.empty()) throw std::invalid_argument("no strategies given");
  if (cfg.fractions.empty()) throw std::invalid_argument("no fractions given");
  if (cfg.reps == 0) throw std::invalid_argument("reps must be positive");
  for (double f : cfg.fractions) {
    if (!(f > 0.0) || f > 1.0) {
      throw std::invalid_argument("fractions must lie in (0, 1]");
    }
  }
  const auto& known = known_strategies();
  for (const auto& s : cfg.strategies) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw std::invalid_argument("unknown strategy '" + s + "'");
    }
  }
  cfg.train.validate();

  BenchReport rep;
  rep.n = data.size();
  rep.dim = data.dim();
  rep.positives = data.num_positive();
  rep.negatives = data.num_negative();
  rep.loss = to_string(cfg.train.loss);
  rep.reps = cfg.reps;
  rep.seed = cfg.seed;

  {
    rep.baseline.strategy = "full";
    rep.baseline.fraction = 1.0;
    rep.baseline.rep = -1;
    rep.baseline.size = data.size();
    const auto start = std::chrono::steady_clock::now();
    const LinearModel model = train(data, cfg.train);
    rep.baseline.train_seconds = seconds_since(start);
    score_model(data, model, rep.baseline);
  }

  std::uint64_t stream = 0;
  for (const auto& strategy : cfg.strategies) {
    for (double fraction : cfg.fractions) {
      const auto m = static_cast<std::size_t>(
          std::floor(fraction * static_cast<double>(data.size())));
      if (m == 0) {
        throw std::invalid_argument("fraction too small: empty coreset requested");
      }
      BenchRow mean;
      mean.strategy = strategy;
      mean.fraction = fraction;
      mean.rep = -1;
      for (std::size_t r = 0; r < cfg.reps; ++r) {
        BenchRow row;
        row.strategy = strategy;
        row.fraction = fraction;
        row.rep = static_cast<long>(r);

        auto start = std::chrono::steady_clock::now();
        const Coreset coreset =
            sample_by_strategy(data, strategy, m, derive_seed(cfg.seed, stream++));
        row.construction_seconds = seconds_since(start);
        row.size = coreset.size();

        start = std::chrono::steady_clock::now();
        const LinearModel model = train(data, coreset.view(), cfg.train);
        row.train_seconds = seconds_since(start);
        score_model(data, model, row);

        mean.size += row.size;
        mean.construction_seconds += row.construction_seconds;
        mean.train_seconds += row.train_seconds;
        mean.f1 += row.f1;
        mean.mcc += row.mcc;
        rep.rows.push_back(std::move(row));
      }
      const auto k = static_cast<double>(cfg.reps);
      mean.size = static_cast<std::size_t>(
          std::llround(static_cast<double>(mean.size) / k));
      mean.construction_seconds /= k;
      mean.train_seconds /= k;
      mean.f1 /= k;
      mean.mcc /= k;
      rep.means.push_back(std::move(mean));
    }
  }
  return rep;
}

std::string bench_report_csv(const BenchReport& report) {
  std::string out = "strategy,fraction,rep,size,construction_seconds,train_seconds,f1,mcc\n";
  append_row(out, report.baseline);
  for (const auto& row : report.rows) append_row(out, row);
  for (const auto& row : report.means) append_row(out, row);
  return out;
}

}  // namespace ndc
