#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ndc/classifiers.hpp"
#include "ndc/dataset.hpp"

namespace ndc {

struct BenchConfig {
  std::vector<std::string> strategies;
  std::vector<double> fractions;  // coreset size = floor(fraction * n)
  TrainConfig train;
  std::size_t reps = 5;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::string strategy;
  double fraction = 1.0;
  long rep = 0;  // -1 marks an aggregate row
  std::size_t size = 0;
  double construction_seconds = 0.0;  // coreset construction only
  double train_seconds = 0.0;
  double f1 = 0.0;   // model trained on the coreset, scored on the full data
  double mcc = 0.0;
};

struct BenchReport {
  std::string dataset_path;
  std::size_t n = 0, dim = 0, positives = 0, negatives = 0;
  std::string loss;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  BenchRow baseline;            // trained on the full data
  std::vector<BenchRow> rows;   // one per strategy x fraction x rep
  std::vector<BenchRow> means;  // one per strategy x fraction
};

// Full protocol: train on each coreset, evaluate on the full data, repeat,
// and aggregate; the baseline model trains on everything.
BenchReport run_bench(const Dataset& data, const BenchConfig& cfg);

std::string bench_report_csv(const BenchReport& report);

}  // namespace ndc
