// Command-line front end: dataset preparation, coreset construction with
// timing, train-on-coreset benchmarking, guarantee verification, and
// hard-instance demonstrations. Reports are deterministic for a fixed
// (inputs, seed) pair except for wall-clock timing fields.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ndc/bench.hpp"
#include "ndc/classifiers.hpp"
#include "ndc/dataset.hpp"
#include "ndc/guarantees.hpp"
#include "ndc/lower_bounds.hpp"
#include "ndc/metrics.hpp"
#include "ndc/rng.hpp"
#include "ndc/samplers.hpp"
#include "ndc/serialization.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct DataArgs {
  std::string path;
  std::string format = "csv";  // csv | sparse
  std::string label_column = "label";
  std::string positive_value = "1";
  bool no_header = false;
  std::string delimiter = ",";
};

void add_data_flags(CLI::App& cmd, DataArgs& args) {
  cmd.add_option("--data", args.path, "dataset path, or - for standard input")->required();
  cmd.add_option("--format", args.format, "input format")
      ->check(CLI::IsMember({"csv", "sparse"}))
      ->capture_default_str();
  cmd.add_option("--label-column", args.label_column,
                 "CSV label column (header name or 0-based index)")
      ->capture_default_str();
  cmd.add_option("--positive-value", args.positive_value, "CSV label value mapped to +1")
      ->capture_default_str();
  cmd.add_flag("--no-header", args.no_header, "CSV input has no header row");
  cmd.add_option("--delimiter", args.delimiter, "CSV field delimiter")
      ->check(CLI::Validator(
          [](std::string& s) {
            return s.size() == 1 ? std::string{} : std::string{"expected one character"};
          },
          "CHAR"))
      ->capture_default_str();
}

ndc::Dataset load_data(const DataArgs& args) {
  const bool from_stdin = args.path == "-";
  if (args.format == "sparse") {
    if (from_stdin) return ndc::load_sparse_text(std::cin);
    return ndc::load_sparse_text_file(args.path);
  }
  ndc::CsvOptions opt;
  opt.label_column = args.label_column;
  opt.positive_value = args.positive_value;
  opt.has_header = !args.no_header;
  opt.delimiter = args.delimiter[0];
  if (from_stdin) return ndc::load_csv(std::cin, opt);
  return ndc::load_csv_file(args.path, opt);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

// report goes to --out when given, otherwise to standard output
void emit_json(const ndc::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    ndc::save_json_file(j, out_path);
  }
}

void print_dataset_summary(const ndc::Dataset& data) {
  std::cout << "n=" << data.size() << " dim=" << data.dim()
            << " positives=" << data.num_positive()
            << " negatives=" << data.num_negative() << '\n';
}

// ---- subcommand state ----

struct IngestArgs {
  DataArgs data;
  std::size_t subsample = 0;  // 0: keep everything
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string out_format = "csv";
};

struct SampleArgs {
  DataArgs data;
  std::string strategy = "stratified-uniform";
  double fraction = 0.0;
  std::string plan_mode;  // f1 | mcc; empty means fraction mode
  double gamma = 0.5;
  double epsilon = 0.1;
  double delta = 0.1;
  std::size_t d = 1;
  double const_factor = 1.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool exhaustive = false;
  std::string out;
};

struct TrainArgs {
  DataArgs data;
  std::string coreset_path;
  std::string loss = "logistic";
  double l2_reg = 1e-4;
  std::size_t epochs = 200;
  double step_size = 0.5;
  std::string out;
};

struct EvalArgs {
  DataArgs data;
  std::string model_path;
  std::string coreset_path;
  std::string out;
};

struct BenchArgs {
  DataArgs data;
  std::vector<std::string> strategies;
  std::vector<double> fractions;
  std::string loss = "logistic";
  double l2_reg = 1e-4;
  std::size_t epochs = 200;
  double step_size = 0.5;
  std::size_t reps = 5;
  std::uint64_t seed = 0;
  std::string out;
  std::string out_format = "json";
};

struct VerifyArgs {
  DataArgs data;
  std::string mode = "f1";
  double gamma = 0.5;
  double c = 2.0;
  double epsilon = 0.1;
  double delta = 0.1;
  std::size_t d = 1;
  double const_factor = 1.0;
  std::size_t queries = 50;
  std::size_t draws = 50;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  std::string out;
};

struct LowerBoundArgs {
  std::string mode = "f1";
  std::size_t d = 4;
  std::string rule = "all-positive";
  std::string sweep_strategy;
  std::size_t sweep_m = 0;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string export_data;
  std::string export_sidecar;
  std::string out;
  bool quiet = false;
};

int run_ingest(const IngestArgs& a) {
  ndc::Dataset data = load_data(a.data);
  if (a.subsample > 0) {
    if (!a.seed_set) throw CLI::ValidationError("--subsample needs --seed");
    data = ndc::stratified_subsample(data, a.subsample, a.seed);
  }
  print_dataset_summary(data);
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write '" + a.out + "'");
    if (a.out_format == "csv") {
      ndc::save_csv(data, out);
    } else {
      ndc::save_sparse_text(data, out);
    }
  }
  return kExitOk;
}

int run_sample(const SampleArgs& a) {
  if (!a.exhaustive && !a.seed_set) throw CLI::ValidationError("sampling needs --seed");
  if (a.plan_mode.empty() == (a.fraction == 0.0)) {
    throw CLI::ValidationError("give exactly one of --fraction and --plan");
  }
  const ndc::Dataset data = load_data(a.data);

  ndc::Coreset coreset;
  double elapsed = 0.0;
  if (!a.plan_mode.empty()) {
    const ndc::Mode mode = ndc::mode_from_string(a.plan_mode);
    const ndc::SampleSizePlan plan =
        mode == ndc::Mode::f1
            ? ndc::f1_sample_size(a.gamma, a.epsilon, a.delta, a.d, data.num_positive(),
                                  data.num_negative(), a.const_factor)
            : ndc::mcc_sample_size(a.epsilon, a.delta, a.d, data.num_positive(),
                                   data.num_negative(), a.const_factor);
    const auto start = std::chrono::steady_clock::now();
    coreset = ndc::stratified_uniform(data, plan, a.seed, a.exhaustive);
    elapsed = seconds_since(start);
  } else {
    if (!(a.fraction > 0.0) || a.fraction > 1.0) {
      throw CLI::ValidationError("--fraction must lie in (0, 1]");
    }
    const auto m = static_cast<std::size_t>(
        std::floor(a.fraction * static_cast<double>(data.size())));
    if (m == 0) throw CLI::ValidationError("--fraction too small: empty coreset");
    const auto start = std::chrono::steady_clock::now();
    coreset = ndc::sample_by_strategy(data, a.strategy, m, a.seed, a.exhaustive);
    elapsed = seconds_since(start);
  }

  std::cout << "n=" << data.size() << " m=" << coreset.size()
            << " construction_seconds=" << fmt(elapsed) << '\n';
  emit_json(ndc::to_json(coreset), a.out);
  return kExitOk;
}

ndc::TrainConfig make_train_config(const std::string& loss, double l2, std::size_t epochs,
                                   double step) {
  ndc::TrainConfig cfg;
  cfg.loss = ndc::loss_from_string(loss);
  cfg.l2_reg = l2;
  cfg.epochs = epochs;
  cfg.step_size = step;
  cfg.validate();
  return cfg;
}

int run_train(const TrainArgs& a) {
  const ndc::Dataset data = load_data(a.data);
  const ndc::TrainConfig cfg = make_train_config(a.loss, a.l2_reg, a.epochs, a.step_size);

  ndc::LinearModel model;
  if (a.coreset_path.empty()) {
    model = ndc::train(data, cfg);
  } else {
    const ndc::Coreset coreset = ndc::coreset_from_json(ndc::load_json_file(a.coreset_path));
    model = ndc::train(data, coreset.view(), cfg);
  }

  const ndc::ContingencyTable t = ndc::contingency(data, model.to_query());
  std::cout << "f1=" << fmt(ndc::f1_score(t).value) << " mcc=" << fmt(ndc::mcc_score(t).value)
            << '\n';
  emit_json(ndc::to_json(model), a.out);
  return kExitOk;
}

int run_eval(const EvalArgs& a) {
  const ndc::Dataset data = load_data(a.data);
  const ndc::LinearModel model = ndc::model_from_json(ndc::load_json_file(a.model_path));
  const ndc::LinearQuery q = model.to_query();

  ndc::ContingencyTable t;
  if (a.coreset_path.empty()) {
    t = ndc::contingency(data, q);
  } else {
    const ndc::Coreset coreset = ndc::coreset_from_json(ndc::load_json_file(a.coreset_path));
    t = ndc::contingency(data, q, coreset.view());
  }

  const ndc::MetricResult f1 = ndc::f1_score(t);
  const ndc::MetricResult mcc = ndc::mcc_score(t);
  std::cout << "f1=" << fmt(f1.value) << " mcc=" << fmt(mcc.value) << '\n';
  emit_json(ndc::json{{"f1", f1.value},
                      {"f1_degenerate", f1.degenerate},
                      {"mcc", mcc.value},
                      {"mcc_degenerate", mcc.degenerate},
                      {"table",
                       {{"tp", t.tp}, {"fp", t.fp}, {"fn", t.fn}, {"tn", t.tn}}}},
            a.out);
  return kExitOk;
}

int run_bench_cmd(const BenchArgs& a) {
  const ndc::Dataset data = load_data(a.data);
  ndc::BenchConfig cfg;
  cfg.strategies = a.strategies;
  cfg.fractions = a.fractions;
  cfg.train = make_train_config(a.loss, a.l2_reg, a.epochs, a.step_size);
  cfg.reps = a.reps;
  cfg.seed = a.seed;

  ndc::BenchReport report = ndc::run_bench(data, cfg);
  report.dataset_path = a.data.path;

  std::cout << "baseline f1=" << fmt(report.baseline.f1)
            << " mcc=" << fmt(report.baseline.mcc) << '\n';
  for (const auto& row : report.means) {
    std::cout << row.strategy << " fraction=" << fmt(row.fraction)
              << " f1=" << fmt(row.f1) << " mcc=" << fmt(row.mcc)
              << " construction_seconds=" << fmt(row.construction_seconds) << '\n';
  }
  if (a.out_format == "csv") {
    const std::string csv = ndc::bench_report_csv(report);
    if (a.out.empty()) {
      std::cout << csv;
    } else {
      write_text(a.out, csv);
    }
  } else {
    emit_json(ndc::to_json(report), a.out);
  }
  return kExitOk;
}

int run_verify(const VerifyArgs& a) {
  const ndc::Dataset data = load_data(a.data);
  const ndc::Mode mode = ndc::mode_from_string(a.mode);

  const ndc::SampleSizePlan plan =
      mode == ndc::Mode::f1
          ? ndc::f1_sample_size(a.gamma, a.epsilon, a.delta, a.d, data.num_positive(),
                                data.num_negative(), a.const_factor)
          : ndc::mcc_sample_size(a.epsilon, a.delta, a.d, data.num_positive(),
                                 data.num_negative(), a.const_factor);

  ndc::QueryGenConfig qcfg;
  qcfg.mode = mode;
  qcfg.gamma = a.gamma;
  qcfg.c = a.c;
  qcfg.epsilon = a.epsilon;
  qcfg.count = a.queries;
  qcfg.seed = ndc::derive_seed(a.seed, 1);
  const ndc::QuerySet queries = ndc::generate_query_set(data, qcfg);

  ndc::VerifyConfig vcfg;
  vcfg.draws = a.draws;
  vcfg.seed = ndc::derive_seed(a.seed, 2);
  vcfg.delta = a.delta;
  vcfg.exhaustive = a.exhaustive;

  const ndc::GuaranteeReport report = mode == ndc::Mode::f1
                                          ? ndc::verify_f1(data, queries, plan, vcfg)
                                          : ndc::verify_mcc(data, queries, plan, vcfg);

  std::cout << "failure_rate=" << fmt(report.failure_rate)
            << " budget=" << fmt(report.budget) << " pass="
            << (report.pass ? "true" : "false") << '\n';
  if (!a.out.empty()) ndc::save_json_file(ndc::to_json(report), a.out);
  return report.pass ? kExitOk : kExitBudget;
}

int run_lowerbound(const LowerBoundArgs& a) {
  const ndc::Mode mode = ndc::mode_from_string(a.mode);
  ndc::LabelRule rule;
  if (a.rule == "all-positive") {
    rule = ndc::LabelRule::all_positive;
  } else if (a.rule == "alternating") {
    rule = ndc::LabelRule::alternating;
  } else {
    throw CLI::ValidationError("--rule must be all-positive or alternating");
  }

  const ndc::AdversarialInstance inst =
      mode == ndc::Mode::f1 ? ndc::gen_f1_instance(a.d, rule) : ndc::gen_mcc_instance(a.d);

  ndc::json records = ndc::json::array();
  for (std::size_t p = 0; p < inst.data.size(); ++p) {
    if (mode == ndc::Mode::f1 && inst.data.label(p) != +1) continue;
    const ndc::CollapseRecord rec = ndc::demonstrate_collapse(inst, p);
    if (!a.quiet) {
      std::cout << "omit=" << rec.omitted << " full=" << fmt(rec.full_score)
                << " omitted=" << fmt(rec.omitted_score)
                << " full_numerator=" << fmt(rec.full_numerator)
                << " omitted_numerator=" << fmt(rec.omitted_numerator) << '\n';
    }
    records.push_back(ndc::json{{"omitted", rec.omitted},
                                {"full_score", rec.full_score},
                                {"omitted_score", rec.omitted_score},
                                {"full_numerator", rec.full_numerator},
                                {"omitted_numerator", rec.omitted_numerator}});
  }

  ndc::json j{{"mode", ndc::to_string(mode)},
              {"d", a.d},
              {"n", inst.data.size()},
              {"records", records}};
  if (mode == ndc::Mode::f1) j["rule"] = a.rule;

  if (!a.sweep_strategy.empty()) {
    if (!a.seed_set) throw CLI::ValidationError("--sweep-strategy needs --seed");
    const std::size_t m = a.sweep_m > 0 ? a.sweep_m : inst.data.size() / 2;
    const ndc::SweepReport sweep =
        ndc::coreset_failure_sweep(inst, a.sweep_strategy, m, a.trials, a.seed);
    std::cout << "sweep strategy=" << sweep.strategy << " m=" << sweep.m
              << " trials=" << sweep.trials
              << " mean_collapse_fraction=" << fmt(sweep.mean_collapse_fraction) << '\n';
    j["sweep"] = ndc::json{{"strategy", sweep.strategy},
                           {"m", sweep.m},
                           {"trials", sweep.trials},
                           {"mean_collapse_fraction", sweep.mean_collapse_fraction},
                           {"per_trial_fraction", sweep.per_trial_fraction}};
  }

  if (!a.export_data.empty()) {
    const std::string sidecar =
        a.export_sidecar.empty() ? a.export_data + ".json" : a.export_sidecar;
    ndc::export_instance(inst, a.export_data, sidecar);
  }
  if (!a.out.empty()) ndc::save_json_file(j, a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coreset construction and verification for F1 and MCC"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "load a dataset, optionally subsample, re-emit");
  add_data_flags(*ingest, ingest_args.data);
  ingest->add_option("--subsample", ingest_args.subsample,
                     "stratified subsample to this many rows (0 keeps all)");
  auto* ingest_seed = ingest->add_option("--seed", ingest_args.seed, "subsample seed");
  ingest->add_option("--out", ingest_args.out, "output dataset path");
  ingest->add_option("--out-format", ingest_args.out_format, "output dataset format")
      ->check(CLI::IsMember({"csv", "sparse"}))
      ->capture_default_str();

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "construct a coreset and time it");
  add_data_flags(*sample, sample_args.data);
  sample->add_option("--strategy", sample_args.strategy,
                     "uniform | stratified-uniform | leverage | lewis | kmeans")
      ->capture_default_str();
  sample->add_option("--fraction", sample_args.fraction, "coreset size as a fraction of n");
  sample->add_option("--plan", sample_args.plan_mode,
                     "size the coreset from the guarantee plan for this mode")
      ->check(CLI::IsMember({"f1", "mcc"}));
  sample->add_option("--gamma", sample_args.gamma, "score level (f1 plan)")
      ->capture_default_str();
  sample->add_option("--epsilon", sample_args.epsilon, "accuracy")->capture_default_str();
  sample->add_option("--delta", sample_args.delta, "per-bound failure probability")
      ->capture_default_str();
  sample->add_option("--d", sample_args.d, "query-family complexity")->capture_default_str();
  sample->add_option("--const-factor", sample_args.const_factor, "plan size multiplier")
      ->capture_default_str();
  auto* sample_seed = sample->add_option("--seed", sample_args.seed, "draw seed");
  sample->add_flag("--exhaustive", sample_args.exhaustive, "take every point at weight 1");
  sample->add_option("--out", sample_args.out, "coreset JSON path (default: stdout)");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "fit a linear classifier");
  add_data_flags(*train, train_args.data);
  train->add_option("--coreset", train_args.coreset_path, "train on this coreset JSON");
  train->add_option("--loss", train_args.loss, "logistic | hinge")->capture_default_str();
  train->add_option("--l2", train_args.l2_reg, "ridge strength")->capture_default_str();
  train->add_option("--epochs", train_args.epochs, "full-batch steps")->capture_default_str();
  train->add_option("--step", train_args.step_size, "step size")->capture_default_str();
  train->add_option("--out", train_args.out, "model JSON path (default: stdout)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "score a model on a dataset or coreset");
  add_data_flags(*eval, eval_args.data);
  eval->add_option("--model", eval_args.model_path, "model JSON path")->required();
  eval->add_option("--coreset", eval_args.coreset_path,
                   "evaluate on this coreset's weighted view instead of the full data");
  eval->add_option("--out", eval_args.out, "report JSON path (default: stdout)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "coreset-vs-full training comparison");
  add_data_flags(*bench, bench_args.data);
  bench->add_option("--strategy", bench_args.strategies, "strategies to compare")
      ->required()
      ->delimiter(',');
  bench->add_option("--fraction", bench_args.fractions, "coreset fractions")
      ->required()
      ->delimiter(',');
  bench->add_option("--loss", bench_args.loss, "logistic | hinge")->capture_default_str();
  bench->add_option("--l2", bench_args.l2_reg, "ridge strength")->capture_default_str();
  bench->add_option("--epochs", bench_args.epochs, "full-batch steps")->capture_default_str();
  bench->add_option("--step", bench_args.step_size, "step size")->capture_default_str();
  bench->add_option("--reps", bench_args.reps, "repetitions per cell")->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "experiment seed")->required();
  bench->add_option("--out", bench_args.out, "report path (default: stdout)");
  bench->add_option("--out-format", bench_args.out_format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Monte-Carlo check of the estimate guarantee");
  add_data_flags(*verify, verify_args.data);
  verify->add_option("--mode", verify_args.mode, "f1 | mcc")
      ->check(CLI::IsMember({"f1", "mcc"}))
      ->capture_default_str();
  verify->add_option("--gamma", verify_args.gamma, "query-family score level")
      ->capture_default_str();
  verify->add_option("--c", verify_args.c, "relative-error multiplier (f1)")
      ->capture_default_str();
  verify->add_option("--epsilon", verify_args.epsilon, "accuracy")->capture_default_str();
  verify->add_option("--delta", verify_args.delta, "per-bound failure probability")
      ->capture_default_str();
  verify->add_option("--d", verify_args.d, "query-family complexity")->capture_default_str();
  verify->add_option("--const-factor", verify_args.const_factor, "plan size multiplier")
      ->capture_default_str();
  verify->add_option("--queries", verify_args.queries, "accepted queries to test")
      ->capture_default_str();
  verify->add_option("--draws", verify_args.draws, "coreset draws")->capture_default_str();
  verify->add_option("--seed", verify_args.seed, "seed for queries and draws")->required();
  verify->add_flag("--exhaustive", verify_args.exhaustive,
                   "verify with identity coresets (zero error expected)");
  verify->add_option("--out", verify_args.out, "report JSON path");

  LowerBoundArgs lb_args;
  auto* lowerbound =
      app.add_subcommand("lowerbound", "hard instances where small coresets must fail");
  lowerbound->add_option("--mode", lb_args.mode, "f1 | mcc")
      ->check(CLI::IsMember({"f1", "mcc"}))
      ->capture_default_str();
  lowerbound->add_option("--d", lb_args.d, "coordinate count (even; n = C(d, d/2))")
      ->capture_default_str();
  lowerbound->add_option("--rule", lb_args.rule, "f1 labels: all-positive | alternating")
      ->capture_default_str();
  lowerbound->add_option("--sweep-strategy", lb_args.sweep_strategy,
                         "also sweep random coresets drawn by this strategy");
  lowerbound->add_option("--sweep-m", lb_args.sweep_m, "sweep coreset size (default n/2)");
  lowerbound->add_option("--trials", lb_args.trials, "sweep trials")->capture_default_str();
  auto* lb_seed = lowerbound->add_option("--seed", lb_args.seed, "sweep seed");
  lowerbound->add_option("--export-data", lb_args.export_data,
                         "write the instance in sparse-text form to this path");
  lowerbound->add_option("--export-sidecar", lb_args.export_sidecar,
                         "sidecar JSON path (default: <export-data>.json)");
  lowerbound->add_option("--out", lb_args.out, "report JSON path");
  lowerbound->add_flag("--quiet", lb_args.quiet, "suppress per-point collapse lines");

  try {
    app.parse(argc, argv);
    ingest_args.seed_set = ingest_seed->count() > 0;
    sample_args.seed_set = sample_seed->count() > 0;
    lb_args.seed_set = lb_seed->count() > 0;

    if (ingest->parsed()) return run_ingest(ingest_args);
    if (sample->parsed()) return run_sample(sample_args);
    if (train->parsed()) return run_train(train_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (bench->parsed()) return run_bench_cmd(bench_args);
    if (verify->parsed()) return run_verify(verify_args);
    if (lowerbound->parsed()) return run_lowerbound(lb_args);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
