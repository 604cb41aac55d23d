#include "ndc/serialization.hpp"

#include <fstream>
#include <stdexcept>

namespace ndc {

std::string to_string(Mode mode) { return mode == Mode::f1 ? "f1" : "mcc"; }

Mode mode_from_string(const std::string& s) {
  if (s == "f1") return Mode::f1;
  if (s == "mcc") return Mode::mcc;
  throw std::invalid_argument("unknown mode '" + s + "' (expected f1 or mcc)");
}

std::string to_string(kernels::LossKind kind) {
  return kind == kernels::LossKind::logistic ? "logistic" : "hinge";
}

kernels::LossKind loss_from_string(const std::string& s) {
  if (s == "logistic") return kernels::LossKind::logistic;
  if (s == "hinge") return kernels::LossKind::hinge;
  throw std::invalid_argument("unknown loss '" + s + "' (expected logistic or hinge)");
}

json to_json(const PlanInputs& p) {
  return json{{"gamma", p.gamma},   {"epsilon", p.epsilon},
              {"delta", p.delta},   {"d", p.d},
              {"y_pos", p.y_pos},   {"y_neg", p.y_neg},
              {"const_factor", p.const_factor}};
}

PlanInputs plan_inputs_from_json(const json& j) {
  PlanInputs p;
  p.gamma = j.at("gamma").get<double>();
  p.epsilon = j.at("epsilon").get<double>();
  p.delta = j.at("delta").get<double>();
  p.d = j.at("d").get<std::size_t>();
  p.y_pos = j.at("y_pos").get<std::size_t>();
  p.y_neg = j.at("y_neg").get<std::size_t>();
  p.const_factor = j.at("const_factor").get<double>();
  return p;
}

json to_json(const SampleSizePlan& plan) {
  return json{{"s1", plan.s1},       {"s2", plan.s2},
              {"s3", plan.s3},       {"s4", plan.s4},
              {"total", plan.total}, {"mode", to_string(plan.mode)},
              {"inputs", to_json(plan.inputs)}};
}

SampleSizePlan plan_from_json(const json& j) {
  SampleSizePlan plan;
  plan.s1 = j.at("s1").get<std::size_t>();
  plan.s2 = j.at("s2").get<std::size_t>();
  plan.s3 = j.at("s3").get<std::size_t>();
  plan.s4 = j.at("s4").get<std::size_t>();
  plan.total = j.at("total").get<std::size_t>();
  plan.mode = mode_from_string(j.at("mode").get<std::string>());
  plan.inputs = plan_inputs_from_json(j.at("inputs"));
  if (plan.s1 + plan.s2 + plan.s3 + plan.s4 != plan.total) {
    throw std::invalid_argument("plan total does not match its terms");
  }
  return plan;
}

json to_json(const Coreset& c) {
  json j{{"strategy", c.strategy},
         {"seed", c.seed},
         {"indices", c.indices},
         {"weights", c.weights}};
  if (c.plan) j["plan"] = to_json(*c.plan);
  if (c.requested_size) j["requested_size"] = *c.requested_size;
  return j;
}

Coreset coreset_from_json(const json& j) {
  Coreset c;
  c.strategy = j.at("strategy").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.indices = j.at("indices").get<std::vector<std::size_t>>();
  c.weights = j.at("weights").get<std::vector<double>>();
  if (c.indices.size() != c.weights.size()) {
    throw std::invalid_argument("coreset indices and weights differ in length");
  }
  if (j.contains("plan")) c.plan = plan_from_json(j.at("plan"));
  if (j.contains("requested_size")) {
    c.requested_size = j.at("requested_size").get<std::size_t>();
  }
  return c;
}

json to_json(const LinearModel& m) {
  return json{{"weights", m.weights}, {"bias", m.bias}};
}

LinearModel model_from_json(const json& j) {
  LinearModel m;
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  if (m.weights.empty()) throw std::invalid_argument("model has no weights");
  return m;
}

json to_json(const LinearQuery& q) {
  return json{{"weights", q.weights}, {"augment", q.augment}};
}

LinearQuery query_from_json(const json& j) {
  LinearQuery q;
  q.weights = j.at("weights").get<std::vector<double>>();
  q.augment = j.at("augment").get<bool>();
  if (q.weights.empty()) throw std::invalid_argument("query has no weights");
  return q;
}

json to_json(const GuaranteeReport& r) {
  json queries = json::array();
  for (const auto& q : r.queries) {
    queries.push_back(json{{"full_value", q.full_value},
                           {"mean_estimate", q.mean_estimate},
                           {"worst_violation", q.worst_violation},
                           {"bound_low", q.bound_low},
                           {"bound_high", q.bound_high},
                           {"pass", q.pass}});
  }
  return json{{"mode", to_string(r.mode)},
              {"gamma", r.gamma},
              {"epsilon", r.epsilon},
              {"delta", r.delta},
              {"c", r.c},
              {"plan", to_json(r.plan)},
              {"draws", r.draws},
              {"num_queries", r.num_queries},
              {"failed_draws", r.failed_draws},
              {"failure_rate", r.failure_rate},
              {"budget", r.budget},
              {"pass", r.pass},
              {"acceptance_rate", r.acceptance_rate},
              {"queries", queries},
              {"draw_max_violation", r.draw_max_violation}};
}

namespace {

json row_to_json(const BenchRow& row) {
  return json{{"strategy", row.strategy},
              {"fraction", row.fraction},
              {"rep", row.rep},
              {"size", row.size},
              {"construction_seconds", row.construction_seconds},
              {"train_seconds", row.train_seconds},
              {"f1", row.f1},
              {"mcc", row.mcc}};
}

}  // namespace

json to_json(const BenchReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(row_to_json(row));
  json means = json::array();
  for (const auto& row : r.means) means.push_back(row_to_json(row));
  return json{{"dataset_path", r.dataset_path},
              {"n", r.n},
              {"dim", r.dim},
              {"positives", r.positives},
              {"negatives", r.negatives},
              {"loss", r.loss},
              {"reps", r.reps},
              {"seed", r.seed},
              {"baseline", row_to_json(r.baseline)},
              {"rows", rows},
              {"means", means}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace ndc
