#pragma once

#include <string>

#include "json.hpp"
#include "ndc/bench.hpp"
#include "ndc/classifiers.hpp"
#include "ndc/guarantees.hpp"
#include "ndc/samplers.hpp"

// JSON forms for everything the CLI reads or writes. Shapes are pinned by
// the schema documents under docs/schemas and by tests.
namespace ndc {

using json = nlohmann::json;

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);
std::string to_string(kernels::LossKind kind);
kernels::LossKind loss_from_string(const std::string& s);

json to_json(const PlanInputs& p);
PlanInputs plan_inputs_from_json(const json& j);
json to_json(const SampleSizePlan& plan);
SampleSizePlan plan_from_json(const json& j);

json to_json(const Coreset& c);
Coreset coreset_from_json(const json& j);

json to_json(const LinearModel& m);
LinearModel model_from_json(const json& j);

json to_json(const LinearQuery& q);
LinearQuery query_from_json(const json& j);

json to_json(const GuaranteeReport& r);

// same values as bench_report_csv, keyed
json to_json(const BenchReport& r);

json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

}  // namespace ndc
