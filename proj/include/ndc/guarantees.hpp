#pragma once

#include <cstdint>
#include <vector>

#include "ndc/dataset.hpp"
#include "ndc/metrics.hpp"
#include "ndc/samplers.hpp"

namespace ndc {

// Membership in the F1 query family at level gamma: the score clears gamma
// and the true-positive mass clears both c/eps-dependent floors.
bool f1_membership(const ContingencyTable& t, double gamma, double c, double epsilon);

// Membership in the MCC query family: tp and tn each hold at least a gamma
// fraction of the total mass.
bool mcc_membership(const ContingencyTable& t, double gamma);

struct QuerySet {
  std::vector<LinearQuery> queries;
  Mode mode = Mode::f1;
  double gamma = 0.0;
  double c = 2.0;        // F1 sandwich multiplier
  double epsilon = 0.0;
  double acceptance_rate = 1.0;  // accepted / attempted during generation
};

struct QueryGenConfig {
  Mode mode = Mode::f1;
  double gamma = 0.5;
  double c = 2.0;
  double epsilon = 0.1;
  std::size_t count = 50;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 0;  // 0 -> 400 * count
};

// Candidate queries come from random unit directions with bias set at random
// decision-value quantiles, and from perturbations of a model trained on the
// data; candidates are kept only if they pass the mode's membership test.
// Throws if the family cannot be filled, reporting the acceptance rate.
QuerySet generate_query_set(const Dataset& data, const QueryGenConfig& cfg);

struct SlackCaps {
  double lower = 0.0;  // cap on the lower-band additive term
  double upper = 0.0;  // cap on the upper-band additive term
};

// Additive slack caps for the MCC band at accuracy eps, level gamma, and
// actual-positive rate t_prime. Requires eps < gamma and t_prime in (0, 1).
SlackCaps mcc_slack_caps(double epsilon, double gamma, double t_prime);

struct QueryOutcome {
  double full_value = 0.0;
  double mean_estimate = 0.0;
  double worst_violation = 0.0;  // F1: max relative error; MCC: max signed band excess
  double bound_low = 0.0;        // F1: c*eps (both bounds); MCC: band endpoints
  double bound_high = 0.0;
  bool pass = false;
};

struct GuaranteeReport {
  Mode mode = Mode::f1;
  double gamma = 0.0, epsilon = 0.0, delta = 0.0, c = 0.0;
  SampleSizePlan plan;
  std::size_t draws = 0;
  std::size_t num_queries = 0;
  std::size_t failed_draws = 0;
  double failure_rate = 0.0;
  double budget = 0.0;  // tolerated failure probability: 3*delta (F1), 4*delta (MCC)
  bool pass = false;
  double acceptance_rate = 1.0;
  std::vector<QueryOutcome> queries;
  std::vector<double> draw_max_violation;
};

struct VerifyConfig {
  std::size_t draws = 50;
  std::uint64_t seed = 0;
  double delta = 0.1;
  bool exhaustive = false;  // identity coresets; zero error expected
};

// Monte-Carlo check of the F1 sandwich |F1~ - F1| <= c*eps*F1 over
// stratified-uniform coreset draws at the plan's sizes. A draw fails if any
// query leaves the sandwich; the report compares the failure rate to 3*delta.
GuaranteeReport verify_f1(const Dataset& data, const QuerySet& queries,
                          const SampleSizePlan& plan, const VerifyConfig& cfg);

// Same harness for the MCC band with its additive slack caps and 4*delta
// budget.
GuaranteeReport verify_mcc(const Dataset& data, const QuerySet& queries,
                           const SampleSizePlan& plan, const VerifyConfig& cfg);

struct CountDeviationStats {
  std::size_t draws = 0;
  // fraction of draws with |estimate - exact| within the additive bound:
  // eps*Y+ for the positive-sample counts, eps*(Y+ + Y-) for the reweighted
  // negative-sample counts
  double tp_ok = 0.0, fn_ok = 0.0, fp_ok = 0.0, tn_ok = 0.0;
};

// Exercises the per-count estimates behind both guarantees directly.
CountDeviationStats per_count_deviations(const Dataset& data, const LinearQuery& q,
                                         const SampleSizePlan& plan, std::size_t draws,
                                         std::uint64_t seed);

}  // namespace ndc
