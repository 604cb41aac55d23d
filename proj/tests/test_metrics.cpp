#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ndc/metrics.hpp"
#include "test_support.hpp"

using ndc::ContingencyTable;
using ndc::Dataset;
using ndc::LinearQuery;

TEST_CASE("f1 from first principles") {
  // precision 0.8 (tp=8, fp=2), recall 0.5 (fn=8): harmonic mean 8/13
  const ContingencyTable t{8, 2, 8, 10};
  const auto f1 = ndc::f1_score(t);
  CHECK(!f1.degenerate);
  CHECK(f1.value == doctest::Approx(2.0 * 0.8 * 0.5 / (0.8 + 0.5)).epsilon(1e-15));
  CHECK(f1.value == doctest::Approx(8.0 / 13.0).epsilon(1e-15));

  CHECK(ndc::f1_score({0, 3, 4, 5}).value == 0.0);
  CHECK(!ndc::f1_score({0, 3, 4, 5}).degenerate);
  CHECK(ndc::f1_score({0, 0, 0, 7}).degenerate);
  CHECK(ndc::f1_score({5, 0, 0, 0}).value == 1.0);
}

TEST_CASE("mcc equals its normalized form and handles degeneracy") {
  const ContingencyTable t{30, 10, 20, 40};
  const auto mcc = ndc::mcc_score(t);
  CHECK(!mcc.degenerate);
  const double direct =
      (30.0 * 40 - 10.0 * 20) / std::sqrt((30.0 + 10) * (30 + 20.0) * (40 + 10.0) * (40 + 20.0));
  CHECK(mcc.value == doctest::Approx(direct).epsilon(1e-15));
  CHECK(ndc::mcc_normalized(t) == doctest::Approx(mcc.value).epsilon(1e-12));

  // perfect and inverted classifiers hit the extremes
  CHECK(ndc::mcc_score({10, 0, 0, 10}).value == doctest::Approx(1.0));
  CHECK(ndc::mcc_score({0, 10, 10, 0}).value == doctest::Approx(-1.0));

  // a vanished marginal makes the score undefined
  CHECK(ndc::mcc_score({0, 0, 5, 5}).degenerate);
  CHECK(ndc::mcc_score({0, 0, 5, 5}).value == 0.0);
  CHECK(ndc::mcc_normalized({0, 0, 5, 5}) == 0.0);
}

TEST_CASE("contingency rates") {
  const ContingencyTable t{1, 2, 3, 4};
  CHECK(t.total() == 10.0);
  CHECK(t.actual_positive_rate() == doctest::Approx(0.4));
  CHECK(t.predicted_positive_rate() == doctest::Approx(0.3));
}

TEST_CASE("dv distance") {
  CHECK(ndc::dv_distance(2.0, 6.0, 2.0) == doctest::Approx(0.4));
  CHECK(ndc::dv_distance(3.0, 3.0, 1.0) == 0.0);
  CHECK_THROWS_AS(ndc::dv_distance(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ndc::dv_distance(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("decision values, tie rule, and augmentation") {
  LinearQuery q;
  q.weights = {1.0, -1.0, 0.5};  // augmented over 2 features
  const std::vector<double> x{2.0, 1.0};
  CHECK(ndc::decision_value(q, x) == doctest::Approx(1.5));

  LinearQuery raw;
  raw.augment = false;
  raw.weights = {1.0, -2.0};
  CHECK(ndc::decision_value(raw, x) == doctest::Approx(0.0));
  CHECK(ndc::predict_sign(ndc::decision_value(raw, x)) == -1);  // exact zero -> negative
  CHECK(ndc::predict_sign(1e-300) == +1);

  LinearQuery bad;
  bad.weights = {1.0, 2.0};  // augmented queries need dim+1 weights
  Dataset::Builder b(2);
  b.add(x, +1);
  const Dataset d = std::move(b).build();
  CHECK_THROWS_AS(ndc::contingency(d, bad), std::invalid_argument);
}

TEST_CASE("contingency over a dataset counts weighted cells") {
  Dataset::Builder b(1);
  b.add(std::vector<double>{1.0}, +1, 2.0);   // predicted +, tp mass 2
  b.add(std::vector<double>{-1.0}, +1);       // predicted -, fn mass 1
  b.add(std::vector<double>{1.0}, -1, 0.5);   // predicted +, fp mass 0.5
  b.add(std::vector<double>{-1.0}, -1, 3.0);  // predicted -, tn mass 3
  b.add(std::vector<double>{0.0}, -1);        // tie predicts -, tn mass 1
  const Dataset d = std::move(b).build();

  LinearQuery q;
  q.weights = {1.0, 0.0};
  const ContingencyTable t = ndc::contingency(d, q);
  CHECK(t.tp == 2.0);
  CHECK(t.fn == 1.0);
  CHECK(t.fp == 0.5);
  CHECK(t.tn == 4.0);
}

TEST_CASE("contingency over a weighted view") {
  const Dataset d = test_support::random_dataset(4, 4, 2, 3);
  LinearQuery q;
  q.weights = {0.3, -0.7, 0.1};

  // empty view = all rows at dataset weights
  const ContingencyTable whole = ndc::contingency(d, q, {});
  const ContingencyTable direct = ndc::contingency(d, q);
  CHECK(whole.tp == direct.tp);
  CHECK(whole.tn == direct.tn);

  const std::vector<std::size_t> idx{0, 1, 1, 5};
  const std::vector<double> w{1.0, 0.5, 0.5, 2.0};
  const ContingencyTable view = ndc::contingency(d, q, {idx, w});
  // row 1 split into two half-weight copies must equal one full copy
  const std::vector<std::size_t> idx2{0, 1, 5};
  const std::vector<double> w2{1.0, 1.0, 2.0};
  const ContingencyTable view2 = ndc::contingency(d, q, {idx2, w2});
  CHECK(view.tp == doctest::Approx(view2.tp));
  CHECK(view.fp == doctest::Approx(view2.fp));
  CHECK(view.fn == doctest::Approx(view2.fn));
  CHECK(view.tn == doctest::Approx(view2.tn));

  // index out of range and weight-count mismatch are rejected
  const std::vector<std::size_t> bad_idx{99};
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(ndc::contingency(d, q, {bad_idx, one}), std::out_of_range);
  CHECK_THROWS_AS(ndc::contingency(d, q, {idx, one}), std::invalid_argument);
}
