#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "baytta/bma.hpp"
#include "baytta/predict.hpp"
#include "baytta/random.hpp"
#include "fixtures.hpp"
#include "oracle/alg1_reference.hpp"

namespace {

using baytta::BmaSummary;

BmaSummary zero_summary(std::size_t cols) {
  BmaSummary s;
  s.inclusion_prob.assign(cols, 0.0);
  s.expected_coeffs.assign(cols, 0.0);
  return s;
}

TEST(PredictBaytta, ZeroCoefficientsGiveHalf) {
  const auto s = zero_summary(3);
  const auto p = baytta::predict_baytta(s, std::vector<double>{0.1, 0.9, 0.4});
  EXPECT_EQ(p.probability, 0.5);
  EXPECT_EQ(p.label, 1);
  EXPECT_EQ(p.method, baytta::Method::baytta);
}

TEST(PredictBaytta, SingleColumnEqualsLogisticRegression) {
  const auto t = fixtures::seed42().select_columns(std::vector<std::size_t>{1});
  const auto s = baytta::run_bma(t);
  const auto m = baytta::fit_logistic(baytta::DesignMatrix::from_table(t, std::vector<std::size_t>{0}));
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    const auto row = t.row(r);
    EXPECT_NEAR(baytta::predict_baytta(s, row).probability, m.predict_probability(row), 1e-12);
  }
}

TEST(PredictBaytta, Seed42MatchesReferenceExpectation) {
  const auto t = fixtures::seed42();
  const auto s = baytta::run_bma(t);
  const auto ref = oracle::reference_greedy(fixtures::columns_of(t), fixtures::labels_of(t));
  const auto row = t.row(0);
  double eta = ref.intercept;
  for (std::size_t j = 0; j < row.size(); ++j) eta += ref.coeffs[j] * row[j];
  EXPECT_NEAR(baytta::predict_baytta(s, row).probability, 1.0 / (1.0 + std::exp(-eta)), 1e-9);
}

TEST(PredictBaytta, ProbabilityStrictlyInsideUnitInterval) {
  baytta::Xoshiro256 rng(4);
  auto s = zero_summary(4);
  for (int i = 0; i < 1000; ++i) {
    for (auto& c : s.expected_coeffs) c = 20 * (rng.uniform() - 0.5);
    s.expected_intercept = 10 * (rng.uniform() - 0.5);
    std::vector<double> row(4);
    for (auto& v : row) v = rng.uniform();
    const double p = baytta::predict_baytta(s, row).probability;
    ASSERT_GT(p, 0.0);
    ASSERT_LT(p, 1.0);
  }
}

TEST(PredictBaytta, Errors) {
  const auto s = zero_summary(2);
  EXPECT_THROW(baytta::predict_baytta(s, std::vector<double>{0.5}), baytta::Error);
  EXPECT_THROW(baytta::predict_baytta(s, std::vector<double>{0.5, INFINITY}), baytta::Error);
}

TEST(PredictTtaMean, Averages) {
  const auto p = baytta::predict_tta_mean(std::vector<double>{0.2, 0.4, 0.6});
  EXPECT_NEAR(p.probability, 0.4, 1e-15);
  EXPECT_EQ(p.label, 0);
  EXPECT_EQ(baytta::predict_tta_mean(std::vector<double>{0.7, 0.7, 0.7}).probability, 0.7);
  EXPECT_EQ(baytta::predict_tta_mean(std::vector<double>{0.5}).label, 1);
}

TEST(PredictTtaMean, PermutationInvariant) {
  baytta::Xoshiro256 rng(6);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> row(1 + rng.below(8));
    for (auto& v : row) v = rng.uniform();
    const double p = baytta::predict_tta_mean(row).probability;
    std::vector<double> shuffled = row;
    for (std::size_t k = shuffled.size(); k > 1; --k) std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
    EXPECT_NEAR(baytta::predict_tta_mean(shuffled).probability, p, 1e-15);
  }
}

TEST(PredictTtaMean, Errors) {
  try {
    baytta::predict_tta_mean(std::vector<double>{});
    FAIL();
  } catch (const baytta::Error& e) {
    EXPECT_EQ(e.kind(), baytta::ErrorKind::EmptyRow);
  }
  try {
    baytta::predict_tta_mean(std::vector<double>{0.2, 1.2});
    FAIL();
  } catch (const baytta::Error& e) {
    EXPECT_EQ(e.kind(), baytta::ErrorKind::OutOfRange);
  }
}

TEST(Uncertainty, ZeroWhenAllColumnsMatchBaytta) {
  const baytta::PredictionTable t({{0.9, 0.1, 0.8, 0.3}, {0.6, 0.4, 0.7, 0.2}}, {1, 0, 1, 0});
  auto s = zero_summary(2);
  s.inclusion_prob = {0.3, 0.7};
  const auto u = baytta::uncertainty(s, t, 1.0);
  EXPECT_EQ(u.per_column_accuracy, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(u.sigma_baytta, 0.0);
}

TEST(Uncertainty, SingleColumnClosedForm) {
  const std::vector<double> incl{1.0}, acc{0.9};
  EXPECT_NEAR(baytta::sigma_baytta(incl, acc, 0.8), 0.1, 1e-12);
}

TEST(Uncertainty, Seed42MatchesRecomputation) {
  const auto t = fixtures::seed42();
  const auto s = baytta::run_bma(t);
  const double mu = 0.83;
  const auto u = baytta::uncertainty(s, t, mu);
  // column accuracies of the fixture are 0.82, 0.845, 0.5
  double ss = 0.0;
  const double acc[] = {0.82, 0.845, 0.5};
  for (std::size_t i = 0; i < 3; ++i) {
    const double d = s.inclusion_prob[i] * (acc[i] - mu);
    ss += d * d;
  }
  EXPECT_NEAR(u.sigma_baytta, std::sqrt(ss / 3), 1e-12);
  EXPECT_EQ(u.mu_bma, mu);
}

TEST(Uncertainty, Properties) {
  baytta::Xoshiro256 rng(10);
  for (int i = 0; i < 500; ++i) {
    const std::size_t k1 = 1 + rng.below(6);
    std::vector<double> incl(k1), acc(k1);
    for (auto& v : incl) v = rng.uniform();
    for (auto& v : acc) v = rng.uniform();
    const double mu = rng.uniform();
    const double sigma = baytta::sigma_baytta(incl, acc, mu);
    double bound = 0.0;
    for (double a : acc) bound = std::max(bound, std::abs(a - mu));
    EXPECT_GE(sigma, 0.0);
    EXPECT_LE(sigma, bound + 1e-15);
    // a column with zero inclusion does not influence sigma
    const auto j = rng.below(k1);
    incl[j] = 0.0;
    const double before = baytta::sigma_baytta(incl, acc, mu);
    acc[j] = rng.uniform();
    EXPECT_EQ(baytta::sigma_baytta(incl, acc, mu), before);
  }
}

TEST(Uncertainty, Errors) {
  const auto t = fixtures::seed42();
  EXPECT_THROW(baytta::uncertainty(zero_summary(2), t, 0.5), baytta::Error);
  EXPECT_THROW(baytta::uncertainty(zero_summary(3), t, 1.5), baytta::Error);
}

}  // namespace
