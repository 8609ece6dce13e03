#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "baytta/bma.hpp"
#include "baytta/error.hpp"
#include "baytta/math.hpp"
#include "baytta/metrics.hpp"
#include "baytta/table.hpp"

namespace baytta {

inline constexpr double kDecisionThreshold = 0.5;

enum class Method { baytta, tta_mean };

inline const char* to_string(Method m) { return m == Method::baytta ? "baytta" : "tta_mean"; }

struct AggregatedPrediction {
  double probability = 0.0;
  std::uint8_t label = 0;
  Method method = Method::baytta;
};

inline std::uint8_t threshold_label(double probability) {
  return probability >= kDecisionThreshold ? 1 : 0;
}

/// sigmoid(E[beta_0] + sum_i E[beta_i] x_i).
inline AggregatedPrediction predict_baytta(const BmaSummary& summary, std::span<const double> row) {
  if (row.size() != summary.n_columns())
    throw Error(ErrorKind::DimensionMismatch,
                "row has " + std::to_string(row.size()) + " values, summary has " +
                    std::to_string(summary.n_columns()) + " columns");
  double eta = summary.expected_intercept;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!std::isfinite(row[i]))
      throw Error(ErrorKind::NonFinite, "row entry " + std::to_string(i) + " is not finite");
    eta += summary.expected_coeffs[i] * row[i];
  }
  const double p = sigmoid(eta);
  return {p, threshold_label(p), Method::baytta};
}

/// Plain TTA: the arithmetic mean of the column predictions.
inline AggregatedPrediction predict_tta_mean(std::span<const double> row) {
  if (row.empty()) throw Error(ErrorKind::EmptyRow, "cannot average an empty row");
  // Accumulate deviations from the first entry so a constant row averages
  // to exactly that constant.
  double shift = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!std::isfinite(row[i]) || row[i] < 0.0 || row[i] > 1.0)
      throw Error(ErrorKind::OutOfRange, "row entry " + std::to_string(i) + " is not in [0, 1]");
    shift += row[i] - row.front();
  }
  const double p = row.front() + shift / static_cast<double>(row.size());
  return {p, threshold_label(p), Method::tta_mean};
}

/// Predicted labels for every table row.
inline std::vector<std::uint8_t> predict_labels(const PredictionTable& table, Method method,
                                                const BmaSummary* summary = nullptr) {
  if (method == Method::baytta && summary == nullptr)
    throw Error(ErrorKind::InvalidArgument, "BayTTA prediction needs a summary");
  std::vector<std::uint8_t> out(table.n_rows());
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    const auto row = table.row(r);
    out[r] = method == Method::baytta ? predict_baytta(*summary, row).label
                                      : predict_tta_mean(row).label;
  }
  return out;
}

struct UncertaintyReport {
  double sigma_baytta = 0.0;
  std::vector<double> per_column_accuracy;
  double mu_bma = 0.0;
};

/// Inclusion-weighted spread of the per-column accuracies around the BayTTA
/// accuracy:  sqrt( 1/(k+1) * sum_i (p(x_i) * (acc_i - mu))^2 ).
inline double sigma_baytta(std::span<const double> inclusion_prob,
                           std::span<const double> column_accuracy, double mu_bma) {
  if (inclusion_prob.size() != column_accuracy.size() || inclusion_prob.empty())
    throw Error(ErrorKind::DimensionMismatch, "inclusion and accuracy vectors differ in length");
  double ss = 0.0;
  for (std::size_t i = 0; i < inclusion_prob.size(); ++i) {
    const double d = inclusion_prob[i] * (column_accuracy[i] - mu_bma);
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(inclusion_prob.size()));
}

/// acc_i thresholds column i at 0.5 against the table labels.
inline UncertaintyReport uncertainty(const BmaSummary& summary, const PredictionTable& table,
                                     double mu_bma) {
  if (table.n_columns() != summary.n_columns())
    throw Error(ErrorKind::DimensionMismatch,
                "table has " + std::to_string(table.n_columns()) + " columns, summary has " +
                    std::to_string(summary.n_columns()));
  if (!(mu_bma >= 0.0 && mu_bma <= 1.0))
    throw Error(ErrorKind::OutOfRange, "mu_bma must lie in [0, 1]");
  UncertaintyReport report;
  report.mu_bma = mu_bma;
  std::vector<std::uint8_t> predicted(table.n_rows());
  for (std::size_t j = 0; j < table.n_columns(); ++j) {
    const auto col = table.column(j);
    for (std::size_t r = 0; r < col.size(); ++r) predicted[r] = threshold_label(col[r]);
    report.per_column_accuracy.push_back(accuracy(confusion(predicted, table.labels())).value);
  }
  report.sigma_baytta = sigma_baytta(summary.inclusion_prob, report.per_column_accuracy, mu_bma);
  return report;
}

}  // namespace baytta
