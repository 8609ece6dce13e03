#pragma once

// End-to-end runs: fit BMA on a prediction table, evaluate BayTTA against
// the TTA-mean baseline, and repeat over synthetic trials. Reports serialise
// to JSON with a fixed key order (see docs/report_schema.md).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "baytta/bma.hpp"
#include "baytta/data.hpp"
#include "baytta/error.hpp"
#include "baytta/metrics.hpp"
#include "baytta/predict.hpp"
#include "baytta/random.hpp"
#include "baytta/table.hpp"

namespace baytta {

inline constexpr int kReportSchemaVersion = 1;

/// split: fit on a seeded random calibration subset, evaluate on the rest.
/// transductive: fit and evaluate on every row.
enum class Protocol { transductive, split };

inline const char* to_string(Protocol p) {
  return p == Protocol::split ? "split" : "transductive";
}

struct AggregateOptions {
  BmaConfig bma;
  Protocol protocol = Protocol::split;
  double split_fraction = 0.5;  // calibration share of the rows
  std::uint64_t seed = 0;       // drives the split permutation
};

struct MethodResult {
  Method method = Method::baytta;
  ConfusionCounts counts;
  Ratio accuracy;
  Ratio precision;
  Ratio recall;
  Ratio f1;
};

struct RunReport {
  AggregateOptions options;
  std::size_t n_rows = 0;
  std::size_t n_columns = 0;
  std::vector<std::size_t> calibration_rows;
  std::vector<std::size_t> evaluation_rows;
  BmaSummary summary;
  MethodResult baytta;
  MethodResult tta_mean;
  UncertaintyReport uncertainty;
};

struct SplitRows {
  std::vector<std::size_t> calibration;
  std::vector<std::size_t> evaluation;
};

/// Seeded Fisher-Yates permutation; the first floor(fraction * n) shuffled
/// rows calibrate. Both groups are returned in ascending row order.
inline SplitRows split_rows(std::size_t n_rows, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument,
                "split fraction must lie strictly between 0 and 1 (got " +
                    std::to_string(fraction) + ")");
  const auto n_cal = static_cast<std::size_t>(fraction * static_cast<double>(n_rows));
  if (n_cal == 0 || n_cal >= n_rows)
    throw Error(ErrorKind::InvalidArgument,
                "split of " + std::to_string(n_rows) + " rows at fraction " +
                    std::to_string(fraction) + " leaves an empty calibration or evaluation set");
  std::vector<std::size_t> order(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) order[i] = i;
  Xoshiro256 rng(seed);
  for (std::size_t i = n_rows - 1; i > 0; --i)
    std::swap(order[i], order[static_cast<std::size_t>(rng.below(i + 1))]);
  SplitRows out;
  out.calibration.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_cal));
  out.evaluation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_cal), order.end());
  std::sort(out.calibration.begin(), out.calibration.end());
  std::sort(out.evaluation.begin(), out.evaluation.end());
  return out;
}

inline MethodResult evaluate_method(Method method, std::span<const std::uint8_t> predicted,
                                    std::span<const std::uint8_t> truth) {
  MethodResult r;
  r.method = method;
  r.counts = confusion(predicted, truth);
  r.accuracy = accuracy(r.counts);
  r.precision = precision(r.counts);
  r.recall = recall(r.counts);
  r.f1 = f1(r.counts);
  return r;
}

inline RunReport aggregate(const PredictionTable& table, const AggregateOptions& options = {}) {
  RunReport report;
  report.options = options;
  report.n_rows = table.n_rows();
  report.n_columns = table.n_columns();

  if (options.protocol == Protocol::split) {
    auto rows = split_rows(table.n_rows(), options.split_fraction, options.seed);
    report.calibration_rows = std::move(rows.calibration);
    report.evaluation_rows = std::move(rows.evaluation);
  } else {
    report.calibration_rows.resize(table.n_rows());
    for (std::size_t i = 0; i < table.n_rows(); ++i) report.calibration_rows[i] = i;
    report.evaluation_rows = report.calibration_rows;
  }
  const auto calibration = table.select_rows(report.calibration_rows);
  const auto evaluation = table.select_rows(report.evaluation_rows);

  report.summary = run_bma(calibration, options.bma);

  const auto truth = evaluation.labels();
  report.baytta =
      evaluate_method(Method::baytta, predict_labels(evaluation, Method::baytta, &report.summary),
                      truth);
  report.tta_mean =
      evaluate_method(Method::tta_mean, predict_labels(evaluation, Method::tta_mean), truth);
  report.uncertainty = uncertainty(report.summary, evaluation, report.baytta.accuracy.value);
  return report;
}

struct SimulateOptions {
  SyntheticConfig synth;  // synth.seed is the master seed
  std::size_t trials = 100;
  AggregateOptions aggregate;  // aggregate.seed is replaced per trial
};

struct TrialResult {
  std::uint64_t seed = 0;
  double baytta_accuracy = 0.0;
  double tta_mean_accuracy = 0.0;
  double sigma_baytta = 0.0;
  std::vector<double> inclusion_prob;
  std::size_t accepted_models = 0;
};

struct SimulationReport {
  SimulateOptions options;
  std::vector<TrialResult> trials;
  MeanStd baytta_accuracy;
  MeanStd tta_mean_accuracy;
  MeanStd sigma_baytta;
  double baytta_at_least_tta_fraction = 0.0;
  std::vector<double> mean_inclusion_prob;
  /// Trials where every adversarial column's inclusion probability is <= the
  /// smallest clean column's, and the stricter "<" count. Both stay 0 when
  /// there are no adversarial columns or no clean columns.
  std::size_t adversarial_min_inclusion_trials = 0;
  std::size_t adversarial_strict_min_inclusion_trials = 0;
};

/// Seed of trial t: derive_seed(master, t). It seeds both the generator and
/// the calibration split of that trial.
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return derive_seed(master, static_cast<std::uint64_t>(trial));
}

inline SimulationReport simulate(const SimulateOptions& options) {
  if (options.trials == 0) throw Error(ErrorKind::InvalidArgument, "trials must be at least 1");
  SimulationReport report;
  report.options = options;
  const std::size_t n_cols = options.synth.n_columns;
  const auto& adversarial = options.synth.adversarial_columns;
  const auto is_adversarial = [&](std::size_t j) {
    return std::find(adversarial.begin(), adversarial.end(), j) != adversarial.end();
  };

  std::vector<double> baytta_acc;
  std::vector<double> tta_acc;
  std::vector<double> sigmas;
  std::size_t wins = 0;
  report.mean_inclusion_prob.assign(n_cols, 0.0);
  for (std::size_t t = 0; t < options.trials; ++t) {
    const auto seed = trial_seed(options.synth.seed, t);
    auto synth = options.synth;
    synth.seed = seed;
    auto agg = options.aggregate;
    agg.seed = seed;
    const auto run = aggregate(synthesize(synth), agg);

    TrialResult tr;
    tr.seed = seed;
    tr.baytta_accuracy = run.baytta.accuracy.value;
    tr.tta_mean_accuracy = run.tta_mean.accuracy.value;
    tr.sigma_baytta = run.uncertainty.sigma_baytta;
    tr.inclusion_prob = run.summary.inclusion_prob;
    tr.accepted_models = run.summary.accepted.size();

    baytta_acc.push_back(tr.baytta_accuracy);
    tta_acc.push_back(tr.tta_mean_accuracy);
    sigmas.push_back(tr.sigma_baytta);
    if (tr.baytta_accuracy >= tr.tta_mean_accuracy) ++wins;
    for (std::size_t j = 0; j < n_cols; ++j) report.mean_inclusion_prob[j] += tr.inclusion_prob[j];

    double adv_max = -1.0;
    double clean_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (is_adversarial(j)) adv_max = std::max(adv_max, tr.inclusion_prob[j]);
      else clean_min = std::min(clean_min, tr.inclusion_prob[j]);
    }
    if (adv_max >= 0.0 && std::isfinite(clean_min)) {
      if (adv_max <= clean_min) ++report.adversarial_min_inclusion_trials;
      if (adv_max < clean_min) ++report.adversarial_strict_min_inclusion_trials;
    }
    report.trials.push_back(std::move(tr));
  }
  for (auto& v : report.mean_inclusion_prob) v /= static_cast<double>(options.trials);
  report.baytta_accuracy = mean_std(baytta_acc);
  report.tta_mean_accuracy = mean_std(tta_acc);
  report.sigma_baytta = mean_std(sigmas);
  report.baytta_at_least_tta_fraction =
      static_cast<double>(wins) / static_cast<double>(options.trials);
  return report;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using Json = nlohmann::ordered_json;

inline Json to_json(const Ratio& r) {
  return Json{{"value", r.value}, {"degenerate", r.degenerate}};
}

inline Json to_json(const MethodResult& m) {
  Json j;
  j["method"] = to_string(m.method);
  j["accuracy"] = m.accuracy.value;
  j["precision"] = to_json(m.precision);
  j["recall"] = to_json(m.recall);
  j["f1"] = to_json(m.f1);
  j["confusion"] = {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn},
                    {"fn", m.counts.fn}};
  return j;
}

inline Json to_json(const FitConfig& f) {
  return Json{{"max_iterations", f.max_iterations},
              {"convergence_tol", f.convergence_tol},
              {"grad_tol", f.grad_tol},
              {"ridge", f.ridge}};
}

inline Json to_json(const AggregateOptions& o) {
  Json j;
  j["mode"] = to_string(o.bma.mode);
  j["protocol"] = to_string(o.protocol);
  j["split_fraction"] = o.split_fraction;
  j["seed"] = o.seed;
  j["max_columns"] = o.bma.max_columns;
  j["fit"] = to_json(o.bma.fit);
  return j;
}

inline Json to_json(const BmaSummary& s) {
  Json j;
  j["mode"] = to_string(s.mode);
  j["candidates_evaluated"] = s.candidates_evaluated;
  j["log_l_total"] = s.log_l_total;
  j["inclusion_prob"] = s.inclusion_prob;
  j["expected_intercept"] = s.expected_intercept;
  j["expected_coeffs"] = s.expected_coeffs;
  Json models = Json::array();
  for (const auto& m : s.accepted) {
    Json mj;
    mj["subset"] = m.subset.indices();
    mj["bic"] = m.bic;
    mj["log_model_likelihood"] = m.log_model_likelihood;
    mj["posterior_weight"] = posterior_weight(m, s.log_l_total);
    mj["intercept"] = m.fitted.intercept;
    mj["coefficients"] = m.fitted.coefficients;
    mj["max_log_likelihood"] = m.fitted.max_log_likelihood;
    mj["iterations"] = m.fitted.iterations;
    mj["converged"] = m.fitted.converged;
    models.push_back(std::move(mj));
  }
  j["accepted_models"] = std::move(models);
  return j;
}

inline Json to_json(const SyntheticConfig& c) {
  Json j;
  j["n_rows"] = c.n_rows;
  j["n_columns"] = c.n_columns;
  j["signal_noise"] = c.signal_noise;
  j["adversarial_columns"] = c.adversarial_columns;
  j["label_flip_rate"] = c.label_flip_rate;
  j["class_separation"] = c.class_separation;
  j["seed"] = c.seed;
  return j;
}

inline Json to_json(const RunReport& r) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "aggregate";
  j["config"] = to_json(r.options);
  j["n_rows"] = r.n_rows;
  j["n_columns"] = r.n_columns;
  j["n_calibration"] = r.calibration_rows.size();
  j["n_evaluation"] = r.evaluation_rows.size();
  j["methods"] = Json::array({to_json(r.baytta), to_json(r.tta_mean)});
  j["sigma_baytta"] = r.uncertainty.sigma_baytta;
  j["per_column_accuracy"] = r.uncertainty.per_column_accuracy;
  j["bma"] = to_json(r.summary);
  return j;
}

inline Json to_json(const SimulationReport& r) {
  const auto ms = [](const MeanStd& m) { return Json{{"mean", m.mean}, {"std", m.std}}; };
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "simulate";
  j["config"] = to_json(r.options.aggregate);
  j["config"].erase("seed");
  j["config"]["trials"] = r.options.trials;
  j["synthetic"] = to_json(r.options.synth);
  j["baytta_accuracy"] = ms(r.baytta_accuracy);
  j["tta_mean_accuracy"] = ms(r.tta_mean_accuracy);
  j["sigma_baytta"] = ms(r.sigma_baytta);
  j["baytta_at_least_tta_fraction"] = r.baytta_at_least_tta_fraction;
  j["mean_inclusion_prob"] = r.mean_inclusion_prob;
  j["adversarial_min_inclusion_trials"] = r.adversarial_min_inclusion_trials;
  j["adversarial_strict_min_inclusion_trials"] = r.adversarial_strict_min_inclusion_trials;
  Json trials = Json::array();
  for (const auto& t : r.trials) {
    Json tj;
    tj["seed"] = t.seed;
    tj["baytta_accuracy"] = t.baytta_accuracy;
    tj["tta_mean_accuracy"] = t.tta_mean_accuracy;
    tj["sigma_baytta"] = t.sigma_baytta;
    tj["accepted_models"] = t.accepted_models;
    tj["inclusion_prob"] = t.inclusion_prob;
    trials.push_back(std::move(tj));
  }
  j["trials"] = std::move(trials);
  return j;
}

}  // namespace baytta
