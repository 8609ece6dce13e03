// baytta: aggregate TTA prediction tables with Bayesian model averaging.
//
//   baytta aggregate --input preds.csv [--mode greedy|full]
//                    [--protocol split|transductive] [--split-fraction f]
//                    [--seed s] [--json report.json]
//   baytta simulate  [--trials n] [--rows n] [--columns n] [--signal-noise s]
//                    [--adversarial i ...] [--flip-rate r] [--seed s] ...
//   baytta synthesize --output table.csv [generator flags]
//
// Exit codes: 0 success, 2 input error, 3 degenerate data.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "baytta/baytta.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

int exit_code_for(const baytta::Error& e) {
  switch (e.kind()) {
    case baytta::ErrorKind::SingleClass:
    case baytta::ErrorKind::NonFinite:
      return kExitDegenerate;
    default:
      return kExitInput;
  }
}

void write_json(const baytta::Json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw baytta::Error(baytta::ErrorKind::IoError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

void print_run(const baytta::RunReport& r) {
  std::printf("rows %zu (calibration %zu, evaluation %zu), columns %zu, protocol %s, mode %s\n",
              r.n_rows, r.calibration_rows.size(), r.evaluation_rows.size(), r.n_columns,
              baytta::to_string(r.options.protocol), baytta::to_string(r.summary.mode));
  std::printf("%-10s %9s %9s %9s %9s\n", "method", "accuracy", "precision", "recall", "f1");
  for (const auto* m : {&r.baytta, &r.tta_mean})
    std::printf("%-10s %9.4f %9.4f %9.4f %9.4f\n", baytta::to_string(m->method),
                m->accuracy.value, m->precision.value, m->recall.value, m->f1.value);
  std::printf("sigma_baytta %.6f\n", r.uncertainty.sigma_baytta);
  std::printf("%-8s %12s %14s %12s\n", "column", "inclusion", "E[beta]", "accuracy");
  for (std::size_t j = 0; j < r.n_columns; ++j)
    std::printf("pred_%-3zu %12.6f %14.6f %12.4f\n", j, r.summary.inclusion_prob[j],
                r.summary.expected_coeffs[j], r.uncertainty.per_column_accuracy[j]);
  std::printf("intercept %.6f, accepted models %zu of %zu evaluated\n",
              r.summary.expected_intercept, r.summary.accepted.size(),
              r.summary.candidates_evaluated);
  for (const auto& m : r.summary.accepted)
    std::printf("  %-16s BIC %12.4f  weight %.6f\n", m.subset.to_string().c_str(), m.bic,
                baytta::posterior_weight(m, r.summary.log_l_total));
}

void print_simulation(const baytta::SimulationReport& r) {
  std::printf("trials %zu, rows %zu, columns %zu, signal_noise %g\n", r.options.trials,
              r.options.synth.n_rows, r.options.synth.n_columns, r.options.synth.signal_noise);
  std::printf("baytta   accuracy %.4f +- %.4f\n", r.baytta_accuracy.mean, r.baytta_accuracy.std);
  std::printf("tta_mean accuracy %.4f +- %.4f\n", r.tta_mean_accuracy.mean,
              r.tta_mean_accuracy.std);
  std::printf("sigma_baytta      %.4f +- %.4f\n", r.sigma_baytta.mean, r.sigma_baytta.std);
  std::printf("baytta >= tta_mean in %.1f%% of trials\n", 100.0 * r.baytta_at_least_tta_fraction);
  for (std::size_t j = 0; j < r.mean_inclusion_prob.size(); ++j)
    std::printf("pred_%-3zu mean inclusion %.4f\n", j, r.mean_inclusion_prob[j]);
  if (!r.options.synth.adversarial_columns.empty())
    std::printf("adversarial inclusion smallest in %zu trials (strictly in %zu)\n",
                r.adversarial_min_inclusion_trials, r.adversarial_strict_min_inclusion_trials);
}

void add_bma_flags(CLI::App* cmd, baytta::AggregateOptions& opt) {
  const std::map<std::string, baytta::BmaMode> modes{{"greedy", baytta::BmaMode::greedy},
                                                     {"full", baytta::BmaMode::full}};
  const std::map<std::string, baytta::Protocol> protocols{
      {"split", baytta::Protocol::split}, {"transductive", baytta::Protocol::transductive}};
  cmd->add_option("--mode", opt.bma.mode, "Model search: greedy lattice or full enumeration")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  cmd->add_option("--protocol", opt.protocol, "Fit on a calibration split or on all rows")
      ->transform(CLI::CheckedTransformer(protocols, CLI::ignore_case));
  cmd->add_option("--split-fraction", opt.split_fraction, "Calibration share of the rows");
  cmd->add_option("--max-columns", opt.bma.max_columns, "Refuse tables wider than this");
  cmd->add_option("--ridge", opt.bma.fit.ridge, "L2 penalty on non-intercept coefficients");
  cmd->add_option("--max-iterations", opt.bma.fit.max_iterations, "IRLS iteration cap");
}

void add_synth_flags(CLI::App* cmd, baytta::SyntheticConfig& cfg) {
  cmd->add_option("--rows", cfg.n_rows, "Samples per table")->check(CLI::PositiveNumber);
  cmd->add_option("--columns", cfg.n_columns, "Prediction columns (original + augmentations)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--signal-noise", cfg.signal_noise, "Logit-scale Gaussian noise per column")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--adversarial", cfg.adversarial_columns,
                  "Columns replaced by uniform noise");
  cmd->add_option("--flip-rate", cfg.label_flip_rate, "Fraction of labels flipped");
  cmd->add_option("--separation", cfg.class_separation, "Mixture component logit offset");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BayTTA: Bayesian model averaging over test-time augmentation predictions"};
  app.require_subcommand(1);

  std::string input;
  std::string json_path;
  std::string output;
  baytta::AggregateOptions agg;
  baytta::SimulateOptions sim;
  baytta::SyntheticConfig synth;

  auto* aggregate = app.add_subcommand("aggregate", "Fit BMA on a prediction CSV and evaluate");
  aggregate->add_option("--input", input, "Prediction table CSV")->required();
  aggregate->add_option("--seed", agg.seed, "Seed for the calibration split");
  aggregate->add_option("--json", json_path, "Write the JSON report here");
  add_bma_flags(aggregate, agg);

  auto* simulate = app.add_subcommand("simulate", "Repeat aggregate over synthetic tables");
  simulate->add_option("--trials", sim.trials, "Number of trials")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.synth.seed, "Master seed");
  simulate->add_option("--json", json_path, "Write the JSON report here");
  add_synth_flags(simulate, sim.synth);
  add_bma_flags(simulate, sim.aggregate);

  auto* synthesize = app.add_subcommand("synthesize", "Write a synthetic prediction CSV");
  synthesize->add_option("--output", output, "Destination CSV")->required();
  synthesize->add_option("--seed", synth.seed, "Generator seed");
  add_synth_flags(synthesize, synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*aggregate) {
      const auto table = baytta::load_csv(input);
      const auto report = baytta::aggregate(table, agg);
      print_run(report);
      if (!json_path.empty()) write_json(baytta::to_json(report), json_path);
    } else if (*simulate) {
      const auto report = baytta::simulate(sim);
      print_simulation(report);
      if (!json_path.empty()) write_json(baytta::to_json(report), json_path);
    } else if (*synthesize) {
      baytta::save_csv(baytta::synthesize(synth), output);
    }
  } catch (const baytta::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  }
  return 0;
}
