#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "baytta/error.hpp"
#include "baytta/math.hpp"
#include "baytta/random.hpp"
#include "baytta/table.hpp"

namespace baytta {

// ---------------------------------------------------------------------------
// CSV
//
// Format: UTF-8, LF line endings, header `label,pred_0,...,pred_k`, one row
// per sample. Labels are 0 or 1, predictions are decimal literals in [0, 1].
// The writer emits predictions with 17 significant digits so that a
// load/save cycle reproduces every double exactly.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline bool parse_double(std::string_view text, double& value) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

inline std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace detail

/// Parses a prediction table. Errors carry the 1-based line (header is line 1)
/// and 1-based field of the first offending location.
inline PredictionTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::MissingHeader, "input is empty", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = detail::split_fields(line);
  if (header.size() < 2 || header[0] != "label")
    throw Error(ErrorKind::MissingHeader, "expected header 'label,pred_0,...'", 1);
  for (std::size_t j = 1; j < header.size(); ++j) {
    if (header[j] != "pred_" + std::to_string(j - 1))
      throw Error(ErrorKind::MissingHeader,
                  "header field " + std::to_string(j + 1) + " should be pred_" +
                      std::to_string(j - 1),
                  1, j + 1);
  }
  const std::size_t n_cols = header.size() - 1;

  std::vector<std::vector<double>> columns(n_cols);
  std::vector<std::uint8_t> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = detail::split_fields(line);
    if (fields.size() != n_cols + 1)
      throw Error(ErrorKind::RaggedRow,
                  "line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(n_cols + 1),
                  line_no);

    double label = 0.0;
    if (!detail::parse_double(fields[0], label) || (label != 0.0 && label != 1.0))
      throw Error(ErrorKind::NonBinaryLabel,
                  "line " + std::to_string(line_no) + ": label '" +
                      std::string(fields[0]) + "' is not 0 or 1",
                  line_no, 1);
    labels.push_back(label == 1.0 ? 1 : 0);

    for (std::size_t j = 0; j < n_cols; ++j) {
      double v = 0.0;
      if (!detail::parse_double(fields[j + 1], v))
        throw Error(ErrorKind::InvalidNumber,
                    "line " + std::to_string(line_no) + ", field " +
                        std::to_string(j + 2) + ": '" + std::string(fields[j + 1]) +
                        "' is not a number",
                    line_no, j + 2);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw Error(ErrorKind::OutOfRange,
                    "line " + std::to_string(line_no) + ", field " +
                        std::to_string(j + 2) + ": " + std::string(fields[j + 1]) +
                        " is outside [0, 1]",
                    line_no, j + 2);
      columns[j].push_back(v);
    }
  }
  if (labels.empty())
    throw Error(ErrorKind::EmptyTable, "no data rows after the header", 2);
  return PredictionTable(std::move(columns), std::move(labels));
}

inline PredictionTable load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return read_csv(in);
}

inline void write_csv(const PredictionTable& table, std::ostream& out) {
  std::string text = "label";
  for (std::size_t j = 0; j < table.n_columns(); ++j) text += ",pred_" + std::to_string(j);
  text += '\n';
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    text += table.labels()[r] ? '1' : '0';
    for (std::size_t j = 0; j < table.n_columns(); ++j) {
      text += ',';
      text += detail::format_double(table.at(r, j));
    }
    text += '\n';
  }
  out << text;
}

inline void save_csv(const PredictionTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  write_csv(table, out);
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Synthetic TTA tables
// ---------------------------------------------------------------------------

struct SyntheticConfig {
  std::size_t n_rows = 200;
  std::size_t n_columns = 4;
  /// Standard deviation of the Gaussian perturbation added on the logit scale.
  double signal_noise = 0.5;
  /// Columns replaced by Uniform(0, 1) noise.
  std::vector<std::size_t> adversarial_columns;
  /// Fraction of labels flipped after drawing, in [0, 0.5).
  double label_flip_rate = 0.0;
  /// Distance of each mixture component's mean logit from zero.
  double class_separation = 2.0;
  std::uint64_t seed = 42;
};

struct SyntheticTable {
  PredictionTable table;
  std::vector<double> latent;  // true per-row probability
};

/// Draw order (fixed, for reproducibility):
///   1. per row: component c ~ Bernoulli(1/2), latent logit
///      z = (2c - 1) * class_separation + N(0, 1) clamped to [-30, 30],
///      label ~ Bernoulli(sigmoid(z));
///   2. round(label_flip_rate * n_rows) distinct rows chosen by partial
///      Fisher-Yates have their label flipped;
///   3. per column, per row: Uniform(0, 1) for adversarial columns, else
///      sigmoid(clamp(z + signal_noise * N(0, 1))).
inline SyntheticTable synthesize_with_latent(const SyntheticConfig& config) {
  if (config.n_rows == 0 || config.n_columns == 0)
    throw Error(ErrorKind::InvalidArgument, "synthetic table needs rows and columns");
  if (!(config.signal_noise >= 0.0) || !std::isfinite(config.signal_noise))
    throw Error(ErrorKind::InvalidArgument, "signal_noise must be finite and >= 0");
  if (!(config.label_flip_rate >= 0.0 && config.label_flip_rate < 0.5))
    throw Error(ErrorKind::InvalidArgument, "label_flip_rate must lie in [0, 0.5)");
  for (auto a : config.adversarial_columns)
    if (a >= config.n_columns)
      throw Error(ErrorKind::InvalidArgument,
                  "adversarial column " + std::to_string(a) + " out of range");

  static constexpr double kLogitClamp = 30.0;
  const auto clamp = [](double z) { return std::clamp(z, -kLogitClamp, kLogitClamp); };

  Xoshiro256 rng(config.seed);
  const std::size_t n = config.n_rows;
  std::vector<double> logit(n);
  std::vector<double> latent(n);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double centre = rng.bernoulli(0.5) ? config.class_separation : -config.class_separation;
    logit[r] = clamp(centre + rng.normal());
    latent[r] = sigmoid(logit[r]);
    labels[r] = rng.bernoulli(latent[r]) ? 1 : 0;
  }

  const auto n_flip =
      static_cast<std::size_t>(std::llround(config.label_flip_rate * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < n_flip; ++i) {
    const auto pick = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[pick]);
    labels[order[i]] ^= 1;
  }

  std::vector<std::vector<double>> columns(config.n_columns, std::vector<double>(n));
  for (std::size_t j = 0; j < config.n_columns; ++j) {
    const bool adversarial =
        std::find(config.adversarial_columns.begin(), config.adversarial_columns.end(), j) !=
        config.adversarial_columns.end();
    for (std::size_t r = 0; r < n; ++r) {
      if (adversarial) {
        columns[j][r] = rng.uniform();
      } else {
        columns[j][r] = sigmoid(clamp(logit[r] + config.signal_noise * rng.normal()));
      }
    }
  }
  return {PredictionTable(std::move(columns), std::move(labels)), std::move(latent)};
}

inline PredictionTable synthesize(const SyntheticConfig& config) {
  return synthesize_with_latent(config).table;
}

}  // namespace baytta
