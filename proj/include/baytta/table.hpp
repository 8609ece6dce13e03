#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "baytta/error.hpp"

namespace baytta {

/// Per-sample TTA predictions with binary labels.
///
/// Column 0 holds the prediction for the original input; columns 1..k hold
/// the predictions for the k augmented versions. Storage is column-major so
/// that a candidate model can address a subset of columns without copying.
class PredictionTable {
 public:
  PredictionTable() = default;

  /// Validates and takes ownership. Throws Error on any invariant violation.
  PredictionTable(std::vector<std::vector<double>> columns,
                  std::vector<std::uint8_t> labels)
      : columns_(std::move(columns)), labels_(std::move(labels)) {
    validate();
  }

  std::size_t n_rows() const noexcept { return labels_.size(); }
  std::size_t n_columns() const noexcept { return columns_.size(); }

  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  double at(std::size_t row, std::size_t col) const { return columns_.at(col).at(row); }

  std::vector<double> row(std::size_t r) const {
    std::vector<double> out(n_columns());
    for (std::size_t j = 0; j < n_columns(); ++j) out[j] = columns_[j].at(r);
    return out;
  }

  bool has_both_classes() const noexcept {
    bool zero = false;
    bool one = false;
    for (auto y : labels_) (y ? one : zero) = true;
    return zero && one;
  }

  /// Rows selected by index, in the given order.
  PredictionTable select_rows(std::span<const std::size_t> rows) const {
    std::vector<std::vector<double>> cols(n_columns());
    std::vector<std::uint8_t> labels;
    labels.reserve(rows.size());
    for (auto& c : cols) c.reserve(rows.size());
    for (auto r : rows) {
      labels.push_back(labels_.at(r));
      for (std::size_t j = 0; j < n_columns(); ++j) cols[j].push_back(columns_[j].at(r));
    }
    return PredictionTable(std::move(cols), std::move(labels));
  }

  /// Columns selected by index, in the given order.
  PredictionTable select_columns(std::span<const std::size_t> cols) const {
    std::vector<std::vector<double>> out;
    out.reserve(cols.size());
    for (auto j : cols) out.push_back(columns_.at(j));
    return PredictionTable(std::move(out), labels_);
  }

  friend bool operator==(const PredictionTable&, const PredictionTable&) = default;

 private:
  void validate() const {
    if (columns_.empty())
      throw Error(ErrorKind::InvalidArgument, "prediction table needs at least one column");
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (columns_[j].size() != labels_.size())
        throw Error(ErrorKind::DimensionMismatch,
                    "column " + std::to_string(j) + " has " +
                        std::to_string(columns_[j].size()) + " rows, labels have " +
                        std::to_string(labels_.size()));
      for (std::size_t r = 0; r < columns_[j].size(); ++r) {
        const double v = columns_[j][r];
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
          throw Error(ErrorKind::OutOfRange,
                      "prediction at row " + std::to_string(r) + ", column " +
                          std::to_string(j) + " is not a probability");
      }
    }
    for (std::size_t r = 0; r < labels_.size(); ++r)
      if (labels_[r] > 1)
        throw Error(ErrorKind::NonBinaryLabel, "label at row " + std::to_string(r));
  }

  std::vector<std::vector<double>> columns_;
  std::vector<std::uint8_t> labels_;
};

}  // namespace baytta
