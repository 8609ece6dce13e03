#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "baytta/error.hpp"

namespace baytta {

/// Binary confusion counts with class 1 as the positive class.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// A ratio that may have had a zero denominator. Degenerate ratios are 0.
struct Ratio {
  double value = 0.0;
  bool degenerate = false;
  operator double() const noexcept { return value; }
};

inline ConfusionCounts confusion(std::span<const std::uint8_t> predicted,
                                 std::span<const std::uint8_t> truth) {
  if (predicted.size() != truth.size())
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(predicted.size()) + " predictions vs " +
                    std::to_string(truth.size()) + " labels");
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] > 1 || truth[i] > 1)
      throw Error(ErrorKind::NonBinaryLabel, "entry " + std::to_string(i) + " is not binary");
    if (predicted[i]) {
      truth[i] ? ++c.tp : ++c.fp;
    } else {
      truth[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

namespace detail {
inline Ratio ratio(std::size_t num, std::size_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}
}  // namespace detail

inline Ratio accuracy(const ConfusionCounts& c) { return detail::ratio(c.tp + c.tn, c.total()); }
inline Ratio precision(const ConfusionCounts& c) { return detail::ratio(c.tp, c.tp + c.fp); }
inline Ratio recall(const ConfusionCounts& c) { return detail::ratio(c.tp, c.tp + c.fn); }

inline Ratio f1(const ConfusionCounts& c) {
  const Ratio pr = precision(c);
  const Ratio re = recall(c);
  if (pr.value + re.value == 0.0) return {0.0, true};
  return {2.0 * pr.value * re.value / (pr.value + re.value), false};
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and standard deviation. `ddof` = 0 gives the population STD used in
/// reports; 1 gives the Bessel-corrected sample STD.
inline MeanStd mean_std(std::span<const double> values, std::size_t ddof = 0) {
  if (values.empty()) throw Error(ErrorKind::Empty, "mean_std of an empty list");
  if (ddof >= values.size())
    throw Error(ErrorKind::InvalidArgument, "ddof must be smaller than the sample size");
  // exact for constant input, where the summed mean may be off by an ulp
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); }))
    return {values.front(), 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - ddof))};
}

}  // namespace baytta
