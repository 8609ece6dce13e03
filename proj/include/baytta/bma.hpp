#pragma once

// Bayesian model averaging over subsets of TTA prediction columns.
//
// Every candidate model M_I is a logistic regression on the column subset I
// (plus intercept) scored by BIC; its model likelihood is exp(-BIC/2) and,
// under a uniform model prior, its posterior weight is that likelihood
// divided by the sum over all accepted candidates. All likelihood arithmetic
// is done on the log scale because exp(-BIC/2) underflows for realistic N.
//
// Greedy mode walks the subset lattice one size at a time. Size-1 candidates
// are all singletons; size-m candidates are the supersets of the models
// accepted at size m-1. A candidate is accepted only if its log likelihood
// strictly exceeds the best accepted so far (the running maximum is never
// reset between sizes). Candidates are visited in lexicographic order, so
// the first of several tied candidates wins.
//
// Full mode accepts every non-empty subset, which is textbook BMA.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "baytta/error.hpp"
#include "baytta/logreg.hpp"
#include "baytta/math.hpp"
#include "baytta/table.hpp"

namespace baytta {

/// Sorted, distinct, 0-based column indices (column 0 is the original input).
class PredictorSubset {
 public:
  PredictorSubset() = default;
  explicit PredictorSubset(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) throw Error(ErrorKind::InvalidArgument, "predictor subset is empty");
    for (std::size_t i = 1; i < indices_.size(); ++i)
      if (indices_[i - 1] >= indices_[i])
        throw Error(ErrorKind::InvalidArgument, "predictor subset must be sorted and distinct");
  }

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }

  bool contains(std::size_t column) const {
    return std::binary_search(indices_.begin(), indices_.end(), column);
  }
  bool is_superset_of(const PredictorSubset& other) const {
    return std::includes(indices_.begin(), indices_.end(), other.indices_.begin(),
                         other.indices_.end());
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(indices_[i]);
    }
    return s + "}";
  }

  friend auto operator<=>(const PredictorSubset&, const PredictorSubset&) = default;

 private:
  std::vector<std::size_t> indices_;
};

struct CandidateModel {
  PredictorSubset subset;
  FittedModel fitted;
  double bic = 0.0;
  double log_model_likelihood = 0.0;  // -bic / 2
};

enum class BmaMode { greedy, full };

inline const char* to_string(BmaMode mode) { return mode == BmaMode::greedy ? "greedy" : "full"; }

struct BmaConfig {
  BmaMode mode = BmaMode::greedy;
  FitConfig fit;
  std::size_t max_columns = 25;
};

struct BmaSummary {
  std::vector<CandidateModel> accepted;  // in processing order
  double log_l_total = -std::numeric_limits<double>::infinity();
  std::vector<double> inclusion_prob;   // per column
  std::vector<double> expected_coeffs;  // per column
  double expected_intercept = 0.0;
  BmaMode mode = BmaMode::greedy;
  std::size_t candidates_evaluated = 0;

  std::size_t n_columns() const noexcept { return inclusion_prob.size(); }
};

/// Posterior probability of an accepted model: exp(l_I - log L_total).
inline double posterior_weight(const CandidateModel& model, double log_l_total) {
  return std::exp(model.log_model_likelihood - log_l_total);
}

/// Ratio of posterior probabilities; > 1 favours `a`. The common prior and
/// normaliser cancel, leaving exp(l_a - l_b).
inline double bayes_factor(const CandidateModel& a, const CandidateModel& b) {
  return std::exp(a.log_model_likelihood - b.log_model_likelihood);
}

namespace detail {

// Calls fn(combination) for every size-`k` subset of `pool` (sorted) in
// lexicographic order.
template <class Fn>
void for_each_combination(const std::vector<std::size_t>& pool, std::size_t k, Fn&& fn) {
  if (k > pool.size()) return;
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[i] = i;
  std::vector<std::size_t> pick(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) pick[i] = pool[pos[i]];
    fn(pick);
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == pool.size() - k + (i - 1)) --i;
    if (i == 0) return;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

}  // namespace detail

/// Size-`size` candidate subsets of {0..n_columns-1}. For size 1 these are
/// all singletons; otherwise every size-`size` superset of some subset in
/// `previous_accepted`. Output is in lexicographic order without duplicates.
inline std::vector<PredictorSubset> generate_candidates(
    std::size_t size, const std::vector<PredictorSubset>& previous_accepted,
    std::size_t n_columns) {
  if (size < 1 || size > n_columns)
    throw Error(ErrorKind::InvalidArgument,
                "candidate size " + std::to_string(size) + " outside [1, " +
                    std::to_string(n_columns) + "]");
  std::vector<PredictorSubset> out;
  if (size == 1) {
    for (std::size_t j = 0; j < n_columns; ++j) out.emplace_back(std::vector<std::size_t>{j});
    return out;
  }
  std::set<PredictorSubset> found;
  for (const auto& base : previous_accepted) {
    if (base.size() > size) continue;
    if (base.indices().back() >= n_columns)
      throw Error(ErrorKind::InvalidArgument, "subset " + base.to_string() + " out of range");
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < n_columns; ++j)
      if (!base.contains(j)) rest.push_back(j);
    detail::for_each_combination(rest, size - base.size(), [&](const auto& extra) {
      std::vector<std::size_t> merged;
      merged.reserve(size);
      std::merge(base.indices().begin(), base.indices().end(), extra.begin(), extra.end(),
                 std::back_inserter(merged));
      found.emplace(std::move(merged));
    });
  }
  out.assign(found.begin(), found.end());
  return out;
}

/// Fits and scores one candidate.
inline CandidateModel score_candidate(const PredictionTable& table, PredictorSubset subset,
                                      const FitConfig& fit) {
  CandidateModel m;
  try {
    m.fitted = fit_logistic(DesignMatrix::from_table(table, subset.indices()), fit);
  } catch (const Error& e) {
    throw Error(e.kind(), "candidate " + subset.to_string() + ": " + e.what());
  }
  m.bic = bic(m.fitted.max_log_likelihood, subset.size() + 1, table.n_rows());
  m.log_model_likelihood = -m.bic / 2.0;
  m.subset = std::move(subset);
  return m;
}

namespace detail {

inline void finalize(BmaSummary& s, std::size_t n_columns) {
  s.inclusion_prob.assign(n_columns, 0.0);
  s.expected_coeffs.assign(n_columns, 0.0);
  s.expected_intercept = 0.0;
  for (const auto& m : s.accepted) {
    const double w = posterior_weight(m, s.log_l_total);
    s.expected_intercept += w * m.fitted.intercept;
    const auto& idx = m.subset.indices();
    for (std::size_t c = 0; c < idx.size(); ++c) {
      s.inclusion_prob[idx[c]] += w;
      s.expected_coeffs[idx[c]] += w * m.fitted.coefficients[c];
    }
  }
}

}  // namespace detail

inline BmaSummary run_bma(const PredictionTable& table, const BmaConfig& config = {}) {
  const std::size_t n_cols = table.n_columns();
  if (config.max_columns < 1)
    throw Error(ErrorKind::InvalidArgument, "max_columns must be at least 1");
  if (n_cols > config.max_columns)
    throw Error(ErrorKind::TooManyColumns,
                std::to_string(n_cols) + " columns exceed the limit of " +
                    std::to_string(config.max_columns));
  if (!table.has_both_classes())
    throw Error(ErrorKind::SingleClass, "table labels contain a single class");
  config.fit.validate();

  BmaSummary summary;
  summary.mode = config.mode;

  if (config.mode == BmaMode::full) {
    std::vector<std::size_t> all(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) all[j] = j;
    for (std::size_t size = 1; size <= n_cols; ++size) {
      detail::for_each_combination(all, size, [&](const auto& pick) {
        auto m = score_candidate(table, PredictorSubset(pick), config.fit);
        summary.log_l_total = log_add_exp(summary.log_l_total, m.log_model_likelihood);
        summary.accepted.push_back(std::move(m));
        ++summary.candidates_evaluated;
      });
    }
  } else {
    double log_l_max = -std::numeric_limits<double>::infinity();
    std::vector<PredictorSubset> previous;
    for (std::size_t size = 1; size <= n_cols; ++size) {
      const auto candidates = generate_candidates(size, previous, n_cols);
      if (candidates.empty()) break;
      std::vector<CandidateModel> scored;
      scored.reserve(candidates.size());
      for (const auto& subset : candidates)
        scored.push_back(score_candidate(table, subset, config.fit));
      summary.candidates_evaluated += scored.size();

      previous.clear();
      for (auto& m : scored) {
        if (!(m.log_model_likelihood > log_l_max)) continue;
        log_l_max = m.log_model_likelihood;
        summary.log_l_total = log_add_exp(summary.log_l_total, m.log_model_likelihood);
        previous.push_back(m.subset);
        summary.accepted.push_back(std::move(m));
      }
    }
  }

  detail::finalize(summary, n_cols);
  return summary;
}

}  // namespace baytta
