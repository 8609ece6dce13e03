#pragma once

#include <cstdint>
#include <vector>

#include "baytta/data.hpp"
#include "baytta/table.hpp"
#include "oracle/fd_ascent.hpp"

namespace fixtures {

/// The shared seed-42 table: 3 columns, logit noise 0.5, column 2 replaced
/// by uniform noise.
inline baytta::SyntheticConfig seed42_config(std::size_t rows = 200) {
  baytta::SyntheticConfig c;
  c.n_rows = rows;
  c.n_columns = 3;
  c.signal_noise = 0.5;
  c.adversarial_columns = {2};
  c.seed = 42;
  return c;
}

inline baytta::PredictionTable seed42(std::size_t rows = 200) {
  return baytta::synthesize(seed42_config(rows));
}

inline std::vector<std::vector<double>> columns_of(const baytta::PredictionTable& t) {
  std::vector<std::vector<double>> out;
  for (std::size_t j = 0; j < t.n_columns(); ++j) {
    auto c = t.column(j);
    out.emplace_back(c.begin(), c.end());
  }
  return out;
}

inline std::vector<int> labels_of(const baytta::PredictionTable& t) {
  return {t.labels().begin(), t.labels().end()};
}

inline oracle::Problem problem_of(const baytta::PredictionTable& t,
                                  const std::vector<std::size_t>& cols, double ridge) {
  oracle::Problem pb;
  pb.ridge = ridge;
  pb.y = labels_of(t);
  pb.rows.assign(t.n_rows(), {});
  for (std::size_t n = 0; n < t.n_rows(); ++n)
    for (auto j : cols) pb.rows[n].push_back(t.at(n, j));
  return pb;
}

}  // namespace fixtures
