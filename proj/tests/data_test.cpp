#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "baytta/data.hpp"
#include "baytta/random.hpp"
#include "fixtures.hpp"

namespace {

using baytta::Error;
using baytta::ErrorKind;
using baytta::PredictionTable;

PredictionTable parse(const std::string& text) {
  std::istringstream in(text);
  return baytta::read_csv(in);
}

std::string serialize(const PredictionTable& t) {
  std::ostringstream out;
  baytta::write_csv(t, out);
  return out.str();
}

void expect_error(const std::string& text, ErrorKind kind, std::size_t line) {
  try {
    parse(text);
    FAIL() << "expected " << baytta::to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

TEST(Random, Xoshiro256KnownSequence) {
  // Reference: xoshiro256** seeded from SplitMix64(0).
  baytta::Xoshiro256 rng(0);
  std::uint64_t sm = 0;
  EXPECT_EQ(baytta::splitmix64(sm), 0xe220a8397b1dcdafULL);
  const auto a = rng();
  const auto b = rng();
  EXPECT_NE(a, b);
  baytta::Xoshiro256 again(0);
  EXPECT_EQ(again(), a);
}

TEST(Random, UniformStaysInOpenInterval) {
  baytta::Xoshiro256 rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Csv, ParsesMinimalTable) {
  const auto t = parse("label,pred_0\n1,0.9\n0,0.2\n");
  EXPECT_EQ(t.n_rows(), 2u);
  EXPECT_EQ(t.n_columns(), 1u);
  EXPECT_EQ(t.labels()[0], 1);
  EXPECT_DOUBLE_EQ(t.at(1, 0), 0.2);
}

TEST(Csv, AcceptsMissingTrailingNewlineAndCrlf) {
  const auto t = parse("label,pred_0,pred_1\r\n1,0.9,0.8\r\n0,0.2,0.1");
  EXPECT_EQ(t.n_rows(), 2u);
  EXPECT_DOUBLE_EQ(t.at(1, 1), 0.1);
}

TEST(Csv, OutOfRangeNamesLineAndField) {
  try {
    parse("label,pred_0,pred_1\n1,0.5,1.5\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
}

TEST(Csv, LocatedErrors) {
  expect_error("", ErrorKind::MissingHeader, 1);
  expect_error("1,0.5\n", ErrorKind::MissingHeader, 1);
  expect_error("label,pred_1\n1,0.5\n", ErrorKind::MissingHeader, 1);
  expect_error("label,pred_0\n1,0.5\n0\n", ErrorKind::RaggedRow, 3);
  expect_error("label,pred_0\n1,0.5\n\n0,0.1\n", ErrorKind::RaggedRow, 3);
  expect_error("label,pred_0\n2,0.5\n", ErrorKind::NonBinaryLabel, 2);
  expect_error("label,pred_0\n1,abc\n", ErrorKind::InvalidNumber, 2);
  expect_error("label,pred_0\n1,nan\n", ErrorKind::OutOfRange, 2);
  expect_error("label,pred_0\n1,-0.1\n", ErrorKind::OutOfRange, 2);
  expect_error("label,pred_0\n", ErrorKind::EmptyTable, 2);
}

TEST(Csv, WriterFormat) {
  const PredictionTable t({{0.1, 1.0}, {0.0, 0.25}}, {1, 0});
  EXPECT_EQ(serialize(t),
            "label,pred_0,pred_1\n"
            "1,0.10000000000000001,0\n"
            "0,1,0.25\n");
}

TEST(Csv, RoundTripIsBitExact) {
  std::vector<PredictionTable> tables;
  tables.push_back(PredictionTable({{0.123456789012345678}}, {1}));  // single row
  {
    baytta::SyntheticConfig c;
    c.n_rows = 30;
    c.n_columns = 1;  // no augmentation columns
    tables.push_back(baytta::synthesize(c));
  }
  tables.push_back(fixtures::seed42());
  for (const auto& t : tables) {
    const auto text = serialize(t);
    const auto back = parse(text);
    EXPECT_EQ(back, t);
    EXPECT_EQ(serialize(back), text);
  }
}

TEST(Csv, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "baytta_data_test.csv";
  const auto t = fixtures::seed42(50);
  baytta::save_csv(t, path);
  EXPECT_EQ(baytta::load_csv(path), t);
  std::filesystem::remove(path);
  EXPECT_THROW(baytta::load_csv(path), Error);
}

TEST(Csv, RandomTablesRoundTrip) {
  baytta::Xoshiro256 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 1 + rng.below(20);
    const std::size_t cols = 1 + rng.below(6);
    std::vector<std::vector<double>> columns(cols, std::vector<double>(rows));
    std::vector<std::uint8_t> labels(rows);
    for (auto& c : columns)
      for (auto& v : c) {
        // mix of generic doubles, subnormal-ish tiny values and endpoints
        const auto kind = rng.below(4);
        v = kind == 0 ? rng.uniform() : kind == 1 ? rng.uniform() * 1e-300 : kind == 2 ? 0.0 : 1.0;
      }
    for (auto& y : labels) y = static_cast<std::uint8_t>(rng.below(2));
    const PredictionTable t(std::move(columns), std::move(labels));
    ASSERT_EQ(parse(serialize(t)), t);
  }
}

TEST(Table, RejectsInvalidEntries) {
  EXPECT_THROW(PredictionTable({{0.5, 2.0}}, {0, 1}), Error);
  EXPECT_THROW(PredictionTable({{0.5}}, {0, 1}), Error);
  EXPECT_THROW(PredictionTable({{0.5}}, {3}), Error);
  EXPECT_THROW(PredictionTable({}, {}), Error);
}

TEST(Synthesize, ZeroNoiseColumnsEqualLatent) {
  baytta::SyntheticConfig c;
  c.n_rows = 100;
  c.n_columns = 4;
  c.signal_noise = 0.0;
  const auto s = baytta::synthesize_with_latent(c);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t r = 0; r < 100; ++r) ASSERT_EQ(s.table.at(r, j), s.latent[r]);
}

TEST(Synthesize, DeterministicPerSeed) {
  const auto a = fixtures::seed42();
  const auto b = fixtures::seed42();
  EXPECT_EQ(a, b);
  auto other = fixtures::seed42_config();
  other.seed = 43;
  EXPECT_NE(baytta::synthesize(other), a);
}

TEST(Synthesize, EntriesInOpenUnitInterval) {
  baytta::SyntheticConfig c;
  c.n_rows = 500;
  c.n_columns = 5;
  c.signal_noise = 3.0;
  c.class_separation = 20.0;
  c.adversarial_columns = {4};
  const auto t = baytta::synthesize(c);
  for (std::size_t j = 0; j < t.n_columns(); ++j)
    for (double v : t.column(j)) {
      ASSERT_GT(v, 0.0);
      ASSERT_LT(v, 1.0);
    }
}

TEST(Synthesize, FlipsExactFraction) {
  auto c = fixtures::seed42_config();
  const auto clean = baytta::synthesize(c);
  c.label_flip_rate = 0.1;
  const auto flipped = baytta::synthesize(c);
  std::size_t differ = 0;
  for (std::size_t r = 0; r < clean.n_rows(); ++r)
    differ += clean.labels()[r] != flipped.labels()[r];
  EXPECT_EQ(differ, 20u);
}

double column_accuracy(const PredictionTable& t, std::size_t j) {
  std::size_t ok = 0;
  for (std::size_t r = 0; r < t.n_rows(); ++r)
    ok += static_cast<std::uint8_t>(t.at(r, j) >= 0.5) == t.labels()[r];
  return static_cast<double>(ok) / static_cast<double>(t.n_rows());
}

TEST(Synthesize, Seed42FixtureColumnAccuracies) {
  const auto t = fixtures::seed42();
  EXPECT_NEAR(column_accuracy(t, 2), 0.5, 0.08);
  EXPECT_GT(column_accuracy(t, 0), 0.7);
  EXPECT_GT(column_accuracy(t, 1), 0.7);
  // Frozen from the first run of the generator.
  EXPECT_DOUBLE_EQ(column_accuracy(t, 0), 0.82);
  EXPECT_DOUBLE_EQ(column_accuracy(t, 1), 0.845);
  EXPECT_DOUBLE_EQ(column_accuracy(t, 2), 0.5);
}

TEST(Synthesize, RejectsBadConfig) {
  baytta::SyntheticConfig c;
  c.adversarial_columns = {c.n_columns};
  EXPECT_THROW(baytta::synthesize(c), Error);
  c = {};
  c.label_flip_rate = 0.5;
  EXPECT_THROW(baytta::synthesize(c), Error);
  c = {};
  c.signal_noise = -1.0;
  EXPECT_THROW(baytta::synthesize(c), Error);
}

}  // namespace
