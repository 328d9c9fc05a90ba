#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles/gen.hpp"
#include "oracles/lof_oracle.hpp"
#include "xmlad/baselines.hpp"
#include "xmlad/error.hpp"

using namespace xmlad;
using namespace xmlad::baselines;

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

FlatDataset make_dataset(const std::vector<std::vector<double>>& rows) {
  FlatDataset d;
  for (std::size_t j = 0; j < rows.at(0).size(); ++j) d.column_names.push_back("c" + std::to_string(j));
  d.column_meta.resize(d.column_names.size());
  d.rows = rows;
  return d;
}

FlatDataset line(std::initializer_list<double> xs) {
  std::vector<std::vector<double>> rows;
  for (double x : xs) rows.push_back({x});
  return make_dataset(rows);
}

std::vector<double> pt(double x) { return {x}; }

std::vector<std::vector<double>> cloud(oracle::Gen& g, std::size_t m, std::size_t n) {
  std::vector<std::vector<double>> rows(m, std::vector<double>(n));
  for (auto& r : rows) {
    for (auto& v : r) v = g.gauss();
  }
  return rows;
}

}  // namespace

TEST(Pga, HandExample) {
  const auto model = PgaModel::train(line({0, 1, 2}), 0.1);
  EXPECT_EQ(model.nn_distances(), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(model.cutoff(), 1.0);
  const auto v = model.classify(pt(5));
  EXPECT_EQ(v.score, 3.0);
  EXPECT_EQ(v.label, Label::Anomalous);
  EXPECT_EQ(model.classify(pt(1)).label, Label::Normal);
  EXPECT_EQ(model.classify(pt(1)).score, 0.0);
}

TEST(Pga, AlphaOneUsesMinimum) {
  const auto model = PgaModel::train(line({0, 1, 3, 7}), 1.0);
  EXPECT_EQ(model.cutoff(), 1.0);
  EXPECT_EQ(model.classify(pt(4)).label, Label::Anomalous);
}

TEST(Pga, QuantileConventionProperty) {
  oracle::Gen g(1);
  for (int t = 0; t < 50; ++t) {
    const auto rows = cloud(g, static_cast<std::size_t>(g.integer(2, 40)), 2);
    const double alpha = g.real(0.01, 1.0);
    const auto model = PgaModel::train(make_dataset(rows), alpha);
    auto nn = model.nn_distances();
    std::sort(nn.begin(), nn.end());
    const double pos = std::ceil((1.0 - alpha) * double(rows.size())) - 1.0;
    const std::size_t idx = pos < 0 ? 0 : std::min(static_cast<std::size_t>(pos), rows.size() - 1);
    EXPECT_EQ(model.cutoff(), nn[idx]);
    // brute-force nn distances
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (j != i) best = std::min(best, oracle::dist(rows[i], rows[j]));
      }
      EXPECT_DOUBLE_EQ(model.nn_distances()[i], best);
    }
  }
}

TEST(Gde, HandExample) {
  const auto model = GdeModel::train(line({0, 1, 2, 10}));
  EXPECT_DOUBLE_EQ(model.radius(), 5.5);
  EXPECT_DOUBLE_EQ(model.mean_neighbors(), 1.5);
  EXPECT_NEAR(model.std_neighbors(), std::sqrt(0.75), 1e-15);
  EXPECT_EQ(model.neighbors(pt(20)), 0u);
  const auto far = model.classify(pt(20));
  EXPECT_NEAR(far.score, std::exp(-1.5 / std::sqrt(0.75)), 1e-12);
  EXPECT_NEAR(far.score, 0.177, 5e-4);
  EXPECT_EQ(far.label, Label::Anomalous);
  const auto near = model.classify(pt(1));
  EXPECT_EQ(model.neighbors(pt(1)), 3u);
  EXPECT_NEAR(near.score, std::exp(std::sqrt(3.0)), 1e-12);  // e^1.732 = 5.652
  EXPECT_EQ(near.label, Label::Normal);
}

TEST(Gde, LiteralModeFlipsSign) {
  const auto model = GdeModel::train(line({0, 1, 2, 10}), GdeSignMode::Literal);
  EXPECT_EQ(model.classify(pt(20)).label, Label::Normal);
  EXPECT_NEAR(model.classify(pt(20)).score, std::exp(1.5 / std::sqrt(0.75)), 1e-12);
  EXPECT_EQ(model.classify(pt(1)).label, Label::Anomalous);
  EXPECT_EQ(gde_sign_mode_from_string(to_string(GdeSignMode::Literal)), GdeSignMode::Literal);
}

TEST(Gde, IdenticalPointsUseFloors) {
  const auto model = GdeModel::train(line({4, 4, 4, 4}));
  EXPECT_EQ(model.radius(), kEpsilonFloor);
  EXPECT_EQ(model.std_neighbors(), kEpsilonFloor);
  EXPECT_EQ(model.classify(pt(5)).label, Label::Anomalous);
  EXPECT_EQ(model.classify(pt(4)).label, Label::Normal);
}

TEST(Gde, ScoreMonotoneInNeighbours) {
  oracle::Gen g(2);
  const auto model = GdeModel::train(make_dataset(cloud(g, 60, 2)));
  std::vector<std::pair<std::size_t, double>> seen;
  for (int t = 0; t < 300; ++t) {
    std::vector<double> x = {g.gauss() * 3, g.gauss() * 3};
    seen.push_back({model.neighbors(x), model.score(x)});
  }
  for (const auto& a : seen) {
    for (const auto& b : seen) {
      if (a.first < b.first) {
        EXPECT_LE(a.second, b.second);
      }
    }
  }
}

TEST(Lof, GridMatchesOracle) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({double(i)});
  const auto model = LofModel::train(make_dataset(rows), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(model.training_lof()[i], oracle::lof(rows, rows[i], 2, i), 1e-12);
  }
  // edge effects reach two points in; the rest of the grid is exactly uniform
  for (std::size_t i = 3; i < 7; ++i) EXPECT_NEAR(model.training_lof()[i], 1.0, 1e-12);
  const auto far = model.classify(pt(100));
  EXPECT_NEAR(far.score, oracle::lof(rows, pt(100), 2, kNone), 1e-9 * far.score);
  EXPECT_GT(far.score, 10 * model.lof_max());
  EXPECT_EQ(far.label, Label::Anomalous);
}

TEST(Lof, RandomCloudMatchesOracle) {
  oracle::Gen g(3);
  for (int t = 0; t < 5; ++t) {
    const auto rows = cloud(g, 30, 3);
    const auto model = LofModel::train(make_dataset(rows), 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      EXPECT_NEAR(model.training_lof()[i], oracle::lof(rows, rows[i], 4, i), 1e-10);
    }
    for (int q = 0; q < 10; ++q) {
      std::vector<double> x = {g.gauss() * 2, g.gauss() * 2, g.gauss() * 2};
      EXPECT_NEAR(model.score(x), oracle::lof(rows, x, 4, kNone), 1e-10 * model.score(x));
    }
  }
}

TEST(Lof, DuplicateOfDenseClusterIsNormal) {
  oracle::Gen g(4);
  auto rows = cloud(g, 40, 2);
  const auto model = LofModel::train(make_dataset(rows), 5);
  double best = std::numeric_limits<double>::infinity();
  std::size_t densest = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (model.training_lof()[i] < best) best = model.training_lof()[i], densest = i;
  }
  EXPECT_EQ(model.classify(rows[densest]).label, Label::Normal);
}

TEST(Lof, EquidistantPointsHaveUnitFactor) {
  // Simplex vertices: every pairwise distance is sqrt(2).
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < 6; ++i) {
    std::vector<double> r(6, 0.0);
    r[i] = 1.0;
    rows.push_back(r);
  }
  const auto model = LofModel::train(make_dataset(rows), 3);
  for (double l : model.training_lof()) EXPECT_NEAR(l, 1.0, 1e-12);
  for (const auto& r : rows) EXPECT_EQ(model.classify(r).label, Label::Normal);
}

TEST(Lof, TooFewRows) {
  try {
    LofModel::train(line({0, 1, 2}), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooFewRows);
  }
}

TEST(Baselines, TrainingPermutationInvariance) {
  oracle::Gen g(5);
  const auto rows = cloud(g, 25, 3);
  auto reversed = rows;
  std::reverse(reversed.begin(), reversed.end());
  const auto pa = PgaModel::train(make_dataset(rows)), pb = PgaModel::train(make_dataset(reversed));
  const auto ga = GdeModel::train(make_dataset(rows)), gb = GdeModel::train(make_dataset(reversed));
  const auto la = LofModel::train(make_dataset(rows), 4), lb = LofModel::train(make_dataset(reversed), 4);
  EXPECT_EQ(pa.cutoff(), pb.cutoff());
  EXPECT_DOUBLE_EQ(ga.radius(), gb.radius());
  EXPECT_DOUBLE_EQ(la.lof_max(), lb.lof_max());
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x = {g.gauss() * 2, g.gauss() * 2, g.gauss() * 2};
    EXPECT_EQ(pa.classify(x).label, pb.classify(x).label);
    EXPECT_EQ(ga.classify(x).label, gb.classify(x).label);
    EXPECT_EQ(la.classify(x).label, lb.classify(x).label);
    EXPECT_NEAR(la.score(x), lb.score(x), 1e-12 * la.score(x));
  }
}

TEST(Baselines, Standardization) {
  const auto s = Standardizer::fit({{0, 5}, {2, 5}}, true);
  EXPECT_EQ(s.apply(std::vector<double>{1, 5}), (std::vector<double>{0, 0}));
  EXPECT_EQ(s.apply(std::vector<double>{2, 6}), (std::vector<double>{1, 1}));
  const auto off = Standardizer::fit({{0, 5}, {2, 5}}, false);
  EXPECT_EQ(off.apply(std::vector<double>{2, 6}), (std::vector<double>{2, 6}));
}

TEST(Baselines, SerializationRoundTrip) {
  oracle::Gen g(6);
  const auto data = make_dataset(cloud(g, 30, 3));
  const auto pga = PgaModel::train(data, 0.2, 2, true);
  const auto gde = GdeModel::train(data, GdeSignMode::Literal, true);
  const auto lof = LofModel::train(data, 5, true);
  const auto pga2 = PgaModel::deserialize(pga.serialize());
  const auto gde2 = GdeModel::deserialize(gde.serialize());
  const auto lof2 = LofModel::deserialize(lof.serialize());
  EXPECT_EQ(pga2.serialize(), pga.serialize());
  EXPECT_EQ(gde2.serialize(), gde.serialize());
  EXPECT_EQ(lof2.serialize(), lof.serialize());
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x = {g.gauss(), g.gauss(), g.gauss()};
    EXPECT_EQ(pga.classify(x).score, pga2.classify(x).score);
    EXPECT_EQ(gde.classify(x).score, gde2.classify(x).score);
    EXPECT_EQ(lof.classify(x).score, lof2.classify(x).score);
  }
}
