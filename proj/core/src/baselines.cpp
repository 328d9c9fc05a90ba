#include "xmlad/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "xmlad/adifa.hpp"
#include "xmlad/error.hpp"
#include "xmlad/textio.hpp"

namespace xmlad::baselines {

namespace {

constexpr double kLofTolerance = 1e-12;

void write_rows(RecordWriter& w, bool standardize, const std::vector<std::vector<double>>& rows, std::size_t width) {
  w.record("standardize", {standardize ? "1" : "0"});
  w.record("rows", {std::to_string(rows.size()), std::to_string(width)});
  for (const auto& row : rows) {
    std::vector<std::string> fields;
    fields.reserve(row.size());
    for (double v : row) fields.push_back(format_double(v));
    w.record("r", fields);
  }
}

std::vector<std::vector<double>> read_rows(RecordReader& r, bool& standardize) {
  standardize = r.expect("standardize").at(0) == "1";
  Record header = r.expect("rows");
  const std::size_t m = header.size(0);
  const std::size_t n = header.size(1);
  std::vector<std::vector<double>> rows(m);
  for (auto& row : rows) {
    Record rec = r.expect("r");
    if (rec.fields.size() != n) throw Error(Errc::CorruptFile, "training row has the wrong width");
    row.resize(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = rec.num(j);
  }
  if (!r.done()) throw Error(Errc::CorruptFile, "trailing records in model file");
  return rows;
}

void check_width(std::span<const double> x, std::size_t dimension) {
  if (x.size() != dimension) {
    throw Error(Errc::DimensionMismatch, "instance has " + std::to_string(x.size()) + " values, model expects " +
                                             std::to_string(dimension));
  }
}

// k-th smallest (1-based) distance from x to the points, optionally skipping one.
double kth_distance(const std::vector<std::vector<double>>& points, std::span<const double> x, std::size_t k,
                    std::size_t skip) {
  std::vector<double> d;
  d.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i != skip) d.push_back(euclidean(points[i], x));
  }
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
  return d[k - 1];
}

}  // namespace

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows, bool enabled) {
  Standardizer s;
  s.enabled = enabled;
  if (!enabled || rows.empty()) return s;
  const std::size_t n = rows.front().size();
  s.mean.resize(n);
  s.scale.resize(n);
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][j];
    s.mean[j] = adifa::population_mean(column);
    const double sd = adifa::population_stddev(column);
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  if (!enabled) return out;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (out[j] - mean[j]) / scale[j];
  return out;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double ss = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    ss += d * d;
  }
  return std::sqrt(ss);
}

std::vector<std::vector<double>> training_rows(const FlatDataset& dataset, std::size_t min_rows) {
  dataset.check_rectangular();
  FlatDataset normal = dataset.normal_rows();
  if (normal.size() < min_rows) {
    throw Error(Errc::TooFewRows, "need at least " + std::to_string(min_rows) + " training rows, got " +
                                      std::to_string(normal.size()));
  }
  if (normal.width() == 0) throw Error(Errc::DimensionMismatch, "dataset has no columns");
  for (const auto& row : normal.rows) {
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteData, "training data contains a non-finite cell");
    }
  }
  return std::move(normal.rows);
}

// ---------------------------------------------------------------- PGA

PgaModel PgaModel::train(const FlatDataset& dataset, double alpha, std::size_t k, bool standardize) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::UsageError, "PGA alpha must lie in (0, 1]");
  if (k == 0) throw Error(Errc::UsageError, "PGA k must be at least 1");
  PgaModel model;
  model.alpha_ = alpha;
  model.k_ = k;
  model.standardizer_.enabled = standardize;
  model.fit(training_rows(dataset, std::max<std::size_t>(2, k + 1)));
  return model;
}

void PgaModel::fit(std::vector<std::vector<double>> raw) {
  if (raw.size() < std::max<std::size_t>(2, k_ + 1)) throw Error(Errc::TooFewRows, "PGA needs more than k rows");
  raw_ = std::move(raw);
  dimension_ = raw_.front().size();
  standardizer_ = Standardizer::fit(raw_, standardizer_.enabled);
  points_.clear();
  for (const auto& row : raw_) points_.push_back(standardizer_.apply(row));
  const std::size_t m = points_.size();
  nn_distances_.resize(m);
  for (std::size_t i = 0; i < m; ++i) nn_distances_[i] = kth_distance(points_, points_[i], k_, i);
  std::vector<double> sorted = nn_distances_;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::ptrdiff_t>(std::ceil((1.0 - alpha_) * static_cast<double>(m))) - 1;
  cutoff_ = sorted[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(rank, 0, static_cast<std::ptrdiff_t>(m) - 1))];
}

double PgaModel::score(std::span<const double> x) const {
  check_width(x, dimension_);
  return kth_distance(points_, standardizer_.apply(x), k_, points_.size());
}

Verdict PgaModel::classify(std::span<const double> x) const {
  const double s = score(x);
  return {s, s >= cutoff_ ? Label::Anomalous : Label::Normal};
}

std::string PgaModel::serialize() const {
  RecordWriter w("pga", 1);
  w.record("alpha", {format_double(alpha_)});
  w.record("k", {std::to_string(k_)});
  write_rows(w, standardizer_.enabled, raw_, dimension_);
  return w.finish();
}

PgaModel PgaModel::deserialize(std::string_view content) {
  RecordReader r(content, "pga", 1);
  PgaModel model;
  model.alpha_ = r.expect("alpha").num(0);
  model.k_ = r.expect("k").size(0);
  bool standardize = false;
  auto rows = read_rows(r, standardize);
  model.standardizer_.enabled = standardize;
  model.fit(std::move(rows));
  return model;
}

// ---------------------------------------------------------------- GDE

std::string_view to_string(GdeSignMode mode) noexcept {
  return mode == GdeSignMode::Literal ? "literal" : "corrected";
}

GdeSignMode gde_sign_mode_from_string(std::string_view text) {
  if (text == "corrected") return GdeSignMode::Corrected;
  if (text == "literal") return GdeSignMode::Literal;
  throw Error(Errc::UsageError, "unknown GDE sign mode '" + std::string(text) + "'");
}

GdeModel GdeModel::train(const FlatDataset& dataset, GdeSignMode mode, bool standardize) {
  GdeModel model;
  model.mode_ = mode;
  model.standardizer_.enabled = standardize;
  model.fit(training_rows(dataset, 2));
  return model;
}

void GdeModel::fit(std::vector<std::vector<double>> raw) {
  if (raw.size() < 2) throw Error(Errc::TooFewRows, "GDE needs at least 2 rows");
  raw_ = std::move(raw);
  dimension_ = raw_.front().size();
  standardizer_ = Standardizer::fit(raw_, standardizer_.enabled);
  points_.clear();
  for (const auto& row : raw_) points_.push_back(standardizer_.apply(row));
  const std::size_t m = points_.size();

  double nn_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) nn_sum += kth_distance(points_, points_[i], 1, i);
  radius_ = std::max(2.0 * nn_sum / static_cast<double>(m), kEpsilonFloor);

  std::vector<double> counts(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && euclidean(points_[i], points_[j]) <= radius_) counts[i] += 1.0;
    }
  }
  mean_neighbors_ = adifa::population_mean(counts);
  std_neighbors_ = std::max(adifa::population_stddev(counts), kEpsilonFloor);
}

std::size_t GdeModel::neighbors(std::span<const double> x) const {
  check_width(x, dimension_);
  const auto z = standardizer_.apply(x);
  std::size_t n = 0;
  for (const auto& p : points_) n += euclidean(p, z) <= radius_;
  return n;
}

double GdeModel::score(std::span<const double> x) const {
  const double n = static_cast<double>(neighbors(x));
  const double delta = mode_ == GdeSignMode::Corrected ? mean_neighbors_ - n : n - mean_neighbors_;
  return std::exp(-delta / std_neighbors_);
}

Verdict GdeModel::classify(std::span<const double> x) const {
  const double s = score(x);
  return {s, s > 0.5 ? Label::Normal : Label::Anomalous};
}

std::string GdeModel::serialize() const {
  RecordWriter w("gde", 1);
  w.record("sign_mode", {std::string(to_string(mode_))});
  write_rows(w, standardizer_.enabled, raw_, dimension_);
  return w.finish();
}

GdeModel GdeModel::deserialize(std::string_view content) {
  RecordReader r(content, "gde", 1);
  GdeModel model;
  model.mode_ = gde_sign_mode_from_string(r.expect("sign_mode").at(0));
  bool standardize = false;
  auto rows = read_rows(r, standardize);
  model.standardizer_.enabled = standardize;
  model.fit(std::move(rows));
  return model;
}

// ---------------------------------------------------------------- LOF

LofModel LofModel::train(const FlatDataset& dataset, std::size_t min_pts, bool standardize) {
  if (min_pts == 0) throw Error(Errc::UsageError, "LOF min_pts must be at least 1");
  LofModel model;
  model.min_pts_ = min_pts;
  model.standardizer_.enabled = standardize;
  model.fit(training_rows(dataset, min_pts + 1));
  return model;
}

std::vector<std::size_t> LofModel::neighbourhood(std::span<const double> x, std::size_t skip,
                                                 double& k_distance) const {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i != skip) d.emplace_back(euclidean(points_[i], x), i);
  }
  std::sort(d.begin(), d.end());
  k_distance = d[min_pts_ - 1].first;
  std::vector<std::size_t> hood;
  for (const auto& [dist, i] : d) {
    if (dist > k_distance) break;
    hood.push_back(i);
  }
  return hood;
}

double LofModel::lrd(std::span<const double> x, const std::vector<std::size_t>& hood) const {
  double reach = 0.0;
  for (std::size_t o : hood) reach += std::max(k_distance_[o], euclidean(points_[o], x));
  return 1.0 / std::max(reach / static_cast<double>(hood.size()), kEpsilonFloor);
}

void LofModel::fit(std::vector<std::vector<double>> raw) {
  if (raw.size() <= min_pts_) throw Error(Errc::TooFewRows, "LOF needs more rows than min_pts");
  raw_ = std::move(raw);
  dimension_ = raw_.front().size();
  standardizer_ = Standardizer::fit(raw_, standardizer_.enabled);
  points_.clear();
  for (const auto& row : raw_) points_.push_back(standardizer_.apply(row));
  const std::size_t m = points_.size();

  std::vector<std::vector<std::size_t>> hoods(m);
  k_distance_.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) hoods[i] = neighbourhood(points_[i], i, k_distance_[i]);
  lrd_.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) lrd_[i] = lrd(points_[i], hoods[i]);
  training_lof_.assign(m, 0.0);
  lof_max_ = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double ratio = 0.0;
    for (std::size_t o : hoods[i]) ratio += lrd_[o];
    training_lof_[i] = ratio / static_cast<double>(hoods[i].size()) / lrd_[i];
    lof_max_ = std::max(lof_max_, training_lof_[i]);
  }
}

double LofModel::score(std::span<const double> x) const {
  check_width(x, dimension_);
  const auto z = standardizer_.apply(x);
  double k_distance = 0.0;
  const auto hood = neighbourhood(z, points_.size(), k_distance);
  double ratio = 0.0;
  for (std::size_t o : hood) ratio += lrd_[o];
  return ratio / static_cast<double>(hood.size()) / lrd(z, hood);
}

Verdict LofModel::classify(std::span<const double> x) const {
  const double s = score(x);
  const bool anomalous = s > lof_max_ + kLofTolerance * std::max(1.0, lof_max_);
  return {s, anomalous ? Label::Anomalous : Label::Normal};
}

std::string LofModel::serialize() const {
  RecordWriter w("lof", 1);
  w.record("min_pts", {std::to_string(min_pts_)});
  write_rows(w, standardizer_.enabled, raw_, dimension_);
  return w.finish();
}

LofModel LofModel::deserialize(std::string_view content) {
  RecordReader r(content, "lof", 1);
  LofModel model;
  model.min_pts_ = r.expect("min_pts").size(0);
  if (model.min_pts_ == 0) throw Error(Errc::CorruptFile, "LOF min_pts must be at least 1");
  bool standardize = false;
  auto rows = read_rows(r, standardize);
  model.standardizer_.enabled = standardize;
  model.fit(std::move(rows));
  return model;
}

}  // namespace xmlad::baselines
