#include "xmlad/adifa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "xmlad/error.hpp"
#include "xmlad/textio.hpp"

namespace xmlad::adifa {

namespace {

// exp(-746) is below half the smallest subnormal, so it rounds to exactly 0.
constexpr double kUnderflowExponent = 746.0;
constexpr std::size_t kDistinctBinLimit = 32;

}  // namespace

std::string_view to_string(Aggregation psi) noexcept {
  switch (psi) {
    case Aggregation::ArithmeticMean: return "ArithmeticMean";
    case Aggregation::GeometricMean: return "GeometricMean";
    case Aggregation::HarmonicMean: return "HarmonicMean";
  }
  return "GeometricMean";
}

Aggregation aggregation_from_string(std::string_view text) {
  if (text == "am" || text == "ArithmeticMean") return Aggregation::ArithmeticMean;
  if (text == "gm" || text == "GeometricMean") return Aggregation::GeometricMean;
  if (text == "hm" || text == "HarmonicMean") return Aggregation::HarmonicMean;
  throw Error(Errc::UsageError, "unknown aggregation '" + std::string(text) + "' (expected am, gm or hm)");
}

double population_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double population_stddev(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean = population_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double floored_bandwidth(std::span<const double> values) {
  const double floor = kBandwidthFloor * std::max(1.0, std::abs(population_mean(values)));
  return std::max(population_stddev(values), floor);
}

double attribute_entropy(std::span<const double> column) {
  if (column.empty()) return 0.0;
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());

  std::vector<std::size_t> counts;
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) distinct += sorted[i] != sorted[i - 1];
  if (distinct <= kDistinctBinLimit) {
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
      if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
        ++run;
      } else {
        counts.push_back(run);
        run = 1;
      }
    }
  } else {
    const auto bins = static_cast<std::size_t>(std::ceil(1.0 + std::log2(m)));
    const double lo = sorted.front();
    const double span = sorted.back() - lo;
    counts.assign(bins, 0);
    for (double v : sorted) {
      auto b = static_cast<std::size_t>(std::floor((v - lo) / span * static_cast<double>(bins)));
      ++counts[std::min(b, bins - 1)];
    }
  }
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / m;
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<double> compute_weights(std::span<const double> entropies) {
  std::vector<double> w(entropies.size(), 1.0);
  const double total = std::accumulate(entropies.begin(), entropies.end(), 0.0);
  if (entropies.size() <= 1 || total <= 0.0) return w;
  for (std::size_t j = 0; j < entropies.size(); ++j) w[j] = 1.0 - entropies[j] / total;
  return w;
}

double aggregate(Aggregation psi, std::span<const double> terms) {
  if (terms.empty()) return 0.0;
  const double n = static_cast<double>(terms.size());
  switch (psi) {
    case Aggregation::ArithmeticMean:
      return std::accumulate(terms.begin(), terms.end(), 0.0) / n;
    case Aggregation::GeometricMean: {
      double log_sum = 0.0;
      for (double t : terms) {
        if (t == 0.0) return 0.0;
        log_sum += std::log(std::max(t, kLogFloor));
      }
      return std::exp(log_sum / n);
    }
    case Aggregation::HarmonicMean: {
      double inv_sum = 0.0;
      for (double t : terms) {
        if (t == 0.0) return 0.0;
        inv_sum += 1.0 / t;
      }
      return n / inv_sum;
    }
  }
  return 0.0;
}

KernelDensity::KernelDensity(std::vector<double> values, double sigma) : values_(std::move(values)), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(Errc::NonFiniteData, "kernel bandwidth must be positive");
  std::sort(values_.begin(), values_.end());
  tau_ = 1.0 / (2.0 * sigma_ * sigma_);
  norm_ = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma_ * sigma_);
  horizon_ = std::sqrt(kUnderflowExponent / tau_);
}

KernelDensity KernelDensity::fit(std::vector<double> values) {
  const double sigma = floored_bandwidth(values);
  return KernelDensity(std::move(values), sigma);
}

double KernelDensity::kernel_sum(double x, std::size_t skip) const {
  auto first = std::lower_bound(values_.begin(), values_.end(), x - horizon_);
  auto last = std::upper_bound(first, values_.end(), x + horizon_);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) {
    if (static_cast<std::size_t>(it - values_.begin()) == skip) continue;
    const double d = *it - x;
    sum += std::exp(-tau_ * d * d);
  }
  return sum;
}

double KernelDensity::operator()(double x) const {
  if (values_.empty()) return 0.0;
  return norm_ * kernel_sum(x, values_.size()) / static_cast<double>(values_.size());
}

double KernelDensity::leave_one_out(std::size_t sorted_index) const {
  if (values_.size() < 2) throw Error(Errc::TooFewRows, "leave-one-out needs at least two values");
  return norm_ * kernel_sum(values_[sorted_index], sorted_index) / static_cast<double>(values_.size() - 1);
}

double KernelDensity::leave_one_out_at(double member) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), member);
  if (it == values_.end() || *it != member) throw Error(Errc::DimensionMismatch, "value is not a sample member");
  return leave_one_out(static_cast<std::size_t>(it - values_.begin()));
}

AdifaModel AdifaModel::train(const FlatDataset& dataset, Aggregation psi, double threshold) {
  dataset.check_rectangular();
  FlatDataset normal = dataset.normal_rows();
  const std::size_t m = normal.size();
  const std::size_t n = normal.width();
  if (m < 2) throw Error(Errc::TooFewRows, "ADIFA needs at least 2 training rows, got " + std::to_string(m));
  if (n == 0) throw Error(Errc::DimensionMismatch, "dataset has no columns");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw Error(Errc::UsageError, "threshold C must lie in (0, 1]");
  for (const auto& row : normal.rows) {
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteData, "training data contains a non-finite cell");
    }
  }

  AdifaModel model;
  model.psi_ = psi;
  model.threshold_ = threshold;
  model.attributes_.resize(n);
  std::vector<double> entropies(n);
  std::vector<double> column(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) column[i] = normal.rows[i][j];
    auto& attr = model.attributes_[j];
    attr.column_name = normal.column_names[j];
    attr.entropy = attribute_entropy(column);
    attr.density = KernelDensity::fit(column);
    entropies[j] = attr.entropy;
  }
  const auto weights = compute_weights(entropies);
  for (std::size_t j = 0; j < n; ++j) model.attributes_[j].weight = weights[j];

  // Leave-one-out: row i is scored against the other m - 1 values of every
  // attribute; bandwidths and weights stay those of the full training set.
  std::vector<double> scores(m);
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& attr = model.attributes_[j];
      terms[j] = attr.weight * attr.density.leave_one_out_at(normal.rows[i][j]);
    }
    scores[i] = aggregate(psi, terms);
  }
  const double meta_sigma = floored_bandwidth(scores);
  model.finish_meta(std::move(scores), meta_sigma);
  return model;
}

void AdifaModel::finish_meta(std::vector<double> scores, double meta_sigma) {
  training_scores_ = std::move(scores);
  meta_ = KernelDensity(training_scores_, meta_sigma);
  calibration_max_ = 0.0;
  for (std::size_t i = 0; i < meta_.values().size(); ++i) {
    calibration_max_ = std::max(calibration_max_, meta_.leave_one_out(i));
  }
  if (!(calibration_max_ > 0.0)) {
    // Every leave-one-out density underflowed; fall back to the in-sample peak.
    for (double s : meta_.values()) calibration_max_ = std::max(calibration_max_, meta_(s));
  }
}

void AdifaModel::check_dimension(std::span<const double> x) const {
  if (x.size() != attributes_.size()) {
    throw Error(Errc::DimensionMismatch, "instance has " + std::to_string(x.size()) + " values, model expects " +
                                             std::to_string(attributes_.size()));
  }
}

double AdifaModel::instance_score(std::span<const double> x) const {
  check_dimension(x);
  std::vector<double> terms(attributes_.size());
  for (std::size_t j = 0; j < attributes_.size(); ++j) {
    terms[j] = attributes_[j].weight * attributes_[j].likelihood(x[j]);
  }
  return aggregate(psi_, terms);
}

DetectionResult AdifaModel::classify(std::span<const double> x) const {
  check_dimension(x);
  DetectionResult r;
  std::vector<double> terms(attributes_.size());
  r.per_attribute.reserve(attributes_.size());
  for (std::size_t j = 0; j < attributes_.size(); ++j) {
    const auto& attr = attributes_[j];
    const double d = attr.likelihood(x[j]);
    terms[j] = attr.weight * d;
    r.per_attribute.push_back({j, attr.column_name, d, d / attr.density.norm()});
  }
  r.score = aggregate(psi_, terms);
  r.meta_density = meta_(r.score);
  r.likelihood = std::min(1.0, r.meta_density / calibration_max_);
  r.label = r.likelihood < threshold_ ? Label::Anomalous : Label::Normal;
  std::stable_sort(r.per_attribute.begin(), r.per_attribute.end(),
                   [](const AttributeLikelihood& a, const AttributeLikelihood& b) { return a.likelihood < b.likelihood; });
  return r;
}

std::vector<AttributeLikelihood> localize(const DetectionResult& result, std::size_t top_k) {
  const std::size_t k = std::min(top_k, result.per_attribute.size());
  return {result.per_attribute.begin(), result.per_attribute.begin() + static_cast<std::ptrdiff_t>(k)};
}

std::string AdifaModel::serialize() const {
  RecordWriter w("adifa", 1);
  w.record("psi", {std::string(to_string(psi_))});
  w.record("threshold", {format_double(threshold_)});
  w.record("attributes", {std::to_string(attributes_.size())});
  for (const auto& a : attributes_) {
    std::vector<std::string> fields = {a.column_name, format_double(a.density.sigma()), format_double(a.entropy),
                                       format_double(a.weight), std::to_string(a.density.values().size())};
    for (double v : a.density.values()) fields.push_back(format_double(v));
    w.record("a", fields);
  }
  std::vector<std::string> s = {std::to_string(training_scores_.size())};
  for (double v : training_scores_) s.push_back(format_double(v));
  w.record("scores", s);
  w.record("meta_sigma", {format_double(meta_.sigma())});
  w.record("calibration_max", {format_double(calibration_max_)});
  return w.finish();
}

AdifaModel AdifaModel::deserialize(std::string_view content) {
  RecordReader r(content, "adifa", 1);
  AdifaModel model;
  model.psi_ = aggregation_from_string(r.expect("psi").at(0));
  model.threshold_ = r.expect("threshold").num(0);
  const std::size_t n = r.expect("attributes").size(0);
  for (std::size_t j = 0; j < n; ++j) {
    Record rec = r.expect("a");
    AttributeModel a;
    a.column_name = rec.at(0);
    const double sigma = rec.num(1);
    a.entropy = rec.num(2);
    a.weight = rec.num(3);
    const std::size_t m = rec.size(4);
    std::vector<double> values(m);
    for (std::size_t i = 0; i < m; ++i) values[i] = rec.num(5 + i);
    a.density = KernelDensity(std::move(values), sigma);
    model.attributes_.push_back(std::move(a));
  }
  Record s = r.expect("scores");
  std::vector<double> scores(s.size(0));
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = s.num(1 + i);
  const double meta_sigma = r.expect("meta_sigma").num(0);
  const double cal = r.expect("calibration_max").num(0);
  if (!r.done()) throw Error(Errc::CorruptFile, "trailing records in ADIFA model");
  model.training_scores_ = std::move(scores);
  model.meta_ = KernelDensity(model.training_scores_, meta_sigma);
  model.calibration_max_ = cal;
  return model;
}

}  // namespace xmlad::adifa
