#pragma once

// ADIFA: one Gaussian kernel density per attribute, entropy-weighted and
// combined with a mean, then judged against a second kernel density fitted
// to the leave-one-out scores of the training rows.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmlad/dataset.hpp"

namespace xmlad::adifa {

enum class Aggregation { ArithmeticMean, GeometricMean, HarmonicMean };

std::string_view to_string(Aggregation psi) noexcept;
/// Accepts "am"/"gm"/"hm" as well as the full enumerator names.
Aggregation aggregation_from_string(std::string_view text);

inline constexpr double kDefaultThreshold = 0.5;

/// Relative bandwidth floor: sigma >= 1e-9 * max(1, |mean|).
inline constexpr double kBandwidthFloor = 1e-9;
/// Geometric-mean terms below this are clamped before taking logs.
inline constexpr double kLogFloor = 1e-300;

double population_mean(std::span<const double> values);
double population_stddev(std::span<const double> values);
double floored_bandwidth(std::span<const double> values);

/// Shannon entropy in bits of the binned column. Up to 32 distinct values
/// are their own bins; wider columns use ceil(1 + log2 m) equal-width bins.
double attribute_entropy(std::span<const double> column);

/// alpha_j = 1 - H_j / sum(H). All weights are 1 when n == 1 or sum(H) == 0.
std::vector<double> compute_weights(std::span<const double> entropies);

/// Arithmetic, geometric (log space) or harmonic mean. A zero term makes the
/// geometric and harmonic means zero.
double aggregate(Aggregation psi, std::span<const double> terms);

/// Gaussian kernel density over a sample:
///   d(x) = (1/m) * sum_i b * exp(-tau * (a_i - x)^2),
///   tau = 1 / (2 sigma^2), b = (2 pi sigma^2)^(-1/2).
/// Values are kept sorted; kernels beyond the double underflow horizon are
/// skipped, which leaves every sum bit-identical to the full one.
class KernelDensity {
 public:
  KernelDensity() = default;
  KernelDensity(std::vector<double> values, double sigma);
  static KernelDensity fit(std::vector<double> values);

  double operator()(double x) const;
  /// Density at values()[i] computed from the other m - 1 values.
  double leave_one_out(std::size_t sorted_index) const;
  /// Leave-one-out density at a value that is a member of the sample.
  double leave_one_out_at(double member) const;

  const std::vector<double>& values() const { return values_; }
  double sigma() const { return sigma_; }
  double tau() const { return tau_; }
  double norm() const { return norm_; }

 private:
  double kernel_sum(double x, std::size_t skip) const;

  std::vector<double> values_;
  double sigma_ = 1.0;
  double tau_ = 0.5;
  double norm_ = 0.0;
  double horizon_ = 0.0;
};

struct AttributeModel {
  std::string column_name;
  KernelDensity density;
  double entropy = 0.0;
  double weight = 1.0;

  double likelihood(double x) const { return density(x); }
  /// Likelihood divided by the kernel normaliser: the mean kernel
  /// similarity, always in [0, 1] and comparable across attributes.
  double similarity(double x) const { return density(x) / density.norm(); }
};

struct AttributeLikelihood {
  std::size_t column = 0;
  std::string column_name;
  double likelihood = 0.0;  // d_j(x_j)
  double similarity = 0.0;  // d_j(x_j) / b_j

  bool operator==(const AttributeLikelihood&) const = default;
};

struct DetectionResult {
  double score = 0.0;         // s(x)
  double meta_density = 0.0;  // d(s(x) | S)
  double likelihood = 0.0;    // min(1, meta_density / calibration_max)
  Label label = Label::Normal;
  std::vector<AttributeLikelihood> per_attribute;  // ascending likelihood, ties by column

  bool operator==(const DetectionResult&) const = default;
};

class AdifaModel {
 public:
  /// Rows labeled anomalous are ignored. Throws TooFewRows (m < 2),
  /// NonFiniteData, or DimensionMismatch for an empty or ragged dataset.
  static AdifaModel train(const FlatDataset& dataset, Aggregation psi, double threshold = kDefaultThreshold);

  double instance_score(std::span<const double> x) const;
  double meta_density(double score) const { return meta_(score); }
  DetectionResult classify(std::span<const double> x) const;

  const std::vector<AttributeModel>& attributes() const { return attributes_; }
  Aggregation psi() const { return psi_; }
  double threshold() const { return threshold_; }
  const std::vector<double>& training_scores() const { return training_scores_; }
  const KernelDensity& meta() const { return meta_; }
  double calibration_max() const { return calibration_max_; }
  std::size_t dimension() const { return attributes_.size(); }

  std::string serialize() const;
  static AdifaModel deserialize(std::string_view content);

 private:
  void check_dimension(std::span<const double> x) const;
  void finish_meta(std::vector<double> scores, double meta_sigma);

  std::vector<AttributeModel> attributes_;
  Aggregation psi_ = Aggregation::GeometricMean;
  double threshold_ = kDefaultThreshold;
  std::vector<double> training_scores_;
  KernelDensity meta_;
  double calibration_max_ = 1.0;
};

/// First top_k entries (clamped to n) of the ascending per-attribute list.
std::vector<AttributeLikelihood> localize(const DetectionResult& result, std::size_t top_k);

}  // namespace xmlad::adifa
