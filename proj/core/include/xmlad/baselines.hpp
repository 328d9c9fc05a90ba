#pragma once

// Multivariate one-class baselines over the flat feature space: peer group
// analysis (nearest-neighbour distance), global density estimation (r-ball
// counts) and local outlier factor. Distances are Euclidean.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmlad/dataset.hpp"
#include "xmlad/verdict.hpp"

namespace xmlad::baselines {

inline constexpr double kEpsilonFloor = 1e-9;

/// Optional per-column z-scoring fitted on the training rows. Constant
/// columns keep unit scale.
struct Standardizer {
  bool enabled = false;
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const std::vector<std::vector<double>>& rows, bool enabled);
  std::vector<double> apply(std::span<const double> x) const;
};

double euclidean(std::span<const double> a, std::span<const double> b);

/// Rows labeled normal, validated for count, width and finiteness.
std::vector<std::vector<double>> training_rows(const FlatDataset& dataset, std::size_t min_rows);

class PgaModel {
 public:
  static PgaModel train(const FlatDataset& dataset, double alpha = 0.1, std::size_t k = 1, bool standardize = false);

  /// Distance from x to its k-th nearest training point.
  double score(std::span<const double> x) const;
  /// Anomalous iff score >= cutoff.
  Verdict classify(std::span<const double> x) const;

  double alpha() const { return alpha_; }
  std::size_t k() const { return k_; }
  double cutoff() const { return cutoff_; }
  const std::vector<double>& nn_distances() const { return nn_distances_; }
  std::size_t dimension() const { return dimension_; }

  std::string serialize() const;
  static PgaModel deserialize(std::string_view content);

 private:
  void fit(std::vector<std::vector<double>> raw);

  std::vector<std::vector<double>> raw_;
  std::vector<std::vector<double>> points_;
  Standardizer standardizer_;
  std::vector<double> nn_distances_;
  double alpha_ = 0.1;
  std::size_t k_ = 1;
  double cutoff_ = 0.0;
  std::size_t dimension_ = 0;
};

enum class GdeSignMode { Corrected, Literal };

std::string_view to_string(GdeSignMode mode) noexcept;
GdeSignMode gde_sign_mode_from_string(std::string_view text);

class GdeModel {
 public:
  static GdeModel train(const FlatDataset& dataset, GdeSignMode mode = GdeSignMode::Corrected,
                        bool standardize = false);

  /// Training points within radius of x.
  std::size_t neighbors(std::span<const double> x) const;
  /// Corrected: exp(-(mean - n_r)/sd). Literal: exp(-(n_r - mean)/sd).
  double score(std::span<const double> x) const;
  /// Normal iff score > 1/2.
  Verdict classify(std::span<const double> x) const;

  GdeSignMode sign_mode() const { return mode_; }
  double radius() const { return radius_; }
  double mean_neighbors() const { return mean_neighbors_; }
  double std_neighbors() const { return std_neighbors_; }
  std::size_t dimension() const { return dimension_; }

  std::string serialize() const;
  static GdeModel deserialize(std::string_view content);

 private:
  void fit(std::vector<std::vector<double>> raw);

  std::vector<std::vector<double>> raw_;
  std::vector<std::vector<double>> points_;
  Standardizer standardizer_;
  GdeSignMode mode_ = GdeSignMode::Corrected;
  double radius_ = 0.0;
  double mean_neighbors_ = 0.0;
  double std_neighbors_ = 0.0;
  std::size_t dimension_ = 0;
};

class LofModel {
 public:
  static LofModel train(const FlatDataset& dataset, std::size_t min_pts = 10, bool standardize = false);

  double score(std::span<const double> x) const;
  /// Anomalous iff lof(x) exceeds the largest training lof. Values equal to
  /// it (up to 1e-12 relative) are normal.
  Verdict classify(std::span<const double> x) const;

  std::size_t min_pts() const { return min_pts_; }
  double lof_max() const { return lof_max_; }
  const std::vector<double>& training_lof() const { return training_lof_; }
  std::size_t dimension() const { return dimension_; }

  std::string serialize() const;
  static LofModel deserialize(std::string_view content);

 private:
  void fit(std::vector<std::vector<double>> raw);
  /// Indices (into points_) of the k-neighbourhood of x and its k-distance;
  /// `skip` excludes one training point.
  std::vector<std::size_t> neighbourhood(std::span<const double> x, std::size_t skip, double& k_distance) const;
  double lrd(std::span<const double> x, const std::vector<std::size_t>& hood) const;

  std::vector<std::vector<double>> raw_;
  std::vector<std::vector<double>> points_;
  Standardizer standardizer_;
  std::size_t min_pts_ = 10;
  std::vector<double> k_distance_;
  std::vector<double> lrd_;
  std::vector<double> training_lof_;
  double lof_max_ = 1.0;
  std::size_t dimension_ = 0;
};

}  // namespace xmlad::baselines
