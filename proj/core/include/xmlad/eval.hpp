#pragma once

// Evaluation harness: rank-statistic AUC, ROC curves, 5x2 cross-validation
// and learning curves. Scores handed to auc()/roc_curve() are oriented so
// that larger means more anomalous; anomalous is the positive class.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmlad/dataset.hpp"
#include "xmlad/detector.hpp"

namespace xmlad::eval {

/// Probability that a random anomalous row outscores a random normal one,
/// ties counting one half. Throws SingleClass unless both labels occur and
/// LengthMismatch on differing lengths.
double auc(std::span<const double> anomaly_scores, std::span<const Label> labels);

struct RocPoint {
  double threshold = 0.0;  // rows with score >= threshold are flagged
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) first, (1,1) last
  double auc = 0.0;              // trapezoidal area
};

RocCurve roc_curve(std::span<const double> anomaly_scores, std::span<const Label> labels);

/// Highest TPR over the curve's points with fpr <= max_fpr.
double tpr_at_fpr(const RocCurve& curve, double max_fpr);

/// Scores every row with the detector, oriented by its polarity.
std::vector<double> anomaly_scores(const Detector& detector, const FlatDataset& data);

struct FoldResult {
  std::size_t repetition = 0;
  std::size_t fold = 0;  // 0: train on A, test on B; 1: reversed
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  double auc = 0.0;
  std::vector<double> scores;  // oriented, test-row order
  std::vector<Label> labels;
};

struct CvResult {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<double> fold_aucs;  // 10 entries, repetition-major
  double mean_auc = 0.0;
  std::vector<FoldResult> folds;
};

/// 5 repetitions of a seeded, label-stratified 50/50 split. Each half trains
/// on its normal rows only and is tested on the full other half.
CvResult cv_5x2(const FlatDataset& dataset, std::string_view algorithm, std::uint64_t seed,
                const DetectorOptions& options = {});

struct LearningPoint {
  std::size_t normal_rows = 0;  // |D_i| normal rows
  std::size_t train_size = 0;
  double auc = 0.0;
};

/// Normal rows split into 10 seeded groups; D_i holds the first i groups.
/// Each D_i trains on half its normal rows and is tested on the other half
/// plus every anomalous row. Needs at least 40 normal rows so that D_1
/// still trains on two.
std::vector<LearningPoint> learning_curve(const FlatDataset& dataset, std::string_view algorithm,
                                          std::uint64_t seed, const DetectorOptions& options = {});

}  // namespace xmlad::eval
