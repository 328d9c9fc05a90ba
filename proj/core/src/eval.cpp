#include "xmlad/eval.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "xmlad/error.hpp"
#include "xmlad/rng.hpp"

namespace xmlad::eval {

namespace {

struct ClassCounts {
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
};

ClassCounts check_inputs(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(scores.size()) + " scores but " + std::to_string(labels.size()) +
                                          " labels");
  }
  ClassCounts c;
  for (Label l : labels) (l == Label::Anomalous ? c.positives : c.negatives) += 1;
  if (c.positives == 0 || c.negatives == 0) throw Error(Errc::SingleClass, "AUC needs both normal and anomalous rows");
  return c;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return order;
}

}  // namespace

double auc(std::span<const double> anomaly_scores, std::span<const Label> labels) {
  const auto counts = check_inputs(anomaly_scores, labels);
  const auto order = order_by_score(anomaly_scores);
  // Twice the rank sum of the positives, kept integral: a tie group spanning
  // ranks i+1..j+1 gives each member the doubled rank i + j + 2.
  std::uint64_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && anomaly_scores[order[j + 1]] == anomaly_scores[order[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]] == Label::Anomalous) twice_rank_sum += i + j + 2;
    }
    i = j + 1;
  }
  const std::uint64_t np = counts.positives;
  const std::uint64_t twice_u = twice_rank_sum - np * (np + 1);
  return static_cast<double>(twice_u) / static_cast<double>(2 * np * counts.negatives);
}

RocCurve roc_curve(std::span<const double> anomaly_scores, std::span<const Label> labels) {
  const auto counts = check_inputs(anomaly_scores, labels);
  auto order = order_by_score(anomaly_scores);
  std::reverse(order.begin(), order.end());

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::uint64_t tp = 0, fp = 0, twice_area = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = anomaly_scores[order[i]];
    const std::uint64_t tp0 = tp, fp0 = fp;
    for (; i < order.size() && anomaly_scores[order[i]] == threshold; ++i) {
      (labels[order[i]] == Label::Anomalous ? tp : fp) += 1;
    }
    twice_area += (fp - fp0) * (tp + tp0);
    curve.points.push_back({threshold, static_cast<double>(fp) / static_cast<double>(counts.negatives),
                            static_cast<double>(tp) / static_cast<double>(counts.positives)});
  }
  curve.auc = static_cast<double>(twice_area) / static_cast<double>(2 * counts.positives * counts.negatives);
  return curve;
}

double tpr_at_fpr(const RocCurve& curve, double max_fpr) {
  double best = 0.0;
  for (const auto& p : curve.points) {
    if (p.fpr <= max_fpr) best = std::max(best, p.tpr);
  }
  return best;
}

std::vector<double> anomaly_scores(const Detector& detector, const FlatDataset& data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& row : data.rows) out.push_back(anomaly_score(detector.polarity(), detector.classify(row).score));
  return out;
}

namespace {

FoldResult run_fold(const FlatDataset& dataset, std::span<const std::size_t> train_fold,
                    std::span<const std::size_t> test_fold, std::string_view algorithm,
                    const DetectorOptions& options) {
  std::vector<std::size_t> normals;
  for (std::size_t i : train_fold) {
    if (dataset.labels[i] == Label::Normal) normals.push_back(i);
  }
  const FlatDataset train = dataset.subset(normals);
  for (Label l : train.labels) {
    if (l != Label::Normal) throw Error(Errc::UsageError, "internal error: anomalous row in a training fold");
  }
  const auto detector = train_detector(algorithm, train, options);
  const FlatDataset test = dataset.subset(test_fold);
  FoldResult r;
  r.train_rows = train.size();
  r.test_rows = test.size();
  r.scores = anomaly_scores(*detector, test);
  r.labels = test.labels;
  r.auc = auc(r.scores, r.labels);
  return r;
}

void check_labeled(const FlatDataset& dataset) {
  dataset.check_rectangular();
  if (!dataset.labeled()) throw Error(Errc::SingleClass, "dataset has no label column");
  const auto anomalous = std::count(dataset.labels.begin(), dataset.labels.end(), Label::Anomalous);
  if (anomalous == 0 || static_cast<std::size_t>(anomalous) == dataset.size()) {
    throw Error(Errc::SingleClass, "dataset needs both normal and anomalous rows");
  }
}

}  // namespace

CvResult cv_5x2(const FlatDataset& dataset, std::string_view algorithm, std::uint64_t seed,
                const DetectorOptions& options) {
  check_labeled(dataset);
  polarity_of(algorithm);
  std::vector<std::size_t> normals, anomalies;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.labels[i] == Label::Normal ? normals : anomalies).push_back(i);
  }
  if (normals.size() < 4 || anomalies.size() < 2) {
    throw Error(Errc::TooFewRows, "5x2 cross-validation needs at least 4 normal and 2 anomalous rows");
  }

  CvResult result;
  result.algorithm = std::string(algorithm);
  result.seed = seed;
  for (std::size_t rep = 0; rep < 5; ++rep) {
    Rng rng(derive_seed(seed, rep));
    auto n = normals;
    auto a = anomalies;
    rng.shuffle(n);
    rng.shuffle(a);
    std::vector<std::size_t> fold_a, fold_b;
    for (std::size_t i = 0; i < n.size(); ++i) (i < n.size() / 2 ? fold_a : fold_b).push_back(n[i]);
    for (std::size_t i = 0; i < a.size(); ++i) (i < a.size() / 2 ? fold_a : fold_b).push_back(a[i]);
    std::sort(fold_a.begin(), fold_a.end());
    std::sort(fold_b.begin(), fold_b.end());
    for (std::size_t fold = 0; fold < 2; ++fold) {
      FoldResult r = fold == 0 ? run_fold(dataset, fold_a, fold_b, algorithm, options)
                               : run_fold(dataset, fold_b, fold_a, algorithm, options);
      r.repetition = rep;
      r.fold = fold;
      result.fold_aucs.push_back(r.auc);
      result.folds.push_back(std::move(r));
    }
  }
  result.mean_auc = std::accumulate(result.fold_aucs.begin(), result.fold_aucs.end(), 0.0) /
                    static_cast<double>(result.fold_aucs.size());
  return result;
}

std::vector<LearningPoint> learning_curve(const FlatDataset& dataset, std::string_view algorithm,
                                          std::uint64_t seed, const DetectorOptions& options) {
  check_labeled(dataset);
  polarity_of(algorithm);
  std::vector<std::size_t> normals, anomalies;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.labels[i] == Label::Normal ? normals : anomalies).push_back(i);
  }
  if (normals.size() < 40) throw Error(Errc::TooFewRows, "learning curve needs at least 40 normal rows");
  Rng grouping(derive_seed(seed, 0));
  grouping.shuffle(normals);

  constexpr std::size_t kGroups = 10;
  std::vector<LearningPoint> points;
  for (std::size_t g = 1; g <= kGroups; ++g) {
    std::vector<std::size_t> d(normals.begin(), normals.begin() + static_cast<std::ptrdiff_t>(g * normals.size() / kGroups));
    Rng rng(derive_seed(seed, g));
    rng.shuffle(d);
    const std::size_t half = d.size() / 2;
    std::vector<std::size_t> train(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<std::size_t> test(d.begin() + static_cast<std::ptrdiff_t>(half), d.end());
    test.insert(test.end(), anomalies.begin(), anomalies.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    const FoldResult r = run_fold(dataset, train, test, algorithm, options);
    points.push_back({d.size(), r.train_rows, r.auc});
  }
  return points;
}

}  // namespace xmlad::eval
