#pragma once

// Uniform train/classify/persist surface over ADIFA and the baselines, keyed
// by algorithm tag: adifa-gm, adifa-hm, adifa-am, pga, gde, gde-literal, lof.

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmlad/dataset.hpp"
#include "xmlad/verdict.hpp"

namespace xmlad {

struct DetectorOptions {
  double threshold = 0.5;  // ADIFA C
  double pga_alpha = 0.1;
  std::size_t pga_k = 1;
  std::size_t lof_min_pts = 10;
  bool standardize = false;  // baselines only
};

class Detector {
 public:
  virtual ~Detector() = default;

  virtual std::string tag() const = 0;
  virtual Polarity polarity() const = 0;
  virtual Verdict classify(std::span<const double> x) const = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::string serialize() const = 0;
};

const std::vector<std::string>& detector_tags();
bool is_detector_tag(std::string_view tag);
Polarity polarity_of(std::string_view tag);

/// Trains on the normal rows of the dataset.
std::unique_ptr<Detector> train_detector(std::string_view tag, const FlatDataset& dataset,
                                         const DetectorOptions& options = {});
/// Dispatches on the file header kind.
std::unique_ptr<Detector> deserialize_detector(std::string_view content);

void save_model(const std::filesystem::path& path, const Detector& detector);
std::unique_ptr<Detector> load_model(const std::filesystem::path& path);

/// Orients a score so that larger means more anomalous.
inline double anomaly_score(Polarity polarity, double score) {
  return polarity == Polarity::HigherIsAnomalous ? score : -score;
}

}  // namespace xmlad
