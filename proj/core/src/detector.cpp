#include "xmlad/detector.hpp"

#include <algorithm>

#include "xmlad/adifa.hpp"
#include "xmlad/baselines.hpp"
#include "xmlad/error.hpp"
#include "xmlad/textio.hpp"

namespace xmlad {

namespace {

std::string adifa_tag(adifa::Aggregation psi) {
  switch (psi) {
    case adifa::Aggregation::ArithmeticMean: return "adifa-am";
    case adifa::Aggregation::GeometricMean: return "adifa-gm";
    case adifa::Aggregation::HarmonicMean: return "adifa-hm";
  }
  return "adifa-gm";
}

// ADIFA ranks by meta-density: larger is more normal.
class AdifaDetector final : public Detector {
 public:
  explicit AdifaDetector(adifa::AdifaModel model) : model_(std::move(model)) {}
  std::string tag() const override { return adifa_tag(model_.psi()); }
  Polarity polarity() const override { return Polarity::HigherIsNormal; }
  Verdict classify(std::span<const double> x) const override {
    const auto r = model_.classify(x);
    return {r.meta_density, r.label};
  }
  std::size_t dimension() const override { return model_.dimension(); }
  std::string serialize() const override { return model_.serialize(); }
  const adifa::AdifaModel& model() const { return model_; }

 private:
  adifa::AdifaModel model_;
};

template <typename Model>
class BaselineDetector final : public Detector {
 public:
  BaselineDetector(Model model, std::string tag, Polarity polarity)
      : model_(std::move(model)), tag_(std::move(tag)), polarity_(polarity) {}
  std::string tag() const override { return tag_; }
  Polarity polarity() const override { return polarity_; }
  Verdict classify(std::span<const double> x) const override { return model_.classify(x); }
  std::size_t dimension() const override { return model_.dimension(); }
  std::string serialize() const override { return model_.serialize(); }

 private:
  Model model_;
  std::string tag_;
  Polarity polarity_;
};

std::unique_ptr<Detector> wrap(baselines::GdeModel model) {
  std::string tag = model.sign_mode() == baselines::GdeSignMode::Literal ? "gde-literal" : "gde";
  return std::make_unique<BaselineDetector<baselines::GdeModel>>(std::move(model), std::move(tag),
                                                                 Polarity::HigherIsNormal);
}

}  // namespace

const std::vector<std::string>& detector_tags() {
  static const std::vector<std::string> tags = {"adifa-gm", "adifa-hm", "adifa-am", "pga",
                                                "gde",      "gde-literal", "lof"};
  return tags;
}

bool is_detector_tag(std::string_view tag) {
  const auto& tags = detector_tags();
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

Polarity polarity_of(std::string_view tag) {
  if (!is_detector_tag(tag)) throw Error(Errc::UsageError, "unknown algorithm '" + std::string(tag) + "'");
  return tag == "pga" || tag == "lof" ? Polarity::HigherIsAnomalous : Polarity::HigherIsNormal;
}

std::unique_ptr<Detector> train_detector(std::string_view tag, const FlatDataset& dataset,
                                         const DetectorOptions& options) {
  if (tag.starts_with("adifa-") && is_detector_tag(tag)) {
    const auto psi = adifa::aggregation_from_string(tag.substr(6));
    return std::make_unique<AdifaDetector>(adifa::AdifaModel::train(dataset, psi, options.threshold));
  }
  if (tag == "pga") {
    return std::make_unique<BaselineDetector<baselines::PgaModel>>(
        baselines::PgaModel::train(dataset, options.pga_alpha, options.pga_k, options.standardize), "pga",
        Polarity::HigherIsAnomalous);
  }
  if (tag == "gde" || tag == "gde-literal") {
    const auto mode = tag == "gde" ? baselines::GdeSignMode::Corrected : baselines::GdeSignMode::Literal;
    return wrap(baselines::GdeModel::train(dataset, mode, options.standardize));
  }
  if (tag == "lof") {
    return std::make_unique<BaselineDetector<baselines::LofModel>>(
        baselines::LofModel::train(dataset, options.lof_min_pts, options.standardize), "lof",
        Polarity::HigherIsAnomalous);
  }
  throw Error(Errc::UsageError, "unknown algorithm '" + std::string(tag) + "'");
}

std::unique_ptr<Detector> deserialize_detector(std::string_view content) {
  const auto header = peek_header(content);
  if (header.kind == "adifa") return std::make_unique<AdifaDetector>(adifa::AdifaModel::deserialize(content));
  if (header.kind == "pga") {
    return std::make_unique<BaselineDetector<baselines::PgaModel>>(baselines::PgaModel::deserialize(content), "pga",
                                                                   Polarity::HigherIsAnomalous);
  }
  if (header.kind == "gde") return wrap(baselines::GdeModel::deserialize(content));
  if (header.kind == "lof") {
    return std::make_unique<BaselineDetector<baselines::LofModel>>(baselines::LofModel::deserialize(content), "lof",
                                                                   Polarity::HigherIsAnomalous);
  }
  throw Error(Errc::CorruptFile, "not a model file (kind '" + header.kind + "')");
}

void save_model(const std::filesystem::path& path, const Detector& detector) {
  write_file(path, detector.serialize());
}

std::unique_ptr<Detector> load_model(const std::filesystem::path& path) {
  return deserialize_detector(read_file(path));
}

}  // namespace xmlad
