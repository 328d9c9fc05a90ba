#pragma once

// Drives the command-line tool end to end into a scratch directory.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "xmlad/cli.hpp"
#include "xmlad/textio.hpp"

namespace support {

namespace fs = std::filesystem;

struct PipelineOptions {
  std::size_t documents = 100;
  std::uint64_t seed = 7;
  double fraction = 0.5;
  double anomaly_index = 0.05;
  std::string algos = "adifa-gm,pga";
  bool evaluate = true;
};

/// Runs every stage; returns the first failing "stage: exit code", or "".
inline std::string run_pipeline(const fs::path& dir, const PipelineOptions& o) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();
  const std::string seed = std::to_string(o.seed);
  const std::vector<std::vector<std::string>> stages = {
      {"schema-parse", XMLAD_TEST_DATA "/purchase_order.xsd", "-o", d + "/po.xadschema"},
      {"gen-corpus", "--schema", d + "/po.xadschema", "--params", XMLAD_TEST_DATA "/purchase_order_params.json",
       "--count", std::to_string(o.documents), "--out", d + "/normal", "--seed", seed},
      {"inject", "--schema", d + "/po.xadschema", "--in", d + "/normal", "--out", d + "/mixed", "--fraction",
       std::to_string(o.fraction), "--anomaly-index", std::to_string(o.anomaly_index), "--seed", seed},
      {"extract", "--schema", d + "/po.xadschema", d + "/mixed", "-o", d + "/fm.xadfm"},
      {"flatten", "--schema", d + "/po.xadschema", "--features", d + "/fm.xadfm", "--truth",
       d + "/mixed/truth.xadtruth", "--dict-out", d + "/dict.xaddict", "-o", d + "/data.csv"},
      {"train", "--dataset", d + "/data.csv", "--algo", "adifa-gm", "-o", d + "/gm.xadmodel"},
      {"train", "--dataset", d + "/data.csv", "--algo", "lof", "--standardize", "-o", d + "/lof.xadmodel"},
      {"score", "--model", d + "/gm.xadmodel", "--dataset", d + "/data.csv", "--localize", "3", "-o",
       d + "/scores.csv"},
      {"score", "--model", d + "/lof.xadmodel", "--dataset", d + "/data.csv", "-o", d + "/lof_scores.csv"},
      {"localize", "--model", d + "/gm.xadmodel", "--dataset", d + "/data.csv", "--top", "3", "-o",
       d + "/localize.csv"},
      {"learning-curve", "--dataset", d + "/data.csv", "--algo", "adifa-gm", "--seed", seed, "-o",
       d + "/curve.csv"},
  };
  for (auto args : stages) {
    args.insert(args.begin(), "xmlad");
    if (int rc = xmlad::cli::run(args); rc != 0) return args[1] + ": exit " + std::to_string(rc);
  }
  if (o.evaluate) {
    const std::vector<std::string> args = {"xmlad",  "evaluate", "--dataset", d + "/data.csv", "--algos",
                                           o.algos, "--report", d + "/report", "--seed",      seed};
    if (int rc = xmlad::cli::run(args); rc != 0) return "evaluate: exit " + std::to_string(rc);
  }
  return "";
}

/// Relative path -> content for every regular file under dir.
inline std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = xmlad::read_file(e.path());
  }
  return files;
}

}  // namespace support
