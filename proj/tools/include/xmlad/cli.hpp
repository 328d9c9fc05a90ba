#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xmlad::cli {

/// Every option the subcommands understand; unused fields keep defaults.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;  // positional arguments
  std::string output;
  std::string schema;
  std::string features;
  std::string dataset;
  std::string model;
  std::string dictionary;
  std::string dictionary_out;
  std::string truth;
  std::string params;
  std::string corpus_file;
  std::string report;
  std::string in_dir;
  std::string out_dir;

  std::size_t tfidf_k = 10;
  std::string psi = "gm";
  double threshold = 0.5;
  std::string algorithm;
  std::string algorithms = "adifa-gm,adifa-hm,adifa-am,pga,gde,lof";
  std::uint64_t seed = 0;
  bool standardize = false;
  bool no_attributes = false;
  std::size_t lof_min_pts = 10;
  double pga_alpha = 0.1;
  std::size_t pga_k = 1;
  std::string classes = "value-poisoning,xss,cdata,xpath,data-leakage";
  double anomaly_index = 0.05;
  double fraction = 1.0;
  std::size_t count = 100;
  std::size_t localize = 0;
  std::size_t top = 3;
};

/// Runs one subcommand. Returns 0 on success, 1 on a usage error (message and
/// usage on stderr), 2 on a data error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace xmlad::cli
