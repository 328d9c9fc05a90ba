#include "xmlad/cli.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "xmlad/adifa.hpp"
#include "xmlad/detector.hpp"
#include "xmlad/digest.hpp"
#include "xmlad/error.hpp"
#include "xmlad/eval.hpp"
#include "xmlad/extract.hpp"
#include "xmlad/flatten.hpp"
#include "xmlad/generate.hpp"
#include "xmlad/inject.hpp"
#include "xmlad/payloads.hpp"
#include "xmlad/schema.hpp"
#include "xmlad/stats.hpp"
#include "xmlad/textio.hpp"

namespace xmlad::cli {

namespace fs = std::filesystem;

namespace {

void init_logging() {
  auto logger = spdlog::get("xmlad");
  if (!logger) {
    logger = spdlog::stderr_color_mt("xmlad");
    spdlog::set_default_logger(logger);
  }
  const char* level = std::getenv("XMLAD_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
  spdlog::set_pattern("[%l] %v");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << content;
  } else {
    write_file(cfg.output, content);
    spdlog::info("wrote {}", cfg.output);
  }
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(Errc::UsageError, std::string("missing required option ") + flag);
}

SchemaVector load_schema(const std::string& path) { return deserialize_schema(read_file(path)); }

DetectorOptions detector_options(const RunConfig& cfg) {
  DetectorOptions o;
  o.threshold = cfg.threshold;
  o.pga_alpha = cfg.pga_alpha;
  o.pga_k = cfg.pga_k;
  o.lof_min_pts = cfg.lof_min_pts;
  o.standardize = cfg.standardize;
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

// ---------------------------------------------------------------- stages

void cmd_schema_parse(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) throw Error(Errc::UsageError, "schema-parse takes exactly one XSD file");
  SchemaOptions opts;
  opts.include_attributes = !cfg.no_attributes;
  const SchemaVector schema = parse_xsd(read_file(cfg.inputs.front()), opts);
  for (const auto& d : schema.diagnostics()) spdlog::warn("{} at {}: {}", d.kind, d.path, d.message);
  spdlog::info("{} descriptors", schema.size());
  emit(cfg, serialize_schema(schema));
}

void cmd_extract(const RunConfig& cfg) {
  require(cfg.schema, "--schema");
  if (cfg.inputs.size() != 1) throw Error(Errc::UsageError, "extract takes one corpus directory or manifest");
  const SchemaVector schema = load_schema(cfg.schema);
  const FeatureMatrix fm = build_feature_matrix(load_corpus(cfg.inputs.front()), schema);
  for (const auto& d : fm.diagnostics) spdlog::warn("skipped {}: {}", d.row_id, d.message);
  spdlog::info("{} rows extracted", fm.rows.size());
  emit(cfg, serialize_feature_matrix(fm));
}

void cmd_flatten(const RunConfig& cfg) {
  require(cfg.schema, "--schema");
  require(cfg.features, "--features");
  const SchemaVector schema = load_schema(cfg.schema);
  const FeatureMatrix fm = deserialize_feature_matrix(read_file(cfg.features));
  TfIdfDictionary dict = cfg.dictionary.empty() ? build_dictionary(fm, schema, cfg.tfidf_k)
                                                : deserialize_dictionary(read_file(cfg.dictionary));
  if (!cfg.dictionary_out.empty()) write_file(cfg.dictionary_out, serialize_dictionary(dict));
  FlatDataset data = flatten_matrix(fm, schema, dict);
  if (!cfg.truth.empty()) {
    std::map<std::string, Label> truth;
    for (const auto& r : deserialize_truth(read_file(cfg.truth))) truth[r.document_id] = r.label;
    data.labels.clear();
    for (const auto& row : fm.rows) {
      auto it = truth.find(row.id);
      if (it == truth.end()) throw Error(Errc::LengthMismatch, "no ground truth for document '" + row.id + "'");
      data.labels.push_back(it->second);
    }
  }
  emit(cfg, write_csv(data));
}

void cmd_train(const RunConfig& cfg) {
  require(cfg.dataset, "--dataset");
  require(cfg.output, "-o");
  const std::string tag = cfg.algorithm.empty() ? "adifa-" + cfg.psi : cfg.algorithm;
  const FlatDataset data = read_csv(read_file(cfg.dataset));
  const auto detector = train_detector(tag, data, detector_options(cfg));
  save_model(cfg.output, *detector);
  spdlog::info("trained {} on {} rows", detector->tag(), data.normal_rows().size());
}

void cmd_score(const RunConfig& cfg) {
  require(cfg.model, "--model");
  require(cfg.dataset, "--dataset");
  const std::string content = read_file(cfg.model);
  const FlatDataset data = read_csv(read_file(cfg.dataset));
  std::ostringstream out;
  if (peek_header(content).kind == "adifa") {
    const auto model = adifa::AdifaModel::deserialize(content);
    out << "row,score,meta_density,likelihood,label";
    for (std::size_t k = 1; k <= cfg.localize; ++k) out << ",loc" << k << "_path,loc" << k << "_likelihood";
    out << "\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto r = model.classify(data.rows[i]);
      out << i << ',' << format_double(r.score) << ',' << format_double(r.meta_density) << ','
          << format_double(r.likelihood) << ',' << to_string(r.label);
      for (const auto& a : adifa::localize(r, cfg.localize)) {
        out << ',' << csv_field(a.column_name) << ',' << format_double(a.likelihood);
      }
      out << "\n";
    }
  } else {
    if (cfg.localize > 0) throw Error(Errc::UsageError, "--localize needs an ADIFA model");
    const auto detector = deserialize_detector(content);
    out << "row,score,label\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto v = detector->classify(data.rows[i]);
      out << i << ',' << format_double(v.score) << ',' << to_string(v.label) << "\n";
    }
  }
  emit(cfg, out.str());
}

void cmd_localize(const RunConfig& cfg) {
  require(cfg.model, "--model");
  require(cfg.dataset, "--dataset");
  const std::string content = read_file(cfg.model);
  if (peek_header(content).kind != "adifa") throw Error(Errc::UsageError, "localize needs an ADIFA model");
  const auto model = adifa::AdifaModel::deserialize(content);
  const FlatDataset data = read_csv(read_file(cfg.dataset));
  std::ostringstream out;
  out << "row,label,rank,column,path,likelihood,similarity\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = model.classify(data.rows[i]);
    std::size_t rank = 0;
    for (const auto& a : adifa::localize(r, cfg.top)) {
      out << i << ',' << to_string(r.label) << ',' << ++rank << ',' << csv_field(a.column_name) << ','
          << csv_field(column_meta_from_name(a.column_name).path) << ',' << format_double(a.likelihood) << ','
          << format_double(a.similarity) << "\n";
    }
  }
  emit(cfg, out.str());
}

void cmd_inject(const RunConfig& cfg) {
  require(cfg.schema, "--schema");
  require(cfg.in_dir, "--in");
  require(cfg.out_dir, "--out");
  const SchemaVector schema = load_schema(cfg.schema);
  InjectionSpec spec;
  spec.anomaly_index = cfg.anomaly_index;
  spec.classes = parse_attack_classes(cfg.classes);
  spec.seed = cfg.seed;
  if (!cfg.corpus_file.empty()) spec.payload_corpus = payloads::split_sentences(read_file(cfg.corpus_file));
  const auto corpus = load_corpus(cfg.in_dir);
  const auto labeled = make_anomalous_corpus(corpus, schema, spec, cfg.fraction);
  std::size_t shortfalls = 0;
  for (const auto& doc : labeled.documents) write_file(fs::path(cfg.out_dir) / fs::path(doc.id).filename(), doc.text);
  for (const auto& r : labeled.records) {
    if (r.label == Label::Anomalous && r.shortfall) {
      ++shortfalls;
      spdlog::warn("{}: fewer injections than requested ({} placed)", r.document_id, r.injections.size());
    }
  }
  const fs::path truth = cfg.truth.empty() ? fs::path(cfg.out_dir) / "truth.xadtruth" : fs::path(cfg.truth);
  write_file(truth, serialize_truth(labeled.records));
  spdlog::info("{} documents written, {} shortfalls", labeled.documents.size(), shortfalls);
}

void cmd_gen_corpus(const RunConfig& cfg) {
  require(cfg.schema, "--schema");
  require(cfg.out_dir, "--out");
  const SchemaVector schema = load_schema(cfg.schema);
  const GenerationParams params = cfg.params.empty() ? default_generation_params(schema)
                                                     : parse_generation_params(read_file(cfg.params), schema);
  const auto docs = generate_normal_corpus(schema, params, cfg.count, cfg.seed);
  const int digits = static_cast<int>(std::to_string(docs.empty() ? 0 : docs.size() - 1).size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::string name = std::to_string(i);
    name.insert(0, static_cast<std::size_t>(std::max(0, digits - static_cast<int>(name.size()))), '0');
    write_file(fs::path(cfg.out_dir) / ("doc-" + name + ".xml"), docs[i]);
  }
  spdlog::info("{} documents generated", docs.size());
}

void cmd_evaluate(const RunConfig& cfg) {
  require(cfg.dataset, "--dataset");
  require(cfg.report, "--report");
  const auto algos = split_list(cfg.algorithms);
  if (algos.empty()) throw Error(Errc::UsageError, "--algos is empty");
  for (const auto& a : algos) polarity_of(a);
  const std::string raw = read_file(cfg.dataset);
  const FlatDataset data = read_csv(raw);
  const DetectorOptions options = detector_options(cfg);
  const fs::path dir(cfg.report);

  std::ostringstream folds, summary;
  folds << "algorithm,repetition,fold,train_rows,test_rows,auc\n";
  summary << "algorithm,mean_auc\n";
  std::vector<std::vector<double>> matrix(10, std::vector<double>(algos.size()));
  for (std::size_t a = 0; a < algos.size(); ++a) {
    spdlog::info("5x2 cross-validation: {}", algos[a]);
    const auto cv = eval::cv_5x2(data, algos[a], cfg.seed, options);
    std::ostringstream roc;
    roc << "repetition,fold,threshold,fpr,tpr\n";
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
      const auto& fr = cv.folds[f];
      matrix[f][a] = fr.auc;
      folds << algos[a] << ',' << fr.repetition << ',' << fr.fold << ',' << fr.train_rows << ',' << fr.test_rows
            << ',' << format_double(fr.auc) << "\n";
      for (const auto& p : eval::roc_curve(fr.scores, fr.labels).points) {
        roc << fr.repetition << ',' << fr.fold << ',' << format_double(p.threshold) << ',' << format_double(p.fpr)
            << ',' << format_double(p.tpr) << "\n";
      }
    }
    summary << algos[a] << ',' << format_double(cv.mean_auc) << "\n";
    write_file(dir / ("roc_" + algos[a] + ".csv"), roc.str());
  }
  write_file(dir / "folds.csv", folds.str());
  write_file(dir / "summary.csv", summary.str());

  std::ostringstream sig;
  sig << "dataset sha256 " << sha256_hex(raw) << "\nseed " << cfg.seed << "\n";
  if (algos.size() >= 2) {
    sig << "rows: the 10 folds of 5x2 cross-validation; reference: " << algos.front() << "\n\n";
    sig << stats::format_report(stats::friedman_bonferroni(matrix, 0), algos);
  } else {
    sig << "single algorithm: no comparison\n";
  }
  write_file(dir / "significance.txt", sig.str());
  std::cout << summary.str();
}

void cmd_learning_curve(const RunConfig& cfg) {
  require(cfg.dataset, "--dataset");
  const std::string tag = cfg.algorithm.empty() ? "adifa-" + cfg.psi : cfg.algorithm;
  const FlatDataset data = read_csv(read_file(cfg.dataset));
  std::ostringstream out;
  out << "group,normal_rows,train_size,auc\n";
  std::size_t g = 0;
  for (const auto& p : eval::learning_curve(data, tag, cfg.seed, detector_options(cfg))) {
    out << ++g << ',' << p.normal_rows << ',' << p.train_size << ',' << format_double(p.auc) << "\n";
  }
  emit(cfg, out.str());
}

// ---------------------------------------------------------------- parser

void add_model_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--threshold,-C", cfg.threshold, "ADIFA classification threshold C")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--psi", cfg.psi, "ADIFA aggregation (am, gm, hm)")
      ->check(CLI::IsMember({"am", "gm", "hm"}));
  sub->add_option("--pga-alpha", cfg.pga_alpha, "PGA percentile alpha")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--pga-k", cfg.pga_k, "PGA neighbour rank k")->check(CLI::PositiveNumber);
  sub->add_option("--lof-min-pts", cfg.lof_min_pts, "LOF neighbourhood size")->check(CLI::PositiveNumber);
  sub->add_flag("--standardize", cfg.standardize, "z-score columns for the distance-based baselines");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  init_logging();
  RunConfig cfg;
  CLI::App app{"XML anomaly detection toolkit", "xmlad"};
  app.require_subcommand(1);

  auto seed_opt = [&](CLI::App* sub) { sub->add_option("--seed", cfg.seed, "random seed"); };

  auto* schema_parse = app.add_subcommand("schema-parse", "Parse an XSD into a .xadschema file");
  schema_parse->add_option("xsd", cfg.inputs, "XSD file")->required();
  schema_parse->add_option("-o,--output", cfg.output, "output file (default stdout)");
  schema_parse->add_flag("--no-attributes", cfg.no_attributes, "skip attribute declarations");

  auto* extract = app.add_subcommand("extract", "Extract a feature matrix from an XML corpus");
  extract->add_option("--schema", cfg.schema, ".xadschema file")->required();
  extract->add_option("corpus", cfg.inputs, "directory of *.xml files or a manifest")->required();
  extract->add_option("-o,--output", cfg.output, "output .xadfm file (default stdout)");

  auto* flatten = app.add_subcommand("flatten", "Flatten a feature matrix into a CSV dataset");
  flatten->add_option("--schema", cfg.schema, ".xadschema file")->required();
  flatten->add_option("--features", cfg.features, ".xadfm file")->required();
  flatten->add_option("--tfidf-k", cfg.tfidf_k, "number of TF-IDF terms")->check(CLI::PositiveNumber);
  flatten->add_option("--dict", cfg.dictionary, "reuse an existing .xaddict dictionary");
  flatten->add_option("--dict-out", cfg.dictionary_out, "write the dictionary used");
  flatten->add_option("--truth", cfg.truth, ".xadtruth file for the label column");
  flatten->add_option("-o,--output", cfg.output, "output CSV (default stdout)");

  auto* train = app.add_subcommand("train", "Train a detector on the normal rows of a dataset");
  train->add_option("--dataset", cfg.dataset, "CSV dataset")->required();
  train->add_option("--algo", cfg.algorithm, "algorithm tag (default adifa-<psi>)")
      ->check(CLI::IsMember(detector_tags()));
  train->add_option("-o,--output", cfg.output, "output .xadmodel file")->required();
  add_model_options(train, cfg);

  auto* score = app.add_subcommand("score", "Classify every row of a dataset");
  score->add_option("--model", cfg.model, ".xadmodel file")->required();
  score->add_option("--dataset", cfg.dataset, "CSV dataset")->required();
  score->add_option("--localize", cfg.localize, "append the N least likely attributes (ADIFA only)");
  score->add_option("-o,--output", cfg.output, "output CSV (default stdout)");

  auto* localize = app.add_subcommand("localize", "List the least likely attributes of every row");
  localize->add_option("--model", cfg.model, "ADIFA .xadmodel file")->required();
  localize->add_option("--dataset", cfg.dataset, "CSV dataset")->required();
  localize->add_option("--top", cfg.top, "attributes per row")->check(CLI::PositiveNumber);
  localize->add_option("-o,--output", cfg.output, "output CSV (default stdout)");

  auto* inject = app.add_subcommand("inject", "Inject attacks into a corpus");
  inject->add_option("--schema", cfg.schema, ".xadschema file")->required();
  inject->add_option("--in", cfg.in_dir, "input corpus directory or manifest")->required();
  inject->add_option("--out", cfg.out_dir, "output directory")->required();
  inject->add_option("--anomaly-index", cfg.anomaly_index, "injections per simple element")
      ->check(CLI::Range(0.0, 1.0));
  inject->add_option("--classes", cfg.classes, "comma-separated attack classes");
  inject->add_option("--fraction", cfg.fraction, "fraction of documents to inject")->check(CLI::Range(0.0, 1.0));
  inject->add_option("--corpus-file", cfg.corpus_file, "text file with sentences for data leakage");
  inject->add_option("--truth", cfg.truth, "ground-truth output (default <out>/truth.xadtruth)");
  seed_opt(inject);

  auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic normal corpus");
  gen->add_option("--schema", cfg.schema, ".xadschema file")->required();
  gen->add_option("--params", cfg.params, "JSON generation parameters (default: built-in)");
  gen->add_option("--count", cfg.count, "number of documents");
  gen->add_option("--out", cfg.out_dir, "output directory")->required();
  seed_opt(gen);

  auto* evaluate = app.add_subcommand("evaluate", "5x2 cross-validation and significance report");
  evaluate->add_option("--dataset", cfg.dataset, "labeled CSV dataset")->required();
  evaluate->add_option("--algos", cfg.algorithms, "comma-separated algorithm tags");
  evaluate->add_option("--report", cfg.report, "report directory")->required();
  add_model_options(evaluate, cfg);
  seed_opt(evaluate);

  auto* curve = app.add_subcommand("learning-curve", "AUC against training-set size");
  curve->add_option("--dataset", cfg.dataset, "labeled CSV dataset")->required();
  curve->add_option("--algo", cfg.algorithm, "algorithm tag (default adifa-<psi>)")
      ->check(CLI::IsMember(detector_tags()));
  curve->add_option("-o,--output", cfg.output, "output CSV (default stdout)");
  add_model_options(curve, cfg);
  seed_opt(curve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, std::cout, std::cerr);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, std::cout, std::cerr);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  const auto* chosen = app.get_subcommands().front();
  cfg.subcommand = chosen->get_name();
  if (cfg.anomaly_index <= 0.0 || cfg.fraction <= 0.0) {
    std::cerr << "error: --anomaly-index and --fraction must be greater than 0\n\n" << chosen->help();
    return 1;
  }
  try {
    if (cfg.subcommand == "schema-parse") cmd_schema_parse(cfg);
    else if (cfg.subcommand == "extract") cmd_extract(cfg);
    else if (cfg.subcommand == "flatten") cmd_flatten(cfg);
    else if (cfg.subcommand == "train") cmd_train(cfg);
    else if (cfg.subcommand == "score") cmd_score(cfg);
    else if (cfg.subcommand == "localize") cmd_localize(cfg);
    else if (cfg.subcommand == "inject") cmd_inject(cfg);
    else if (cfg.subcommand == "gen-corpus") cmd_gen_corpus(cfg);
    else if (cfg.subcommand == "evaluate") cmd_evaluate(cfg);
    else if (cfg.subcommand == "learning-curve") cmd_learning_curve(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == Errc::UsageError) {
      std::cerr << "\n" << chosen->help();
      return 1;
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace xmlad::cli
