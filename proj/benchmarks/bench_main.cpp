#include <benchmark/benchmark.h>

#include <random>

#include "xmlad/adifa.hpp"
#include "xmlad/eval.hpp"
#include "xmlad/extract.hpp"
#include "xmlad/flatten.hpp"
#include "xmlad/generate.hpp"

using namespace xmlad;

namespace {

FlatDataset random_dataset(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FlatDataset d;
  for (std::size_t j = 0; j < n; ++j) d.column_names.push_back("c" + std::to_string(j));
  d.column_meta.resize(n);
  d.rows.assign(m, std::vector<double>(n));
  for (auto& r : d.rows) {
    for (auto& v : r) v = normal(rng);
  }
  return d;
}

const char* kSchema = R"(<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="T"><xs:complexType><xs:sequence>
    <xs:element name="Amount" type="xs:decimal" maxOccurs="unbounded"/>
    <xs:element name="Note" type="xs:string"/>
    <xs:element name="Day" type="xs:date"/>
  </xs:sequence></xs:complexType></xs:element>
</xs:schema>)";

}  // namespace

static void BM_AdifaTrain(benchmark::State& state) {
  const auto data = random_dataset(static_cast<std::size_t>(state.range(0)), 40, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(adifa::AdifaModel::train(data, adifa::Aggregation::GeometricMean));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AdifaTrain)->Arg(250)->Arg(1000)->Arg(2000);

static void BM_AdifaClassify(benchmark::State& state) {
  const auto data = random_dataset(static_cast<std::size_t>(state.range(0)), 40, 2);
  const auto model = adifa::AdifaModel::train(data, adifa::Aggregation::GeometricMean);
  const auto probe = random_dataset(64, 40, 3);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(model.classify(probe.rows[i++ % probe.size()]));
}
BENCHMARK(BM_AdifaClassify)->Arg(1000)->Arg(4000);

static void BM_ExtractFlatten(benchmark::State& state) {
  const auto schema = parse_xsd(kSchema);
  const auto docs = generate_normal_corpus(schema, default_generation_params(schema), 200, 4);
  std::vector<CorpusDocument> corpus;
  for (std::size_t i = 0; i < docs.size(); ++i) corpus.push_back({std::to_string(i), docs[i]});
  for (auto _ : state) {
    const auto fm = build_feature_matrix(corpus, schema);
    const auto dict = build_dictionary(fm, schema, 10);
    benchmark::DoNotOptimize(flatten_matrix(fm, schema, dict));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}
BENCHMARK(BM_ExtractFlatten);

static void BM_Auc(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> scores(n);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = u(rng);
    labels[i] = i % 4 == 0 ? Label::Anomalous : Label::Normal;
  }
  for (auto _ : state) benchmark::DoNotOptimize(eval::auc(scores, labels));
}
BENCHMARK(BM_Auc)->Arg(1000)->Arg(100000);

BENCHMARK_MAIN();
