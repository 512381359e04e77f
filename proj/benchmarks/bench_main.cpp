#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "l2t/dataset.hpp"
#include "l2t/json_io.hpp"
#include "l2t/metrics.hpp"
#include "l2t/realization.hpp"

using namespace l2t;

namespace {

const std::string kData = L2T_BENCH_DATA_DIR;

const Table& fixture() {
  static const Table t = load_table(table_source_from_json(Json::parse(read_file(kData + "/f1.json"))));
  return t;
}

const std::vector<std::string> kPrograms = {
    "eq { count { filter_eq { all_rows ; region ; africa } } ; 4 }",
    "eq { hop { nth_argmin { filter_eq { all_rows ; region ; africa } ; joined ; 2 } ; country } ; algeria }",
    "and { only { filter_greater { all_rows ; joined ; 2000 } } ; eq { hop { filter_greater { all_rows ; joined ; "
    "2000 } ; country } ; angola } }",
    "round_eq { avg { filter_eq { all_rows ; region ; africa } ; population } ; 58,550,000 }",
};

void BM_Parse(benchmark::State& state) {
  const auto& p = kPrograms[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) benchmark::DoNotOptimize(parse_logic_str(p));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * p.size()));
}
BENCHMARK(BM_Parse)->DenseRange(0, 3);

void BM_Typecheck(benchmark::State& state) {
  Ast ast = parse_logic_str(kPrograms[static_cast<std::size_t>(state.range(0))]);
  for (auto _ : state) benchmark::DoNotOptimize(typecheck(ast));
}
BENCHMARK(BM_Typecheck)->DenseRange(0, 3);

void BM_Evaluate(benchmark::State& state) {
  Ast ast = parse_logic_str(kPrograms[static_cast<std::size_t>(state.range(0))]);
  const Table& t = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(ast, t));
}
BENCHMARK(BM_Evaluate)->DenseRange(0, 3);

void BM_EvaluateWideTable(benchmark::State& state) {
  TableSource src;
  src.table_id = "wide";
  src.caption = "synthetic";
  src.columns = {"name", "score", "date"};
  for (int64_t r = 0; r < state.range(0); ++r) {
    src.rows.push_back({"row " + std::to_string(r), std::to_string((r * 7919) % 1000),
                        std::to_string(1900 + r % 120) + "-01-01"});
  }
  Table t = load_table(std::move(src));
  Ast ast = parse_logic_str("most_greater { filter_less { all_rows ; date ; 1990-01-01 } ; score ; 100 }");
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(ast, t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvaluateWideTable)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Realize(benchmark::State& state) {
  Ast ast = parse_logic_str(kPrograms[static_cast<std::size_t>(state.range(0))]);
  const Table& t = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(realize_template(ast, t));
}
BENCHMARK(BM_Realize)->DenseRange(0, 3);

void BM_Interpret(benchmark::State& state) {
  Ast ast = parse_logic_str(kPrograms[static_cast<std::size_t>(state.range(0))]);
  for (auto _ : state) benchmark::DoNotOptimize(interpret(ast));
}
BENCHMARK(BM_Interpret)->DenseRange(0, 3);

void BM_ValidateSample(benchmark::State& state) {
  LoadResult loaded = load_dataset(kData + "/sample");
  std::vector<Example> examples;
  for (int64_t i = 0; i < state.range(0); ++i) {
    examples.insert(examples.end(), loaded.examples.begin(), loaded.examples.end());
  }
  for (auto _ : state) benchmark::DoNotOptimize(validate_dataset(examples, ExecConfig{}, 1));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * examples.size()));
}
BENCHMARK(BM_ValidateSample)->Arg(1)->Arg(64);

void BM_Bleu(benchmark::State& state) {
  std::vector<std::string> cands, refs;
  for (int64_t i = 0; i < state.range(0); ++i) {
    refs.push_back("in the year " + std::to_string(i) + " there were 4 countries from africa that joined opec .");
    cands.push_back("there were " + std::to_string(i % 7) + " countries from africa in opec in that year .");
  }
  for (auto _ : state) benchmark::DoNotOptimize(bleu4(cands, refs));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * cands.size()));
}
BENCHMARK(BM_Bleu)->Arg(1092);

void BM_RougeL(benchmark::State& state) {
  std::vector<std::string> cands, refs;
  for (int64_t i = 0; i < state.range(0); ++i) {
    refs.push_back("in the year " + std::to_string(i) + " there were 4 countries from africa that joined opec .");
    cands.push_back("there were " + std::to_string(i % 7) + " countries from africa in opec in that year .");
  }
  for (auto _ : state) benchmark::DoNotOptimize(rouge(cands, refs, RougeVariant::L));
}
BENCHMARK(BM_RougeL)->Arg(1092);

}  // namespace

BENCHMARK_MAIN();
