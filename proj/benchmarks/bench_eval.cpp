#include "benchmark/benchmark.h"
#include "deltah/essence.hpp"
#include "deltah/eval.hpp"
#include "deltah/gen.hpp"
#include "deltah/parser.hpp"
#include "deltah/pcf.hpp"
#include "deltah/prelude.hpp"
#include "deltah/printer.hpp"
#include "deltah/properties.hpp"
#include "deltah/typecheck.hpp"

namespace {

using namespace deltah;

void BM_ParsePrint(benchmark::State& state) {
  ExprPtr m = delayed_cast_program();
  std::string text = print(m);
  ParseOptions opts;
  opts.mode = ParseOptions::Mode::Trace;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_expr(text, opts));
  }
}
BENCHMARK(BM_ParsePrint);

void BM_InferCompile(benchmark::State& state) {
  ExprPtr m = delayed_cast_program();
  for (auto _ : state) {
    benchmark::DoNotOptimize(infer_compile(TypingContext{}, m));
  }
}
BENCHMARK(BM_InferCompile);

void BM_ExhaustiveEval(benchmark::State& state) {
  ExprPtr m = delayed_cast_program();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(m, Strategy::exhaustive(), kDefaultFuel));
  }
}
BENCHMARK(BM_ExhaustiveEval);

void BM_FirstPathBlame(benchmark::State& state) {
  ExprPtr m = failing_check_program();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(m, Strategy::first(), kDefaultFuel));
  }
}
BENCHMARK(BM_FirstPathBlame);

void BM_PcfAdd(benchmark::State& state) {
  ExprPtr add = *prelude().lookup("add");
  pcf::ExprPtr p = essence_expr(
      app(app(add, numeral(static_cast<std::uint64_t>(state.range(0)))),
          numeral(7)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pcf::pcf_eval(p, 100000));
  }
}
BENCHMARK(BM_PcfAdd)->Arg(8)->Arg(64);

void BM_CheckRuntime(benchmark::State& state) {
  const Prelude& pr = prelude();
  ParseOptions opts;
  opts.abbrevs = &pr.type_abbrevs;
  TypePtr even = parse_type("even", opts);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        check_runtime(TypingContext{}, numeral(6), even, 5000));
  }
}
BENCHMARK(BM_CheckRuntime);

void BM_Generate(benchmark::State& state) {
  GenConfig cfg;
  cfg.seed = 1;
  Generator gen(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen.gen_well_typed());
  }
}
BENCHMARK(BM_Generate);

}  // namespace

BENCHMARK_MAIN();
