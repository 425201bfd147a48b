#include <benchmark/benchmark.h>

#include <numeric>

#include "snb/bench.hpp"
#include "snb/engine.hpp"

namespace {

const snb::Engine& engine() {
  static const snb::Engine e = snb::Engine::load(snb::EngineConfig::from_directory(snb::EngineConfig::default_fixture_dir()));
  return e;
}

// First target bag of the fixture sentence `which` that yields a sentence.
const snb::SignBag& productive_bag(std::size_t which) {
  static std::vector<snb::SignBag> cache = [] {
    std::vector<snb::SignBag> out;
    for (const auto& s : snb::fixture_sentences()) {
      const auto t = engine().transfer(engine().parse(s.text).at(0).bag);
      for (const auto& b : t.bags) {
        if (!snb::generate_all(engine().target_grammar(), b.bag, engine().target_goal(), snb::GenMode::MemoIndex)
                 .empty()) {
          out.push_back(b.bag);
          break;
        }
      }
    }
    return out;
  }();
  return cache.at(which);
}

void BM_Generate(benchmark::State& state) {
  const auto mode = static_cast<snb::GenMode>(state.range(0));
  const auto& bag = productive_bag(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto r = snb::generate_all(engine().target_grammar(), bag, engine().target_goal(), mode);
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(std::to_string(bag.signs.size()) + " signs");
}
BENCHMARK(BM_Generate)
    ->ArgNames({"mode", "sentence"})
    ->ArgsProduct({{static_cast<long>(snb::GenMode::Naive), static_cast<long>(snb::GenMode::MemoIndex),
                    static_cast<long>(snb::GenMode::MemoTagList)},
                   {0, 1, 2}})
    ->Unit(benchmark::kMicrosecond);

void BM_CalcIndex(benchmark::State& state) {
  std::vector<snb::Tag> tags(static_cast<std::size_t>(state.range(0)));
  std::iota(tags.begin(), tags.end(), snb::Tag{1});
  for (auto _ : state) benchmark::DoNotOptimize(snb::calc_index(tags));
}
BENCHMARK(BM_CalcIndex)->Arg(3)->Arg(9)->Arg(64)->Arg(256);

void BM_Parse(benchmark::State& state) {
  const auto sentences = snb::fixture_sentences();
  const auto& text = sentences.at(static_cast<std::size_t>(state.range(0))).text;
  for (auto _ : state) {
    auto p = engine().parse(text);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_Parse)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_Translate(benchmark::State& state) {
  const auto sentences = snb::fixture_sentences();
  snb::TranslateOptions opts;
  opts.share_memo = state.range(0) != 0;
  for (auto _ : state) {
    auto t = engine().translate(sentences.back().text, opts);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_Translate)->ArgName("share")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
