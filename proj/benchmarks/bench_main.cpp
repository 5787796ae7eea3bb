#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aaevar/alignment.hpp"
#include "aaevar/fixture.hpp"
#include "aaevar/lexicon.hpp"
#include "aaevar/neighborhood.hpp"
#include "aaevar/rng.hpp"
#include "aaevar/textgrid.hpp"

using namespace aaevar;

namespace {

std::vector<std::string> random_words(Rng& rng, std::size_t n) {
  static const std::vector<std::string> vocab{"the", "cold", "coal", "night", "test", "guess", "ten", "we", "went"};
  std::vector<std::string> out(n);
  for (auto& w : out) w = rng.pick(vocab);
  return out;
}

Pronunciation random_pron(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> phones{"T", "D", "S", "N", "K", "L", "M", "EH1", "IH1", "AA1", "OW1", "AE1"};
  std::vector<Phone> p;
  const auto n = 1 + rng.below(max_len);
  for (std::size_t i = 0; i < n; ++i) p.push_back(Phone::of(rng.pick(phones)));
  return Pronunciation(std::move(p));
}

VariantLexicon random_lexicon(std::size_t words) {
  Rng rng(3);
  VariantLexicon lex;
  for (std::size_t i = 0; i < words; ++i) lex.add_original("w" + std::to_string(i), random_pron(rng, 7));
  return lex;
}

void BM_Align(benchmark::State& state) {
  Rng rng(1);
  const auto ref = random_words(rng, static_cast<std::size_t>(state.range(0)));
  auto hyp = ref;
  for (std::size_t i = 0; i < hyp.size(); i += 4) hyp[i] = "okay";
  for (auto _ : state) benchmark::DoNotOptimize(align(ref, hyp));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Align)->RangeMultiplier(4)->Range(8, 512)->Complexity(benchmark::oNSquared);

void BM_NeighborsScan(benchmark::State& state) {
  const auto lex = random_lexicon(static_cast<std::size_t>(state.range(0)));
  Rng rng(9);
  for (auto _ : state) benchmark::DoNotOptimize(neighbors(random_pron(rng, 7), lex));
}
BENCHMARK(BM_NeighborsScan)->RangeMultiplier(10)->Range(100, 100000);

void BM_NeighborIndexQuery(benchmark::State& state) {
  const auto lex = random_lexicon(static_cast<std::size_t>(state.range(0)));
  const NeighborIndex index(lex);
  Rng rng(9);
  for (auto _ : state) benchmark::DoNotOptimize(index.query(random_pron(rng, 7)));
}
BENCHMARK(BM_NeighborIndexQuery)->RangeMultiplier(10)->Range(100, 100000);

void BM_NeighborIndexBuild(benchmark::State& state) {
  const auto lex = random_lexicon(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(NeighborIndex(lex));
}
BENCHMARK(BM_NeighborIndexBuild)->Arg(10000);

void BM_ParseTextGrid(benchmark::State& state) {
  const auto dir = std::filesystem::temp_directory_path() / "aaevar_bench_fixture";
  FixtureSpec spec;
  spec.n_tokens = static_cast<std::size_t>(state.range(0));
  spec.n_recordings = 1;
  const auto fx = generate_fixture(1, spec, dir);
  std::ifstream in(fx.textgrids.front(), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  for (auto _ : state) benchmark::DoNotOptimize(parse_textgrid(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
  std::filesystem::remove_all(dir);
}
BENCHMARK(BM_ParseTextGrid)->Arg(200)->Arg(2000);

}  // namespace
BENCHMARK_MAIN();
