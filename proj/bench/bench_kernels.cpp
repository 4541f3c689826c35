#include <benchmark/benchmark.h>

#include "coset_forge/coset.hpp"
#include "oracle.hpp"

using namespace coset_forge;

namespace {
  Alphabet const alphabet(2);

  std::vector<Word> const& generators() {
    static auto const gens = alphabet.parse_list("a^3,b^3,ab^2A,ba^3B,bab^2AB");
    return gens;
  }

  Subgroup const& subgroup() {
    static Subgroup const c(generators(), 2);
    return c;
  }

  KReducedOptions options(benchmark::State const& state) {
    KReducedOptions o;
    o.samples = static_cast<std::size_t>(state.range(0));
    return o;
  }

  void verify_parallel(benchmark::State& state) {
    for (auto _ : state) {
      benchmark::DoNotOptimize(
          verify_k_reduced(subgroup(), alphabet.parse("a"), options(state)));
    }
  }

  void verify_serial(benchmark::State& state) {
    for (auto _ : state) {
      benchmark::DoNotOptimize(verify_k_reduced_serial(
          subgroup(), alphabet.parse("a"), options(state)));
    }
  }

  void coset_ball_parallel(benchmark::State& state) {
    auto const l = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
      benchmark::DoNotOptimize(oracle::brute_coset_ball(
          generators(), alphabet.parse("a"), {l, l + 4}, l + 4));
    }
  }

  void coset_ball_serial(benchmark::State& state) {
    auto const l = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
      benchmark::DoNotOptimize(oracle::brute_coset_ball_serial(
          generators(), alphabet.parse("a"), {l, l + 4}, l + 4));
    }
  }
}  // namespace

BENCHMARK(verify_parallel)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(verify_serial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(coset_ball_parallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(coset_ball_serial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
