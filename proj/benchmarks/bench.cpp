#include <benchmark/benchmark.h>

#include <random>

#include "linlab/analysis.hpp"
#include "linlab/data.hpp"
#include "linlab/model.hpp"
#include "linlab/optim.hpp"

using namespace linlab;

namespace {

Mat64 random_matrix(Index r, Index c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Mat64 m(r, c);
  for (double& e : m.data()) e = nd(gen);
  return m;
}

Mat64 rank_one(Index r, Index c) {
  const auto u = random_matrix(r, 1, 1);
  const auto v = random_matrix(1, c, 2);
  return matmul(u, v);
}

void BM_Matmul(benchmark::State& state) {
  const Index n = state.range(0);
  const auto a = random_matrix(n, n, 1);
  const auto b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * 2 * n * n * n);
}
BENCHMARK(BM_Matmul)->Arg(128)->Arg(512);

void BM_AngleStatsDirect(benchmark::State& state) {
  const auto m = rank_one(state.range(0), 256);
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_row_angle_stats(m));
}
BENCHMARK(BM_AngleStatsDirect)->Arg(128)->Arg(512);

void BM_AngleStatsGram(benchmark::State& state) {
  const auto m = rank_one(state.range(0), 3072);
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_row_angle_stats(m));
}
BENCHMARK(BM_AngleStatsGram)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_TopTwoSingularRankOne(benchmark::State& state) {
  const auto m = rank_one(state.range(0), 3072);
  for (auto _ : state) benchmark::DoNotOptimize(top_two_singular_values(m));
}
BENCHMARK(BM_TopTwoSingularRankOne)->Arg(2)->Arg(128)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_TopTwoSingularDense(benchmark::State& state) {
  const auto m = random_matrix(state.range(0), state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(top_two_singular_values(m));
}
BENCHMARK(BM_TopTwoSingularDense)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_TrainStepPresetA(benchmark::State& state) {
  const auto ds = make_synthetic(3072, 256, 1.0, 0);
  auto net = init_network(ArchSpec::preset(ArchPreset::A), 0);
  BatchStream stream(ds.size(), state.range(0), 0, true);
  for (auto _ : state) {
    const auto [x, y] = gather(ds, stream.next());
    sgd_step(net, compute_gradients(net, x, y), 1e-4);
  }
}
BENCHMARK(BM_TrainStepPresetA)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Rank1ReportPresetB(benchmark::State& state) {
  const auto ds = make_synthetic(256, 128, 1.0, 0);
  const auto net = init_network(ArchSpec::preset(ArchPreset::B, 256), 0);
  const auto [x, y] = gather(ds, epoch_batches(ds.size(), 128, 0, true, 0).front());
  const auto g = compute_gradients(net, x, y);
  for (auto _ : state)
    for (Index l = 0; l < net.depth(); ++l) benchmark::DoNotOptimize(rank1_report(g, net, l));
}
BENCHMARK(BM_Rank1ReportPresetB)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
