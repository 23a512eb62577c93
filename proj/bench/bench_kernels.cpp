// Parallel kernel build and Gram contraction against the serial reference.

#include <benchmark/benchmark.h>

#include "nlsub/reference.hpp"
#include "nlsub/schmidt.hpp"

namespace {

using namespace nlsub;

struct Case {
  CrystalPreset crystal = preset_bbo(1, Configuration::co);
  GateSpec gate;
  SignalBeamSpec signal;
  KernelAxes axes;

  explicit Case(std::size_t n) {
    GridConfig g;
    g.omega_c_points = g.q_points = g.omega_s_points = n;
    axes = derive_axes(crystal, gate, signal, g);
  }
  TransferFunction transfer() const { return TransferFunction(crystal, gate, signal); }
};

void BM_BuildKernel(benchmark::State& state) {
  const Case c(state.range(0));
  const auto tf = c.transfer();
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel(tf, c.axes));
  state.SetItemsProcessed(state.iterations() * c.axes.size());
}

void BM_BuildKernelSerial(benchmark::State& state) {
  const Case c(state.range(0));
  const auto tf = c.transfer();
  for (auto _ : state) benchmark::DoNotOptimize(reference::build_kernel_serial(tf, c.axes));
  state.SetItemsProcessed(state.iterations() * c.axes.size());
}

void BM_Gram(benchmark::State& state) {
  const Case c(state.range(0));
  const auto k = build_kernel(c.transfer(), c.axes);
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(k));
}

void BM_GramStreaming(benchmark::State& state) {
  const Case c(state.range(0));
  const auto tf = c.transfer();
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(tf, c.axes));
}

void BM_GramSerial(benchmark::State& state) {
  const Case c(state.range(0));
  const auto k = build_kernel(c.transfer(), c.axes);
  for (auto _ : state) benchmark::DoNotOptimize(reference::gram_matrix_serial(k));
}

}  // namespace

BENCHMARK(BM_BuildKernel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BuildKernelSerial)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Gram)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GramStreaming)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GramSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
