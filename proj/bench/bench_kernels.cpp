// OpenMP kernels against the serial reference, plus vectorized env stepping.
// Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>

#include <vector>

#include "sf/nn/kernels.hpp"
#include "sf/rng.hpp"
#include "sf/vec_env.hpp"

namespace {

using namespace sf;
using namespace sf::nn;

std::vector<double> fill(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

// The first SF convolution: 4x84x84 -> 16x20x20, 8x8 stride 4.
const ConvShape kConv1{4, 84, 84, 16, 8, 4};

template <bool Parallel>
void BM_Conv1Forward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  const auto x = fill(batch * kConv1.in_size(), 1), w = fill(kConv1.weight_size(), 2),
             b = fill(16, 3);
  std::vector<double> y(batch * kConv1.out_size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      conv2d_forward(x, w, b, y, batch, kConv1);
    } else {
      serial::conv2d_forward(x, w, b, y, batch, kConv1);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

template <bool Parallel>
void BM_Conv1Backward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  const auto x = fill(batch * kConv1.in_size(), 1), w = fill(kConv1.weight_size(), 2),
             dy = fill(batch * kConv1.out_size(), 3);
  std::vector<double> dx(x.size()), dw(w.size()), db(16);
  for (auto _ : state) {
    if constexpr (Parallel) {
      conv2d_backward(x, w, dy, dx, dw, db, batch, kConv1);
    } else {
      serial::conv2d_backward(x, w, dy, dx, dw, db, batch, kConv1);
    }
    benchmark::DoNotOptimize(dw.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

template <bool Parallel>
void BM_LinearForward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  const int in = 2592, out = 256;  // SF dense layer
  const auto x = fill(static_cast<std::size_t>(batch) * in, 1),
             w = fill(static_cast<std::size_t>(in) * out, 2), b = fill(out, 3);
  std::vector<double> y(static_cast<std::size_t>(batch) * out);
  for (auto _ : state) {
    if constexpr (Parallel) {
      linear_forward(x, w, b, y, batch, in, out);
    } else {
      serial::linear_forward(x, w, b, y, batch, in, out);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

template <bool Parallel>
void BM_LinearBackward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  const int in = 2592, out = 256;
  const auto x = fill(static_cast<std::size_t>(batch) * in, 1),
             w = fill(static_cast<std::size_t>(in) * out, 2),
             dy = fill(static_cast<std::size_t>(batch) * out, 3);
  std::vector<double> dx(x.size()), dw(w.size()), db(out);
  for (auto _ : state) {
    if constexpr (Parallel) {
      linear_backward(x, w, dy, dx, dw, db, batch, in, out);
    } else {
      serial::linear_backward(x, w, dy, dx, dw, db, batch, in, out);
    }
    benchmark::DoNotOptimize(dw.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

template <bool Parallel>
void BM_VecEnvStep(benchmark::State& state) {
  EnvConfig cfg;
  cfg.sim.game_version = GameVersion::Youturn;
  cfg.obs = state.range(1) ? ObsMode::Pixel : ObsMode::Feature;
  const int n = static_cast<int>(state.range(0));
  VecEnv env(cfg, n, 1);
  SplitMix64 rng(2);
  std::vector<int> actions(n);
  for (auto _ : state) {
    for (int& a : actions) a = static_cast<int>(rng.below(5));
    if constexpr (Parallel) {
      env.step(actions);
    } else {
      env.step_serial(actions);
    }
  }
  state.SetItemsProcessed(state.iterations() * n);
}

}  // namespace

BENCHMARK(BM_Conv1Forward<false>)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv1Forward<true>)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv1Backward<false>)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv1Backward<true>)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearForward<false>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearForward<true>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearBackward<false>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearBackward<true>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VecEnvStep<false>)->Args({16, 0})->Args({16, 1})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VecEnvStep<true>)->Args({16, 0})->Args({16, 1})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
