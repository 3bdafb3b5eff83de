// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ectsim/element_forms.hpp"

using namespace ectsim;

namespace {

TetFrame bench_frame() {
  return TetFrame::from(Vec3(0, 0, 0), Vec3(1.1, 0.1, 0), Vec3(0.2, 0.9, 0.1),
                        Vec3(0.1, 0.2, 1.3));
}

void BM_ElementL11(benchmark::State& state) {
  TetFrame f = bench_frame();
  for (auto _ : state) {
    Mat12c m = element_l11(f, 1.2, 0.8, 1e6, 6.28e5);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_ElementL11);

void BM_ElementL22(benchmark::State& state) {
  TetFrame f = bench_frame();
  for (auto _ : state) {
    Mat4c m = element_l22(f, 1e6, 6.28e5, 1e-6, 1.26e-6);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_ElementL22);

void BM_TetFrame(benchmark::State& state) {
  for (auto _ : state) {
    TetFrame f = bench_frame();
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_TetFrame);

}  // namespace
