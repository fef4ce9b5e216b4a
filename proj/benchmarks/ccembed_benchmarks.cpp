// Copyright 2026 The ccembed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "ccembed/bdf.hpp"
#include "ccembed/compose.hpp"
#include "ccembed/curvature.hpp"
#include "ccembed/embed.hpp"
#include "ccembed/examples.hpp"

namespace {

using namespace ccembed;

void BM_KappaField(benchmark::State& state) {
  const MetricSpec spec = builtin_example("scaled-disk(4)");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(kappa_infinity_field(spec, spec.reference_bdf(), n));
}
BENCHMARK(BM_KappaField)->Arg(64)->Arg(256);

void BM_SectionalCurvature(benchmark::State& state) {
  const MetricSpec spec = builtin_example("hyperbolic-disk");
  const double b[] = {0.3};
  const TwoPlane plane = ray_plane(spec, 0, b, 0.1, PlaneFamily::NormalTangent);
  for (auto _ : state) benchmark::DoNotOptimize(sectional_curvature(spec, plane));
}
BENCHMARK(BM_SectionalCurvature);

void BM_ComputePhi(benchmark::State& state) {
  const CutoffSpec q = make_cutoff(0.9, CutoffKind::Smoothstep5);
  for (auto _ : state) benchmark::DoNotOptimize(compute_phi(q));
}
BENCHMARK(BM_ComputePhi);

void BM_FlowCollar(benchmark::State& state) {
  const MetricSpec spec = builtin_example("scaled-disk(4)");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(flow_collar(spec, 0, 0.9, n, n));
}
BENCHMARK(BM_FlowCollar)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AssembleG(benchmark::State& state) {
  const MetricSpec spec = builtin_example("scaled-disk(4)");
  const NormalFormData nf = flow_collar(spec, 0, 0.9, 64, 64);
  const BdfField bdf = assemble_bdf(nf, compute_phi(make_cutoff(0.9, CutoffKind::Smoothstep5)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_G(spec, nf, bdf));
}
BENCHMARK(BM_AssembleG)->Unit(benchmark::kMillisecond);

void BM_OptimizeEmbedding(benchmark::State& state) {
  const MetricSpec spec = builtin_example("scaled-disk(4)");
  const int n = static_cast<int>(state.range(0));
  const NormalFormData nf = flow_collar(spec, 0, 0.9, n, n);
  const BdfField bdf = assemble_bdf(nf, compute_phi(make_cutoff(0.9, CutoffKind::Smoothstep5)));
  const AdjustedTensorG G = assemble_G(spec, nf, bdf);
  OptimizerConfig cfg;
  cfg.N = 10;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_embedding(nf.grid, G.G, cfg));
}
BENCHMARK(BM_OptimizeEmbedding)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_ComposeAndCheck(benchmark::State& state) {
  const PEmbedding u = totally_geodesic_half_plane(3, 2.0, 64);
  for (auto _ : state) benchmark::DoNotOptimize(induced_curvature_inequality(u));
}
BENCHMARK(BM_ComposeAndCheck);

}  // namespace

BENCHMARK_MAIN();
