// Copyright 2026 The sphloc Authors
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

// Serial reference against the OpenMP kernels on one Monte-Carlo cell and
// one zone grid.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "sphloc/mc_kernels.h"
#include "sphloc/sampling.h"
#include "sphloc/stats.h"
#include "sphloc/zones.h"

namespace {

using namespace sphloc;

ReplicateJob watson_cell(const Sampler& sampler, const UnitVector& theta0) {
  ReplicateJob job;
  job.sampler = &sampler;
  job.n = 200;
  job.replicates = 2000;
  job.labels = {99};
  job.outputs = 1;
  job.evaluate = [&theta0](const Matrix&, const SampleSummary& s, double* out) {
    out[0] = watson_statistic(s, theta0);
  };
  return job;
}

void BM_CellSerial(benchmark::State& state) {
  const UnitVector theta0 = UnitVector::Axis(3, 2);
  const FvmlSampler sampler(theta0, 0.2);
  const ReplicateJob job = watson_cell(sampler, theta0);
  for (auto _ : state) benchmark::DoNotOptimize(run_replicates_serial(job));
  state.SetItemsProcessed(state.iterations() * job.replicates);
}

void BM_CellOmp(benchmark::State& state) {
  const UnitVector theta0 = UnitVector::Axis(3, 2);
  const FvmlSampler sampler(theta0, 0.2);
  const ReplicateJob job = watson_cell(sampler, theta0);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_replicates_omp(job, workers));
  state.SetItemsProcessed(state.iterations() * job.replicates);
}

void BM_ZoneGridSerial(benchmark::State& state) {
  RngStream rng(1, 1);
  const Sample sample(sample_fvml(UnitVector::Axis(3, 2), 0.7, 148, rng));
  const auto grid = sphere_grid(3, 20000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_grid_serial(sample, ZoneTest::kWald, grid));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void BM_ZoneGridOmp(benchmark::State& state) {
  RngStream rng(1, 1);
  const Sample sample(sample_fvml(UnitVector::Axis(3, 2), 0.7, 148, rng));
  const auto grid = sphere_grid(3, 20000);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_grid_omp(sample, ZoneTest::kWald, grid, workers));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void WorkerCounts(benchmark::internal::Benchmark* b) {
  for (int w = 1; w <= omp_get_max_threads(); w *= 2) b->Arg(w);
}

}  // namespace

BENCHMARK(BM_CellSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CellOmp)->Apply(WorkerCounts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZoneGridSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZoneGridOmp)->Apply(WorkerCounts)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
