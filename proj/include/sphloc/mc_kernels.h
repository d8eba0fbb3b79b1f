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

// Replicate loops of the Monte-Carlo harness. The OpenMP kernel and the
// serial reference produce bit-identical output: replicate i always draws
// from derive_stream(seed, labels + [i]) and writes only its own row.

#ifndef SPHLOC_MC_KERNELS_H_
#define SPHLOC_MC_KERNELS_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "sphloc/sampling.h"
#include "sphloc/stats.h"

namespace sphloc {

struct RunOptions {
  int workers = 0;      // 0 means every available core
  bool serial = false;  // force the serial reference kernel
};

struct ReplicateJob {
  const Sampler* sampler = nullptr;
  int n = 0;
  int replicates = 0;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::uint64_t> labels;
  int outputs = 1;
  // Writes `outputs` values for one replicate. Called concurrently, so it
  // must not mutate shared state. Exceptions are caught and the row is
  // filled with NaN.
  std::function<void(const Matrix& points, const SampleSummary& summary, double* out)> evaluate;
};

// replicates x outputs values, row-major.
std::vector<double> run_replicates_serial(const ReplicateJob& job);
std::vector<double> run_replicates_omp(const ReplicateJob& job, int workers);
std::vector<double> run_replicates(const ReplicateJob& job, const RunOptions& options);

int effective_workers(const RunOptions& options);

}  // namespace sphloc

#endif  // SPHLOC_MC_KERNELS_H_
