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

#include "sphloc/mc_kernels.h"

#include <omp.h>

#include <cmath>
#include <limits>

#include "sphloc/errors.h"

namespace sphloc {
namespace {

void validate(const ReplicateJob& job) {
  if (job.sampler == nullptr) throw DomainError("replicate job has no sampler");
  if (job.n < 1 || job.replicates < 1 || job.outputs < 1) {
    throw DomainError("replicate job needs n, replicates and outputs >= 1");
  }
  if (!job.evaluate) throw DomainError("replicate job has no evaluator");
}

void run_one(const ReplicateJob& job, std::vector<std::uint64_t>& labels, Matrix& buffer,
             int replicate, double* row) {
  labels.back() = static_cast<std::uint64_t>(replicate);
  RngStream rng = derive_stream(job.seed, labels);
  job.sampler->fill(buffer, rng);
  try {
    job.evaluate(buffer, SampleSummary::Of(buffer), row);
  } catch (const Error&) {
    for (int k = 0; k < job.outputs; ++k) row[k] = std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::vector<double> run_replicates_serial(const ReplicateJob& job) {
  validate(job);
  std::vector<double> values(static_cast<std::size_t>(job.replicates) * job.outputs);
  std::vector<std::uint64_t> labels = job.labels;
  labels.push_back(0);
  Matrix buffer(job.sampler->dim(), job.n);
  for (int i = 0; i < job.replicates; ++i) {
    run_one(job, labels, buffer, i, values.data() + static_cast<std::size_t>(i) * job.outputs);
  }
  return values;
}

std::vector<double> run_replicates_omp(const ReplicateJob& job, int workers) {
  validate(job);
  std::vector<double> values(static_cast<std::size_t>(job.replicates) * job.outputs);
#pragma omp parallel num_threads(workers > 0 ? workers : omp_get_max_threads())
  {
    std::vector<std::uint64_t> labels = job.labels;
    labels.push_back(0);
    Matrix buffer(job.sampler->dim(), job.n);
#pragma omp for schedule(dynamic, 16)
    for (int i = 0; i < job.replicates; ++i) {
      run_one(job, labels, buffer, i, values.data() + static_cast<std::size_t>(i) * job.outputs);
    }
  }
  return values;
}

std::vector<double> run_replicates(const ReplicateJob& job, const RunOptions& options) {
  if (options.serial) return run_replicates_serial(job);
  return run_replicates_omp(job, effective_workers(options));
}

int effective_workers(const RunOptions& options) {
  if (options.serial) return 1;
  return options.workers > 0 ? options.workers : omp_get_max_threads();
}

}  // namespace sphloc
