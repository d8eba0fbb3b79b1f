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

// Kolmogorov-Smirnov distances used by the distributional checks.

#ifndef SPHLOC_KS_H_
#define SPHLOC_KS_H_

#include <functional>
#include <vector>

namespace sphloc {

// sup |F_a - F_b| over the pooled sample. Inputs are copied and sorted.
double ks_distance(std::vector<double> a, std::vector<double> b);

// sup |F_n - F| against a continuous CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

// Asymptotic P(D > d) for effective sample size n_eff (n for one sample,
// n m / (n + m) for two), with Stephens' small-sample correction.
double ks_p_value(double distance, double n_eff);

}  // namespace sphloc

#endif  // SPHLOC_KS_H_
