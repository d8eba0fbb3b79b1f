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

// Writes the synthetic 148-point weak-signal FvML sample shipped in
// data/cosmic_standin.csv. Usage: make_standin [output path]

#include <fstream>
#include <iostream>

#include "sphloc/io.h"
#include "sphloc/model.h"
#include "sphloc/sampling.h"

int main(int argc, char** argv) {
  using namespace sphloc;
  constexpr int kPoints = 148;
  constexpr double kTargetE1 = 0.2;
  constexpr std::uint64_t kSeed = 148;

  Vector location(3);
  location << 0.3, -0.5, 0.8;
  const UnitVector theta = UnitVector::Normalize(location);
  const double kappa = calibrate_kappa(3, RadialFunction::Fvml(), kTargetE1);
  RngStream rng = derive_stream(kSeed, {1});
  const Matrix points = sample_fvml(theta, kappa, kPoints, rng);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (argc > 1) {
    file.open(argv[1]);
    if (!file) {
      std::cerr << "make_standin: cannot write " << argv[1] << '\n';
      return 1;
    }
    out = &file;
  }
  *out << "# Synthetic stand-in: " << kPoints << " FvML draws on S^2, e1 = " << kTargetE1
       << " (kappa = " << kappa << "), seed " << kSeed << ".\n"
       << "# True location: " << theta[0] << "," << theta[1] << "," << theta[2] << "\n";
  write_sample_csv(points, *out);
  return 0;
}
