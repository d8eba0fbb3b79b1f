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

#ifndef SPHLOC_ERRORS_H_
#define SPHLOC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sphloc {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, out-of-domain arguments, unsupported options.
// The CLI maps these to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Numerical failure or a degenerate sample. The CLI maps these to exit
// code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

#define SPHLOC_DEFINE_ERROR(Name, Base) \
  class Name : public Base {            \
   public:                              \
    using Base::Base;                   \
  }

SPHLOC_DEFINE_ERROR(DomainError, UsageError);
SPHLOC_DEFINE_ERROR(UnsupportedDimension, UsageError);
SPHLOC_DEFINE_ERROR(UnsupportedRegime, UsageError);
SPHLOC_DEFINE_ERROR(TargetUnreachable, UsageError);
SPHLOC_DEFINE_ERROR(ParseError, UsageError);
SPHLOC_DEFINE_ERROR(NormalizationError, UsageError);
SPHLOC_DEFINE_ERROR(ConfigError, UsageError);

SPHLOC_DEFINE_ERROR(ZeroVector, NumericError);
SPHLOC_DEFINE_ERROR(NoConvergence, NumericError);
SPHLOC_DEFINE_ERROR(DegenerateMean, NumericError);
SPHLOC_DEFINE_ERROR(DegenerateDenominator, NumericError);

#undef SPHLOC_DEFINE_ERROR

}  // namespace sphloc

#endif  // SPHLOC_ERRORS_H_
