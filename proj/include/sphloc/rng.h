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

// Counter-based random streams. A stream is fully determined by
// (master_seed, stream_id), so work can be split across threads without the
// results depending on scheduling.

#ifndef SPHLOC_RNG_H_
#define SPHLOC_RNG_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace sphloc {

inline constexpr std::uint64_t kDefaultSeed = 20160309;

// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Keyed by master_seed; the counter is (block index, stream_id). Satisfies
// UniformRandomBitGenerator. Not safe for concurrent use.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  // Standard normal by Box-Muller; the second variate of each pair is kept.
  double normal();

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Stream id obtained by folding the labels through a splitmix64 finalizer.
RngStream derive_stream(std::uint64_t master_seed, std::span<const std::uint64_t> labels);
RngStream derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels);

}  // namespace sphloc

#endif  // SPHLOC_RNG_H_
