// Copyright 2026 The QNE Solver Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNE_RNG_H_
#define QNE_RNG_H_

#include <cstdint>
#include <limits>

namespace qne {

// Identifies a substream: which replication, which iteration of the outer
// loop, and which consumer ("role") inside that iteration.
struct StreamPath {
  std::uint64_t replication = 0;
  std::uint64_t iteration = 0;
  std::uint64_t role = 0;

  bool operator==(const StreamPath&) const = default;
};

// Counter-based random stream. The key is a hash of (seed, path); the n-th
// output is a bijective mix of key + n. Two streams with equal (seed, path)
// produce identical sequences regardless of thread scheduling, and distinct
// paths give statistically independent sequences.
//
// Satisfies UniformRandomBitGenerator, but the sampling helpers below are
// implemented here so draws are identical across standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, StreamPath path = {});

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on [lo, hi]; returns lo when lo == hi.
  double Uniform(double lo, double hi);
  // Standard normal (Box-Muller, one value per call).
  double Normal();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);

  // Same seed and replication, new (iteration, role).
  RngStream Substream(std::uint64_t iteration, std::uint64_t role) const;
  // Fresh stream for a replication index (iteration = role = 0).
  RngStream ForReplication(std::uint64_t replication) const;

  std::uint64_t seed() const { return seed_; }
  const StreamPath& path() const { return path_; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t seed_;
  StreamPath path_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qne

#endif  // QNE_RNG_H_
