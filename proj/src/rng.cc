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

#include "qne/rng.h"

#include <cmath>
#include <numbers>

#include "qne/errors.h"

namespace qne {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t DeriveKey(std::uint64_t seed, const StreamPath& path) {
  std::uint64_t h = Mix64(seed + kGolden);
  h = Mix64(h ^ (path.replication + 0x632BE59BD9B4E019ULL));
  h = Mix64(h ^ (path.iteration + 0x8CB92BA72F3D8DD7ULL));
  h = Mix64(h ^ (path.role + 0xD6E8FEB86659FD93ULL));
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, StreamPath path)
    : seed_(seed), path_(path), key_(DeriveKey(seed, path)) {}

RngStream::result_type RngStream::operator()() {
  return Mix64(key_ + kGolden * (++counter_));
}

double RngStream::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::Uniform(double lo, double hi) {
  if (lo == hi) return lo;
  return lo + (hi - lo) * Uniform();
}

double RngStream::Normal() {
  // 1 - U lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::UniformInt(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("UniformInt: n must be positive");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t r;
  do {
    r = (*this)();
  } while (r >= limit);
  return r % n;
}

RngStream RngStream::Substream(std::uint64_t iteration,
                               std::uint64_t role) const {
  return RngStream(seed_, {path_.replication, iteration, role});
}

RngStream RngStream::ForReplication(std::uint64_t replication) const {
  return RngStream(seed_, {replication, 0, 0});
}

}  // namespace qne
