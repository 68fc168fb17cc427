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

#include "qne/profile.h"

#include <string>
#include <utility>

#include "qne/errors.h"

namespace qne {

Profile::Profile(Vector data, std::vector<int> offsets)
    : data_(std::move(data)), offsets_(std::move(offsets)) {
  if (offsets_.size() < 2 || offsets_.front() != 0) {
    throw InvalidArgument("Profile: offsets must start at 0 with N >= 1");
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) {
    if (offsets_[i] <= offsets_[i - 1]) {
      throw InvalidArgument("Profile: offsets must be strictly increasing");
    }
  }
  if (offsets_.back() != data_.size()) {
    throw InvalidArgument("Profile: data length " +
                          std::to_string(data_.size()) +
                          " does not match offsets[N] = " +
                          std::to_string(offsets_.back()));
  }
}

Profile Profile::Zeros(std::span<const int> dims) {
  std::vector<int> offsets(dims.size() + 1, 0);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    offsets[i + 1] = offsets[i] + dims[i];
  }
  return Profile(Vector::Zero(offsets.back()), std::move(offsets));
}

Profile Profile::WithData(Vector data) const {
  return Profile(std::move(data), offsets_);
}

std::vector<Vector> Profile::SplitBlocks() const {
  std::vector<Vector> blocks;
  blocks.reserve(num_players());
  for (int i = 0; i < num_players(); ++i) blocks.emplace_back(block(i));
  return blocks;
}

Profile ConcatBlocks(const std::vector<Vector>& blocks) {
  if (blocks.empty()) throw InvalidArgument("ConcatBlocks: no blocks");
  std::vector<int> offsets(blocks.size() + 1, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].size() == 0) {
      throw InvalidArgument("ConcatBlocks: block " + std::to_string(i) +
                            " is empty");
    }
    offsets[i + 1] = offsets[i] + static_cast<int>(blocks[i].size());
  }
  Vector data(offsets.back());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    data.segment(offsets[i], blocks[i].size()) = blocks[i];
  }
  return Profile(std::move(data), std::move(offsets));
}

}  // namespace qne
