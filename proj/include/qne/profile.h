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

#ifndef QNE_PROFILE_H_
#define QNE_PROFILE_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qne {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A strategy profile x = (x_1, ..., x_N): one concatenated vector plus the
// block boundaries of each player's strategy.
class Profile {
 public:
  Profile() = default;
  // offsets must start at 0, be strictly increasing, and end at data.size().
  Profile(Vector data, std::vector<int> offsets);

  // Zero profile with the given per-player dimensions.
  static Profile Zeros(std::span<const int> dims);

  int num_players() const { return static_cast<int>(offsets_.size()) - 1; }
  int size() const { return static_cast<int>(data_.size()); }
  int block_size(int i) const { return offsets_[i + 1] - offsets_[i]; }
  int offset(int i) const { return offsets_[i]; }
  const std::vector<int>& offsets() const { return offsets_; }

  const Vector& data() const { return data_; }
  Vector& data() { return data_; }

  auto block(int i) { return data_.segment(offsets_[i], block_size(i)); }
  auto block(int i) const { return data_.segment(offsets_[i], block_size(i)); }

  // Same layout, different values.
  Profile WithData(Vector data) const;
  bool SameLayout(const Profile& other) const {
    return offsets_ == other.offsets_;
  }

  std::vector<Vector> SplitBlocks() const;

  bool operator==(const Profile& other) const {
    return offsets_ == other.offsets_ && data_ == other.data_;
  }

 private:
  Vector data_;
  std::vector<int> offsets_ = {0};
};

// Concatenates per-player blocks into a profile. Throws InvalidArgument on an
// empty list or an empty block.
Profile ConcatBlocks(const std::vector<Vector>& blocks);

}  // namespace qne

#endif  // QNE_PROFILE_H_
