#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace mnpf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CountVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using CountMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Every argmax selection in the library is deterministic so that runs and
// regression tests are reproducible. Ties go to the lowest action index.
enum class TieRule { lowest_index };

// Lowest-index argmax of a vector.
int argmax_lowest(const Vec& v);

/// Mixed-radix index over joint actions. Player 0 is the fastest-varying
/// digit: joint = a_0 + |A_0| * (a_1 + |A_1| * (a_2 + ...)).
class JointActionSpace {
 public:
  JointActionSpace() = default;
  explicit JointActionSpace(std::vector<int> sizes);

  int size() const { return size_; }
  int num_players() const { return static_cast<int>(sizes_.size()); }
  int action_count(int player) const { return sizes_[player]; }

  // Action of `player` inside joint index `joint`.
  int digit(int joint, int player) const {
    return (joint / strides_[player]) % sizes_[player];
  }

  int encode(const std::vector<int>& actions) const;
  std::vector<int> decode(int joint) const;

  // Joint index with `player`'s digit replaced by `action`.
  int with_digit(int joint, int player, int action) const {
    return joint + (action - digit(joint, player)) * strides_[player];
  }

 private:
  std::vector<int> sizes_;
  std::vector<int> strides_;
  int size_ = 0;
};

}  // namespace mnpf
