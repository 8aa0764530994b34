#include "mnpf/types.hpp"

#include <stdexcept>

namespace mnpf {

int argmax_lowest(const Vec& v) {
  int best = 0;
  for (int k = 1; k < v.size(); ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

JointActionSpace::JointActionSpace(std::vector<int> sizes)
    : sizes_(std::move(sizes)) {
  strides_.resize(sizes_.size());
  size_ = 1;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] < 1) throw std::invalid_argument("action count must be >= 1");
    strides_[i] = size_;
    size_ *= sizes_[i];
  }
}

int JointActionSpace::encode(const std::vector<int>& actions) const {
  int joint = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    joint += actions[i] * strides_[i];
  }
  return joint;
}

std::vector<int> JointActionSpace::decode(int joint) const {
  std::vector<int> actions(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    actions[i] = digit(joint, static_cast<int>(i));
  }
  return actions;
}

}  // namespace mnpf
