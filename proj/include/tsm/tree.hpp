// Copyright 2026 The tsm Authors.
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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tsm/tensor.hpp"

namespace tsm {

struct TreeNode {
  AxisSet axes;
  int parent = -1;
  int left = -1;
  int right = -1;

  bool is_leaf() const noexcept { return left < 0; }
};

// Binary dimension tree over the axes [0, order). Node 0 is the root. Every
// internal node splits into an ordered pair of children whose axes are
// contiguous and whose left child holds the lower axes, so that the row index
// of the node's unfolding is (left multi-index, right multi-index).
class DimensionTree {
 public:
  DimensionTree(std::size_t order, std::vector<TreeNode> nodes);

  std::size_t order() const noexcept { return order_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const TreeNode& node(std::size_t id) const { return nodes_.at(id); }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  static constexpr std::size_t root() noexcept { return 0; }

  bool is_root(std::size_t id) const noexcept { return id == 0; }
  bool is_leaf(std::size_t id) const { return nodes_.at(id).is_leaf(); }

  // Node id of the given axis set, or -1.
  int find(const AxisSet& axes) const;
  std::size_t leaf_of_axis(std::size_t axis) const { return leaf_of_axis_.at(axis); }

  // Pre-order (root, left subtree, right subtree).
  const std::vector<std::size_t>& depth_first() const noexcept { return preorder_; }
  // Children before parents: the reverse of depth_first().
  std::vector<std::size_t> leaves_to_root() const;

  // True for the chain whose internal nodes are {0,1}, {0,1,2}, ...
  bool is_linear() const;

  friend bool operator==(const DimensionTree& a, const DimensionTree& b) {
    if (a.order_ != b.order_ || a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
      const auto &x = a.nodes_[i], &y = b.nodes_[i];
      if (x.axes != y.axes || x.left != y.left || x.right != y.right) return false;
    }
    return true;
  }

 private:
  std::size_t order_;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> preorder_;
  std::vector<std::size_t> leaf_of_axis_;
};

// Split each node into its first ceil(k/2) axes and the rest.
DimensionTree balanced_tree(std::size_t order);

// Root {0..n-1} -> {0..n-2}, {n-1}; {0..k} -> {0..k-1}, {k}.
DimensionTree tt_tree(std::size_t order);

}  // namespace tsm
