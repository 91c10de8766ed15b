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

#include "tsm/tree.hpp"

#include <functional>

#include "tsm/error.hpp"

namespace tsm {

DimensionTree::DimensionTree(std::size_t order, std::vector<TreeNode> nodes)
    : order_(order), nodes_(std::move(nodes)) {
  if (order_ < 2) fail(ErrorCode::InvalidArgument, "dimension tree needs order >= 2");
  if (nodes_.empty() || nodes_[0].axes != AxisSet::range(0, order_))
    fail(ErrorCode::InvalidArgument, "node 0 must be the root [0, order)");
  if (nodes_[0].parent != -1) fail(ErrorCode::InvalidArgument, "root has a parent");

  const auto count = static_cast<int>(nodes_.size());
  leaf_of_axis_.assign(order_, nodes_.size());
  std::vector<int> seen(nodes_.size(), 0);
  std::function<void(int)> visit = [&](int id) {
    if (id < 0 || id >= count) fail(ErrorCode::InvalidArgument, "child index out of range");
    if (seen[static_cast<std::size_t>(id)]++)
      fail(ErrorCode::InvalidArgument, "node reached twice; not a tree");
    preorder_.push_back(static_cast<std::size_t>(id));
    const TreeNode& nd = nodes_[static_cast<std::size_t>(id)];
    if (nd.axes.empty()) fail(ErrorCode::InvalidArgument, "node with empty axis set");
    if ((nd.left < 0) != (nd.right < 0))
      fail(ErrorCode::InvalidArgument, "internal node must have exactly two children");
    if (nd.is_leaf()) {
      if (nd.axes.size() != 1)
        fail(ErrorCode::InvalidArgument, "leaf " + nd.axes.to_string() + " is not a singleton");
      leaf_of_axis_[nd.axes.front()] = static_cast<std::size_t>(id);
      return;
    }
    for (int c : {nd.left, nd.right}) {
      if (c < 0 || c >= count) fail(ErrorCode::InvalidArgument, "child index out of range");
      if (nodes_[static_cast<std::size_t>(c)].parent != id)
        fail(ErrorCode::InvalidArgument, "child parent link mismatch");
    }
    const AxisSet& l = nodes_[static_cast<std::size_t>(nd.left)].axes;
    const AxisSet& r = nodes_[static_cast<std::size_t>(nd.right)].axes;
    if (l.empty() || r.empty() || l.merged(r) != nd.axes)
      fail(ErrorCode::InvalidArgument,
           "children of " + nd.axes.to_string() + " do not partition it");
    if (l.back() >= r.front() || l.back() - l.front() + 1 != l.size() ||
        r.back() - r.front() + 1 != r.size())
      fail(ErrorCode::InvalidArgument, "children of " + nd.axes.to_string() +
                                           " must be contiguous, lower axes on the left");
    visit(nd.left);
    visit(nd.right);
  };
  visit(0);
  if (preorder_.size() != nodes_.size())
    fail(ErrorCode::InvalidArgument, "tree has unreachable nodes");
}

int DimensionTree::find(const AxisSet& axes) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].axes == axes) return static_cast<int>(i);
  return -1;
}

std::vector<std::size_t> DimensionTree::leaves_to_root() const {
  return {preorder_.rbegin(), preorder_.rend()};
}

bool DimensionTree::is_linear() const {
  for (const auto& nd : nodes_) {
    if (nd.is_leaf()) continue;
    const auto& r = nodes_[static_cast<std::size_t>(nd.right)];
    if (!r.is_leaf() || r.axes.front() != nd.axes.back()) return false;
  }
  return true;
}

namespace {

int add_node(std::vector<TreeNode>& nodes, AxisSet axes, int parent) {
  nodes.push_back(TreeNode{std::move(axes), parent, -1, -1});
  return static_cast<int>(nodes.size() - 1);
}

template <class SplitFn>
DimensionTree build(std::size_t order, SplitFn split) {
  if (order < 2) fail(ErrorCode::InvalidArgument, "dimension tree needs order >= 2");
  std::vector<TreeNode> nodes;
  std::function<void(int, std::size_t, std::size_t)> grow = [&](int id, std::size_t lo,
                                                                std::size_t hi) {
    if (hi - lo == 1) return;
    const std::size_t mid = split(lo, hi);
    const int l = add_node(nodes, AxisSet::range(lo, mid), id);
    nodes[static_cast<std::size_t>(id)].left = l;
    grow(l, lo, mid);
    const int r = add_node(nodes, AxisSet::range(mid, hi), id);
    nodes[static_cast<std::size_t>(id)].right = r;
    grow(r, mid, hi);
  };
  add_node(nodes, AxisSet::range(0, order), -1);
  grow(0, 0, order);
  return DimensionTree(order, std::move(nodes));
}

}  // namespace

DimensionTree balanced_tree(std::size_t order) {
  return build(order, [](std::size_t lo, std::size_t hi) { return lo + (hi - lo + 1) / 2; });
}

DimensionTree tt_tree(std::size_t order) {
  return build(order, [](std::size_t, std::size_t hi) { return hi - 1; });
}

}  // namespace tsm
