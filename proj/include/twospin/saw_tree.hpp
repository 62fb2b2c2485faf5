#pragma once

// Self-avoiding walk trees, truncated at a depth limit.
//
// Every node copies a graph vertex. A walk that returns to a vertex already
// on it produces a fixed leaf: + when the edge closing the cycle is larger
// than the edge by which the walk first left that vertex, - otherwise. Copies
// of conditioned vertices are fixed leaves carrying the conditioned spin.
//
// Nodes live in one flat array. A node's children are contiguous and always
// stored after it, so iterating the array backwards visits children before
// parents.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "twospin/error.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

// Partial assignment sigma_Lambda; an empty map means unconditioned.
using Condition = std::map<Vertex, Spin>;

// Edge partial order: (i,j) > (k,l) iff the edges share a vertex and
// i + j > k + l.
inline bool edge_greater(Edge e1, Edge e2) {
  const bool share = e1.u == e2.u || e1.u == e2.v || e1.v == e2.u || e1.v == e2.v;
  if (!share) {
    throw invalid_argument("edges (" + std::to_string(e1.u) + "," + std::to_string(e1.v) +
                           ") and (" + std::to_string(e2.u) + "," + std::to_string(e2.v) +
                           ") share no vertex; the edge order does not compare them");
  }
  return e1.u + e1.v > e2.u + e2.v;
}

struct SawNode {
  Vertex origin = 0;
  int depth = 0;
  std::optional<Spin> fixed;          // empty for free nodes
  std::uint32_t parent_edge = 0;      // edge index to the parent; unused at the root
  std::uint32_t first_child = 0;
  std::uint32_t child_count = 0;

  bool is_free() const noexcept { return !fixed.has_value(); }
};

class SawTree {
 public:
  SawTree(Vertex root_vertex, int depth_limit, std::vector<SawNode> nodes)
      : root_vertex_(root_vertex), depth_limit_(depth_limit), nodes_(std::move(nodes)) {}

  Vertex root_vertex() const noexcept { return root_vertex_; }
  int depth_limit() const noexcept { return depth_limit_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  const SawNode& root() const noexcept { return nodes_.front(); }
  std::span<const SawNode> nodes() const noexcept { return nodes_; }

  std::span<const SawNode> children(const SawNode& node) const noexcept {
    return std::span<const SawNode>(nodes_).subspan(node.first_child, node.child_count);
  }

  // A free node cut off by the depth limit.
  bool is_frontier(const SawNode& node) const noexcept {
    return node.is_free() && node.depth == depth_limit_;
  }

  // Number of nodes at depth exactly l.
  std::size_t frontier_count(int l) const {
    if (l < 0 || l > depth_limit_) {
      throw invalid_argument("level " + std::to_string(l) + " outside 0.." +
                             std::to_string(depth_limit_));
    }
    std::size_t count = 0;
    for (const auto& n : nodes_) count += n.depth == l ? 1 : 0;
    return count;
  }

  // One node per line in depth-first order, indented two spaces per level:
  //   <origin> depth=<k> <free|frontier|fixed+|fixed->
  void dump(std::ostream& os) const {
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
      const auto& node = nodes_[stack.back()];
      stack.pop_back();
      os << std::string(2 * static_cast<std::size_t>(node.depth), ' ') << node.origin
         << " depth=" << node.depth << ' ';
      if (node.fixed) {
        os << "fixed" << to_char(*node.fixed);
      } else {
        os << (is_frontier(node) ? "frontier" : "free");
      }
      os << '\n';
      for (std::uint32_t k = node.child_count; k > 0; --k) {
        stack.push_back(node.first_child + k - 1);
      }
    }
  }

  std::string dump() const {
    std::ostringstream os;
    dump(os);
    return os.str();
  }

 private:
  Vertex root_vertex_;
  int depth_limit_;
  std::vector<SawNode> nodes_;
};

inline constexpr std::size_t kDefaultMaxSawNodes = std::size_t{1} << 27;

// Builds T_saw(root) truncated at depth_limit under `cond`. Children appear in
// ascending label order. Throws too_large_error past max_nodes.
inline SawTree build_saw_tree(const SpinSystem& sys, Vertex root, int depth_limit,
                              const Condition& cond = {},
                              std::size_t max_nodes = kDefaultMaxSawNodes) {
  const Graph& g = sys.graph();
  g.require(root);
  if (depth_limit < 0) throw invalid_argument("depth limit must be non-negative");

  const std::size_t n = g.vertex_count();
  // 0 = unconditioned, otherwise the conditioned spin as +1 / -1.
  std::vector<std::int8_t> conditioned(n, 0);
  for (const auto& [v, s] : cond) {
    if (!g.contains(v)) {
      throw invalid_argument("condition references unknown vertex " + std::to_string(v));
    }
    conditioned[v - 1] = static_cast<std::int8_t>(s);
  }

  std::vector<SawNode> nodes;
  nodes.push_back({root, 0, std::nullopt, 0, 0, 0});
  if (conditioned[root - 1] != 0) {
    nodes.front().fixed = static_cast<Spin>(conditioned[root - 1]);
    return SawTree(root, depth_limit, std::move(nodes));
  }
  if (depth_limit == 0) return SawTree(root, depth_limit, std::move(nodes));

  // Walk state: which vertices are on the current walk, and for each of them
  // the vertex the walk moved to next (the edge that started any cycle
  // closing back at it).
  std::vector<char> on_walk(n, 0);
  std::vector<Vertex> next_on_walk(n, 0);

  struct Frame {
    std::uint32_t node;
    std::uint32_t cursor;
  };
  std::vector<Frame> stack;

  auto expand = [&](std::uint32_t index) {
    const SawNode parent = nodes[index];
    const Vertex x = parent.origin;
    const auto first = static_cast<std::uint32_t>(nodes.size());
    std::uint32_t count = 0;
    for (const auto& nb : g.neighbors(x)) {
      const Vertex y = nb.vertex;
      if (index != 0 && nb.edge == parent.parent_edge) continue;
      SawNode child{y, parent.depth + 1, std::nullopt, nb.edge, 0, 0};
      if (conditioned[y - 1] != 0) {
        child.fixed = static_cast<Spin>(conditioned[y - 1]);
      } else if (on_walk[y - 1]) {
        const bool closes_high = edge_greater({x, y}, {y, next_on_walk[y - 1]});
        child.fixed = closes_high ? Spin::plus : Spin::minus;
      }
      nodes.push_back(child);
      ++count;
    }
    if (nodes.size() > max_nodes) {
      throw too_large_error("self-avoiding tree exceeds " + std::to_string(max_nodes) +
                            " nodes");
    }
    nodes[index].first_child = first;
    nodes[index].child_count = count;
  };

  on_walk[root - 1] = 1;
  expand(0);
  stack.push_back({0, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    const SawNode& node = nodes[top.node];
    if (top.cursor == node.child_count) {
      on_walk[node.origin - 1] = 0;
      stack.pop_back();
      continue;
    }
    const std::uint32_t child_index = node.first_child + top.cursor++;
    const SawNode& child = nodes[child_index];
    if (child.fixed || child.depth == depth_limit) continue;
    next_on_walk[node.origin - 1] = child.origin;
    on_walk[child.origin - 1] = 1;
    expand(child_index);
    stack.push_back({child_index, 0});
  }
  return SawTree(root, depth_limit, std::move(nodes));
}

}  // namespace twospin
