#pragma once

#include <compare>
#include <utility>
#include <vector>

#include "rnapars/structure.hpp"

namespace rnapars {

// A descendant leafset (DL): the contiguous interval of leaves below an
// internal node, equivalently the span of a base pair.
struct LeafInterval {
  int lo = 0;
  int hi = 0;
  auto operator<=>(const LeafInterval&) const = default;
  int size() const { return hi - lo + 1; }
  bool contains(int x) const { return lo <= x && x <= hi; }
};

// An internal leafset (IL): the set of leaf children of an internal node.
// Members are sorted and distinct; a valid IL has at least two members.
struct InternalLeafset {
  std::vector<int> members;
  auto operator<=>(const InternalLeafset&) const = default;
  int min() const { return members.front(); }
  int max() const { return members.back(); }
};

// A partition of a leaf interval into pairwise non-conflicting ILs of size
// >= 2; in bijection with RNA trees on that interval.
using StructuralPartition = std::vector<InternalLeafset>;

// Ordered rooted tree on the leafset [leaf_lo, leaf_hi] whose internal nodes
// are pairs (i, j); the leftmost/rightmost children of node (i, j) are the
// leaves i and j, so the whole tree is determined by its pair set. Nodes are
// kept sorted by opening position, which is a preorder traversal.
class RnaTree {
 public:
  RnaTree(int leaf_lo, int leaf_hi, std::vector<std::pair<int, int>> internal_nodes);

  int leaf_lo() const { return leaf_lo_; }
  int leaf_hi() const { return leaf_hi_; }
  std::pair<int, int> root() const { return {leaf_lo_, leaf_hi_}; }
  const std::vector<std::pair<int, int>>& internal_nodes() const { return nodes_; }
  int num_internal() const { return static_cast<int>(nodes_.size()); }
  int num_base_pairs() const { return num_internal() - 1; }
  int num_leaves() const { return leaf_hi_ - leaf_lo_ + 1; }

  bool operator==(const RnaTree&) const = default;
  bool operator<(const RnaTree& other) const;

 private:
  int leaf_lo_ = 0;
  int leaf_hi_ = 0;
  std::vector<std::pair<int, int>> nodes_;  // sorted, contains (leaf_lo, leaf_hi)
};

// Structure <-> tree conversions (the tree gains the fictive pair (0, n+1)).
RnaTree to_tree(const SecondaryStructure& s);
SecondaryStructure to_structure(const RnaTree& t);

// One DL per internal node, in node order.
std::vector<LeafInterval> descendant_leafsets(const RnaTree& t);

// One IL per internal node, in node order; always a structural partition of
// the leafset.
std::vector<InternalLeafset> internal_leafsets(const RnaTree& t);

// For every leaf position, the index (into internal_nodes()) of the node
// whose IL contains it, i.e. its parent.
std::vector<int> leaf_parent_index(const RnaTree& t);

// Two DLs conflict when they overlap without containment.
bool dl_conflict(const LeafInterval& a, const LeafInterval& b);

// Two ILs conflict when they intersect or interleave.
bool il_conflict(const InternalLeafset& a, const InternalLeafset& b);

// Maximal intervals between consecutive members of an IL, left to right.
std::vector<LeafInterval> gaps(const InternalLeafset& i);

// Builds the tree whose DL collection is exactly `dls`. The collection must
// contain `leafset`, be pairwise non-conflicting, and have pairwise distinct
// endpoints (two nested intervals sharing an endpoint cannot both be node
// spans of one RNA tree).
RnaTree tree_from_dls(std::vector<LeafInterval> dls, const LeafInterval& leafset);

// Builds the unique tree whose IL collection is exactly `partition`, which
// must be a structural partition of some interval [k, l] with k and l in the
// same set.
RnaTree tree_from_ils(const StructuralPartition& partition);

}  // namespace rnapars
