#include "rnapars/rna_tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rnapars {

RnaTree::RnaTree(int leaf_lo, int leaf_hi, std::vector<std::pair<int, int>> internal_nodes)
    : leaf_lo_(leaf_lo), leaf_hi_(leaf_hi), nodes_(std::move(internal_nodes)) {
  if (leaf_lo_ >= leaf_hi_) throw std::invalid_argument("leafset must have size >= 2");
  std::sort(nodes_.begin(), nodes_.end());
  if (nodes_.empty() || nodes_.front() != root())
    throw std::invalid_argument("tree must contain the root pair (leaf_lo, leaf_hi)");
  std::vector<int> endpoints;
  endpoints.reserve(nodes_.size() * 2);
  for (const auto& [i, j] : nodes_) {
    if (i < leaf_lo_ || j > leaf_hi_ || i >= j)
      throw std::invalid_argument("internal node outside leafset");
    endpoints.push_back(i);
    endpoints.push_back(j);
  }
  std::sort(endpoints.begin(), endpoints.end());
  if (std::adjacent_find(endpoints.begin(), endpoints.end()) != endpoints.end())
    throw std::invalid_argument("internal nodes share an endpoint");
  std::vector<int> open;
  for (const auto& [i, j] : nodes_) {
    while (!open.empty() && open.back() < i) open.pop_back();
    if (!open.empty() && j > open.back())
      throw std::invalid_argument("crossing internal nodes");
    open.push_back(j);
  }
}

bool RnaTree::operator<(const RnaTree& other) const {
  if (leaf_lo_ != other.leaf_lo_) return leaf_lo_ < other.leaf_lo_;
  if (leaf_hi_ != other.leaf_hi_) return leaf_hi_ < other.leaf_hi_;
  return nodes_ < other.nodes_;
}

RnaTree to_tree(const SecondaryStructure& s) {
  std::vector<std::pair<int, int>> nodes = s.pairs();
  nodes.emplace_back(0, s.length() + 1);
  return RnaTree(0, s.length() + 1, std::move(nodes));
}

SecondaryStructure to_structure(const RnaTree& t) {
  if (t.leaf_lo() != 0)
    throw std::invalid_argument("leafset must be of the form [0, n+1]");
  std::vector<std::pair<int, int>> pairs(t.internal_nodes().begin() + 1,
                                         t.internal_nodes().end());
  return SecondaryStructure(t.leaf_hi() - 1, std::move(pairs));
}

std::vector<LeafInterval> descendant_leafsets(const RnaTree& t) {
  std::vector<LeafInterval> out;
  out.reserve(t.internal_nodes().size());
  for (const auto& [i, j] : t.internal_nodes()) out.push_back({i, j});
  return out;
}

std::vector<int> leaf_parent_index(const RnaTree& t) {
  // Sweep positions left to right keeping the stack of open nodes; the leaf
  // at position k hangs off the innermost node whose span covers k.
  const auto& nodes = t.internal_nodes();
  std::vector<int> parent(static_cast<std::size_t>(t.leaf_hi() - t.leaf_lo() + 1), -1);
  std::vector<int> stack;
  std::size_t next = 0;
  for (int k = t.leaf_lo(); k <= t.leaf_hi(); ++k) {
    if (next < nodes.size() && nodes[next].first == k) stack.push_back(static_cast<int>(next++));
    parent[static_cast<std::size_t>(k - t.leaf_lo())] = stack.back();
    if (nodes[static_cast<std::size_t>(stack.back())].second == k) stack.pop_back();
  }
  return parent;
}

std::vector<InternalLeafset> internal_leafsets(const RnaTree& t) {
  std::vector<InternalLeafset> out(t.internal_nodes().size());
  const std::vector<int> parent = leaf_parent_index(t);
  for (int k = t.leaf_lo(); k <= t.leaf_hi(); ++k)
    out[static_cast<std::size_t>(parent[static_cast<std::size_t>(k - t.leaf_lo())])]
        .members.push_back(k);
  return out;
}

bool dl_conflict(const LeafInterval& a, const LeafInterval& b) {
  const bool intersect = std::max(a.lo, b.lo) <= std::min(a.hi, b.hi);
  const bool a_in_b = b.lo <= a.lo && a.hi <= b.hi;
  const bool b_in_a = a.lo <= b.lo && b.hi <= a.hi;
  return intersect && !a_in_b && !b_in_a;
}

bool il_conflict(const InternalLeafset& a, const InternalLeafset& b) {
  // Merge the two sorted member lists; a shared element is a conflict, and
  // so are four or more alternating runs (that is exactly an interleaving
  // a < c < b < d). Three runs mean one set sits inside a single gap of the
  // other, which is fine.
  std::size_t ia = 0, ib = 0;
  int runs = 0;
  int last = -1;  // 0 = from a, 1 = from b
  while (ia < a.members.size() || ib < b.members.size()) {
    int source;
    if (ia == a.members.size()) {
      source = 1;
    } else if (ib == b.members.size()) {
      source = 0;
    } else if (a.members[ia] == b.members[ib]) {
      return true;
    } else {
      source = a.members[ia] < b.members[ib] ? 0 : 1;
    }
    if (source != last) {
      ++runs;
      last = source;
    }
    if (source == 0)
      ++ia;
    else
      ++ib;
  }
  return runs >= 4;
}

std::vector<LeafInterval> gaps(const InternalLeafset& i) {
  std::vector<LeafInterval> out;
  for (std::size_t k = 1; k < i.members.size(); ++k) {
    if (i.members[k] > i.members[k - 1] + 1)
      out.push_back({i.members[k - 1] + 1, i.members[k] - 1});
  }
  return out;
}

RnaTree tree_from_dls(std::vector<LeafInterval> dls, const LeafInterval& leafset) {
  std::sort(dls.begin(), dls.end());
  dls.erase(std::unique(dls.begin(), dls.end()), dls.end());
  if (std::find(dls.begin(), dls.end(), leafset) == dls.end())
    throw std::invalid_argument("DL collection must contain the full leafset");
  for (std::size_t a = 0; a < dls.size(); ++a) {
    for (std::size_t b = a + 1; b < dls.size(); ++b) {
      if (dl_conflict(dls[a], dls[b]))
        throw std::invalid_argument("conflicting DLs");
      if (dls[a].lo == dls[b].lo || dls[a].hi == dls[b].hi)
        throw std::invalid_argument("nested DLs share an endpoint");
    }
  }
  std::vector<std::pair<int, int>> nodes;
  nodes.reserve(dls.size());
  for (const auto& d : dls) nodes.emplace_back(d.lo, d.hi);
  return RnaTree(leafset.lo, leafset.hi, std::move(nodes));
}

RnaTree tree_from_ils(const StructuralPartition& partition) {
  if (partition.empty()) throw std::invalid_argument("empty partition");
  std::vector<int> all;
  int lo = partition.front().members.front();
  int hi = lo;
  for (const auto& set : partition) {
    if (set.members.size() < 2)
      throw std::invalid_argument("partition set of size < 2");
    for (std::size_t k = 0; k < set.members.size(); ++k) {
      if (k > 0 && set.members[k] <= set.members[k - 1])
        throw std::invalid_argument("IL members must be sorted and distinct");
      all.push_back(set.members[k]);
      lo = std::min(lo, set.members[k]);
      hi = std::max(hi, set.members[k]);
    }
  }
  std::sort(all.begin(), all.end());
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (all[k] != lo + static_cast<int>(k))
      throw std::invalid_argument("sets do not partition an interval");
  }
  for (std::size_t a = 0; a < partition.size(); ++a) {
    for (std::size_t b = a + 1; b < partition.size(); ++b) {
      if (il_conflict(partition[a], partition[b]))
        throw std::invalid_argument("conflicting ILs");
    }
  }
  // The node for each IL is its span; non-conflict makes spans laminar with
  // distinct endpoints, and each leaf's innermost covering span is exactly
  // the span of its own IL.
  std::vector<std::pair<int, int>> nodes;
  bool endpoints_together = false;
  for (const auto& set : partition) {
    nodes.emplace_back(set.min(), set.max());
    if (set.min() == lo && set.max() == hi) endpoints_together = true;
  }
  if (!endpoints_together)
    throw std::invalid_argument("interval endpoints must share a set");
  return RnaTree(lo, hi, std::move(nodes));
}

}  // namespace rnapars
