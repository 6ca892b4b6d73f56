#pragma once

#include <map>
#include <string>
#include <vector>

#include "rnapars/distances.hpp"
#include "rnapars/median.hpp"
#include "rnapars/phylogeny.hpp"
#include "rnapars/rna_tree.hpp"

namespace rnapars {

// Total assignment of RNA trees to phylogeny nodes (indexed like the
// phylogeny); leaves hold their input trees.
struct Assignment {
  std::vector<RnaTree> trees;
  double sp_cost = 0;
};

using LeafTrees = std::map<std::string, RnaTree>;

// Sum of distances over the phylogeny's edges.
double sp_cost(const Phylogeny& phy, const std::vector<RnaTree>& trees_by_node,
               Metric metric);

// Exact unconstrained RF small parsimony. Every DL occurring in a leaf tree
// is treated as a binary character and propagated Fitch-Hartigan style: the
// bottom-up pass keeps the majority state among decided children, the
// top-down pass resolves remaining choices, preferring absence at the root.
// The selected DLs are conflict-free by construction. When check_lemmas is
// set, that conflict-freeness is asserted pairwise at every node.
Assignment rf_nc_sp(const Phylogeny& phy, const LeafTrees& leaf_trees,
                    bool check_lemmas = false);

// Exact small parsimony restricted to assignments drawn from the distinct
// leaf trees: Sankoff dynamic programming over the candidate states with the
// pairwise distance matrix as transition cost. Ties take the lowest
// candidate index (candidates ordered by first appearance among leaves).
Assignment leaf_restricted_sp(const Phylogeny& phy, const LeafTrees& leaf_trees,
                              Metric metric);

// Iterative median improvement: every internal node is revisited in
// post-order and re-assigned the median of its neighbors' trees whenever
// that strictly lowers the cost. Supported for RF/IL with NC or ILC medians.
Assignment median_heuristic_sp(const Phylogeny& phy, const LeafTrees& leaf_trees,
                               Metric metric, Constraint constraint,
                               const Assignment& init, int max_rounds = 50,
                               std::vector<double>* cost_history = nullptr);

}  // namespace rnapars
