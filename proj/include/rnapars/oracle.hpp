#pragma once

#include <vector>

#include "rnapars/distances.hpp"
#include "rnapars/median.hpp"
#include "rnapars/phylogeny.hpp"
#include "rnapars/rna_tree.hpp"
#include "rnapars/smallpars.hpp"
#include "rnapars/structure.hpp"

// Brute-force reference implementations. These are correctness anchors for
// differential tests at small n, deliberately independent of the solvers'
// code paths; none of them cares about speed.
namespace rnapars::oracle {

// Every valid structure of length n under the hairpin gate, in lexicographic
// dot-bracket order.
std::vector<SecondaryStructure> enumerate_structures(int n, int theta = 0, int cap = 12);

// Every valid mapping (partial bijection preserving order and nesting)
// between the internal nodes of two trees.
std::vector<Mapping> enumerate_mappings(const RnaTree& a, const RnaTree& b,
                                        int max_internal = 8);

struct BruteMedian {
  double cost = 0;
  RnaTree tree;
};

// Exact optimum over every tree of the constrained class (ties: first in
// enumeration order).
BruteMedian brute_median(const std::vector<RnaTree>& trees, Metric metric,
                         Constraint constraint, int cap = 8);

enum class CandidatePolicy { AllTrees, LeafRestricted };

struct BruteSp {
  double cost = 0;
  std::vector<RnaTree> trees_by_node;
};

// Exhaustive optimum over candidate-labelled assignments of internal nodes.
BruteSp brute_sp(const Phylogeny& phy, const LeafTrees& leaf_trees, Metric metric,
                 CandidatePolicy policy, long long max_assignments = 5000000);

}  // namespace rnapars::oracle
