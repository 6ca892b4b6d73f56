#pragma once

#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "rnapars/rna_tree.hpp"
#include "rnapars/structure.hpp"

namespace rnapars {

enum class Metric { BP, RF, IL, RE };

Metric metric_from_string(std::string_view name);
std::string_view to_string(Metric m);

// |P1 delta P2| over two structures of equal length.
long long bp_distance(const SecondaryStructure& a, const SecondaryStructure& b);

// Symmetric difference of the DL collections; equals bp_distance of the
// underlying structures.
long long rf_distance(const RnaTree& a, const RnaTree& b);

// Symmetric difference of the IL collections.
long long il_distance(const RnaTree& a, const RnaTree& b);

using NodeId = std::pair<int, int>;
using MappedPair = std::pair<NodeId, NodeId>;

// Partial bijection between internal nodes of two trees that preserves the
// left-right order and the nesting of nodes.
using Mapping = std::vector<MappedPair>;

// Nonnegative cost of matching two internal nodes; zero on identical pairs.
using CostFunction = std::function<double(const NodeId&, const NodeId&)>;

// 0 on identical pairs, +infinity otherwise: tree edit under this cost equals
// the BP distance.
CostFunction exact_match_cost();

// |i1-i2| + |j1-j2|: the relaxed cost allowing imperfectly aligned pairs.
CostFunction endpoint_shift_cost();

struct TreeEdit {
  double cost = 0;
  Mapping mapping;
};

// Minimum cost over valid mappings: sum of match costs plus one per unmapped
// internal node on either side. Both trees must share a leafset.
TreeEdit te_distance(const RnaTree& a, const RnaTree& b, const CostFunction& cost);

// Tree edit distance under the endpoint shift cost.
double re_distance(const RnaTree& a, const RnaTree& b);

// Evaluates the mapping cost formula directly (used by oracles and tests).
double mapping_cost(const Mapping& m, int num_internal_a, int num_internal_b,
                    const CostFunction& cost);

// Dispatch by metric; BP is evaluated as RF on the trees.
double tree_distance(const RnaTree& a, const RnaTree& b, Metric metric);

}  // namespace rnapars
