#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string_view>
#include <vector>

#include "rnapars/distances.hpp"
#include "rnapars/rna_tree.hpp"

namespace rnapars {

enum class Constraint { NC, DLC, ILC, BPC };

Constraint constraint_from_string(std::string_view name);
std::string_view to_string(Constraint c);

struct WeightedInterval {
  int lo = 0;
  int hi = 0;
  double weight = 0;
};

struct MwisResult {
  double total_weight = 0;
  std::vector<std::size_t> chosen;  // indices into the input, ascending
};

// Maximum-weight set of pairwise disjoint intervals. Negative-weight
// intervals are never chosen; on ties the smaller set wins (an interval is
// only taken when it strictly improves the total).
MwisResult mwis_intervals(const std::vector<WeightedInterval>& items);

// Per-IL median cost: #trees not displaying I minus #trees displaying I.
long long cost_il(const InternalLeafset& i, const std::vector<RnaTree>& trees);

// Sum of distances from a candidate tree to every input tree.
double mcost(const RnaTree& candidate, const std::vector<RnaTree>& trees, Metric metric);

// Interval dynamic program for the IL/RF median problems. The cost of the
// best structural partition of [i, j] is computed bottom-up; with the ILC
// constraint every chosen IL comes from an input tree, without it a fresh IL
// may be formed by paying p and carving optimal sub-intervals out of it via a
// maximum-weight independent set of intervals.
class MedianDp {
 public:
  enum class Objective { IlIlc, IlNc, RfIlc };

  MedianDp(const std::vector<RnaTree>& trees, Objective objective);
  ~MedianDp();
  MedianDp(const MedianDp&) = delete;
  MedianDp& operator=(const MedianDp&) = delete;

  static constexpr long long kInfinity = std::numeric_limits<long long>::max() / 4;

  // Best partition cost of [i, j]: +infinity for i == j or infeasible cells,
  // 0 for j < i.
  long long cost_at(int i, int j) const;
  // Unconstrained-objective split costs (input IL vs novel IL); only
  // meaningful for Objective::IlNc.
  long long c1_at(int i, int j) const;
  long long c2_at(int i, int j) const;

  long long optimum() const;

  // Partition of [i, j] realizing cost_at(i, j); throws on infeasible cells.
  StructuralPartition backtrace(int i, int j) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct MedianResult {
  RnaTree tree;
  long long mcost = 0;           // true Mcost under the solver's metric
  long long partition_cost = 0;  // optimum of the underlying DP
};

// Majority-rule consensus: keeps exactly the DLs displayed by strictly more
// than half of the inputs; optimal for the unconstrained RF median.
RnaTree rf_nc_median(const std::vector<RnaTree>& trees);

MedianResult il_ilc_median(const std::vector<RnaTree>& trees);
MedianResult il_nc_median(const std::vector<RnaTree>& trees);
MedianResult rf_ilc_median(const std::vector<RnaTree>& trees);

}  // namespace rnapars
