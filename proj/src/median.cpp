#include "rnapars/median.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "rnapars/errors.hpp"

namespace rnapars {

Constraint constraint_from_string(std::string_view name) {
  if (name == "nc") return Constraint::NC;
  if (name == "dlc") return Constraint::DLC;
  if (name == "ilc") return Constraint::ILC;
  if (name == "bpc") return Constraint::BPC;
  throw InputError("unknown constraint: " + std::string(name));
}

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::NC: return "nc";
    case Constraint::DLC: return "dlc";
    case Constraint::ILC: return "ilc";
    case Constraint::BPC: return "bpc";
  }
  return "?";
}

MwisResult mwis_intervals(const std::vector<WeightedInterval>& items) {
  const std::size_t m = items.size();
  std::vector<std::size_t> order(m);
  for (std::size_t k = 0; k < m; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (items[a].hi != items[b].hi) return items[a].hi < items[b].hi;
    if (items[a].lo != items[b].lo) return items[a].lo < items[b].lo;
    return a < b;
  });
  // pred[t]: number of sorted intervals ending strictly left of interval t.
  std::vector<int> ends(m);
  for (std::size_t k = 0; k < m; ++k) ends[k] = items[order[k]].hi;
  std::vector<std::size_t> pred(m);
  for (std::size_t k = 0; k < m; ++k) {
    pred[k] = static_cast<std::size_t>(
        std::lower_bound(ends.begin(), ends.begin() + static_cast<long>(k),
                         items[order[k]].lo) -
        ends.begin());
  }
  std::vector<double> best(m + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double with = items[order[k]].weight + best[pred[k]];
    best[k + 1] = std::max(best[k], with);
  }
  MwisResult result;
  result.total_weight = best[m];
  std::size_t k = m;
  while (k > 0) {
    if (best[k] == best[k - 1]) {
      --k;
    } else {
      result.chosen.push_back(order[k - 1]);
      k = pred[k - 1];
    }
  }
  std::sort(result.chosen.begin(), result.chosen.end());
  return result;
}

long long cost_il(const InternalLeafset& i, const std::vector<RnaTree>& trees) {
  long long displaying = 0;
  for (const RnaTree& t : trees) {
    const std::vector<InternalLeafset> ils = internal_leafsets(t);
    if (std::find(ils.begin(), ils.end(), i) != ils.end()) ++displaying;
  }
  return static_cast<long long>(trees.size()) - 2 * displaying;
}

double mcost(const RnaTree& candidate, const std::vector<RnaTree>& trees, Metric metric) {
  double total = 0;
  for (const RnaTree& t : trees) total += tree_distance(candidate, t, metric);
  return total;
}

namespace {

void require_common_leafset(const std::vector<RnaTree>& trees) {
  if (trees.empty()) throw std::invalid_argument("need at least one input tree");
  for (const RnaTree& t : trees) {
    if (t.leaf_lo() != trees.front().leaf_lo() || t.leaf_hi() != trees.front().leaf_hi())
      throw std::invalid_argument("input trees must share a leafset");
  }
}

}  // namespace

struct MedianDp::Impl {
  Objective objective;
  int lo = 0, hi = 0, span = 0;
  int p = 0;
  bool unconstrained = false;

  std::vector<std::vector<InternalLeafset>> ils;  // per tree, per node
  std::vector<std::vector<int>> parent_of;        // per tree, leaf -> node index
  std::vector<std::vector<long long>> node_cost;  // per tree, per node

  std::vector<long long> cost, c1, c2, wis;
  // Backtrace choices: >= 0 selects the input tree whose IL containing i was
  // used; kNovel + k selects the fresh-IL split at k; kNone marks infinity.
  static constexpr int kNone = -1;
  static constexpr int kNovelBase = 1 << 20;
  std::vector<int> choice;

  std::size_t at(int i, int j) const {
    return static_cast<std::size_t>(i - lo) * static_cast<std::size_t>(span) +
           static_cast<std::size_t>(j - lo);
  }
  long long table(const std::vector<long long>& t, int i, int j) const {
    if (j < i) return 0;
    return t[at(i, j)];
  }

  explicit Impl(const std::vector<RnaTree>& trees, Objective obj) : objective(obj) {
    require_common_leafset(trees);
    lo = trees.front().leaf_lo();
    hi = trees.front().leaf_hi();
    span = hi - lo + 1;
    p = static_cast<int>(trees.size());
    unconstrained = objective == Objective::IlNc;

    ils.reserve(trees.size());
    parent_of.reserve(trees.size());
    for (const RnaTree& t : trees) {
      ils.push_back(internal_leafsets(t));
      parent_of.push_back(leaf_parent_index(t));
    }

    node_cost.resize(trees.size());
    if (objective == Objective::RfIlc) {
      std::map<std::pair<int, int>, long long> count;
      for (const RnaTree& t : trees)
        for (const auto& node : t.internal_nodes()) ++count[node];
      for (std::size_t t = 0; t < trees.size(); ++t)
        for (const auto& node : trees[t].internal_nodes())
          node_cost[t].push_back(p - 2 * count[node]);
    } else {
      std::map<std::vector<int>, long long> count;
      for (const auto& tree_ils : ils)
        for (const auto& il : tree_ils) ++count[il.members];
      for (std::size_t t = 0; t < trees.size(); ++t)
        for (const auto& il : ils[t]) node_cost[t].push_back(p - 2 * count[il.members]);
    }

    const std::size_t cells = static_cast<std::size_t>(span) * static_cast<std::size_t>(span);
    cost.assign(cells, kInfinity);
    choice.assign(cells, kNone);
    if (unconstrained) {
      c1.assign(cells, kInfinity);
      c2.assign(cells, kInfinity);
      wis.assign(cells, 0);
    }
    fill();
  }

  long long add(long long a, long long b) const {
    if (a >= kInfinity || b >= kInfinity) return kInfinity;
    return a + b;
  }

  // Cost of using tree t's IL containing i as the set covering i in [i, j]:
  // its own cost plus the best partition of every maximal run of [i+1, j]
  // that it does not cover. Returns kInfinity when the IL leaves [i, j] or a
  // run is infeasible.
  long long score_with_input_il(int t, int i, int j) const {
    const int v = parent_of[static_cast<std::size_t>(t)][static_cast<std::size_t>(i - lo)];
    const InternalLeafset& il = ils[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)];
    if (il.min() != i || il.max() > j) return kInfinity;
    long long total = node_cost[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)];
    const std::vector<int>& par = parent_of[static_cast<std::size_t>(t)];
    int run_start = -1;
    for (int k = i + 1; k <= j; ++k) {
      const bool member = k <= il.max() && par[static_cast<std::size_t>(k - lo)] == v;
      if (!member && run_start < 0) run_start = k;
      if (member && run_start >= 0) {
        total = add(total, cost[at(run_start, k - 1)]);
        run_start = -1;
      }
    }
    if (run_start >= 0) total = add(total, cost[at(run_start, j)]);
    return total;
  }

  void fill() {
    for (int len = 0; len < span; ++len) {
      for (int i = lo; i + len <= hi; ++i) {
        const int j = i + len;
        long long best = kInfinity;
        int best_choice = kNone;
        for (int t = 0; t < p; ++t) {
          const long long s = score_with_input_il(t, i, j);
          if (s < best) {
            best = s;
            best_choice = t;
          }
        }
        if (unconstrained) {
          c1[at(i, j)] = best;
          // Fresh IL containing i: pick its second element k, partition the
          // gap [i+1, k-1], and carve the best disjoint sub-intervals out of
          // [k+1, j]; everything not carved joins the fresh IL at flat cost p.
          for (int k = i + 1; k <= j; ++k) {
            const long long inner = table(cost, i + 1, k - 1);
            if (inner >= kInfinity) continue;
            const long long carved = k + 1 <= j ? wis[at(k + 1, j)] : 0;
            const long long novel = static_cast<long long>(p) + inner - carved;
            c2[at(i, j)] = std::min(c2[at(i, j)], novel);
            if (novel < best) {
              best = novel;
              best_choice = kNovelBase + k;
            }
          }
        }
        cost[at(i, j)] = best;
        choice[at(i, j)] = best_choice;
      }
      if (unconstrained) {
        // Best total carve-out weight over sub-intervals of [a, b]; an
        // interval [u, v] is worth taking only when its partition cost is
        // negative.
        for (int a = lo; a + len <= hi; ++a) {
          const int b = a + len;
          long long best = table(wis, a, b - 1);
          for (int u = a; u < b; ++u) {
            if (cost[at(u, b)] < 0) {
              best = std::max(best, -cost[at(u, b)] + table(wis, a, u - 1));
            }
          }
          wis[at(a, b)] = best;
        }
      }
    }
  }

  // Reconstructs the carved intervals realizing wis[a, b].
  std::vector<std::pair<int, int>> carve_choice(int a, int b) const {
    std::vector<std::pair<int, int>> out;
    while (b > a) {
      const long long w = wis[at(a, b)];
      if (w == table(wis, a, b - 1)) {
        --b;
        continue;
      }
      bool found = false;
      for (int u = a; u < b; ++u) {
        if (cost[at(u, b)] < 0 && -cost[at(u, b)] + table(wis, a, u - 1) == w) {
          out.emplace_back(u, b);
          b = u - 1;
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("inconsistent interval-set table");
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  void backtrace_into(int i, int j, StructuralPartition& out) const {
    const int ch = choice[at(i, j)];
    if (ch == kNone) throw std::logic_error("backtrace on infeasible cell");
    if (ch < kNovelBase) {
      const int v = parent_of[static_cast<std::size_t>(ch)][static_cast<std::size_t>(i - lo)];
      const InternalLeafset& il = ils[static_cast<std::size_t>(ch)][static_cast<std::size_t>(v)];
      out.push_back(il);
      const std::vector<int>& par = parent_of[static_cast<std::size_t>(ch)];
      int run_start = -1;
      for (int k = i + 1; k <= j; ++k) {
        const bool member = k <= il.max() && par[static_cast<std::size_t>(k - lo)] == v;
        if (!member && run_start < 0) run_start = k;
        if (member && run_start >= 0) {
          backtrace_into(run_start, k - 1, out);
          run_start = -1;
        }
      }
      if (run_start >= 0) backtrace_into(run_start, j, out);
    } else {
      const int k = ch - kNovelBase;
      std::vector<std::pair<int, int>> carved;
      if (k + 1 <= j) carved = carve_choice(k + 1, j);
      InternalLeafset fresh;
      fresh.members.push_back(i);
      std::size_t c = 0;
      for (int x = k; x <= j; ++x) {
        if (c < carved.size() && carved[c].first <= x && x <= carved[c].second) {
          if (x == carved[c].second) ++c;
          continue;
        }
        fresh.members.push_back(x);
      }
      out.push_back(std::move(fresh));
      if (i + 1 <= k - 1) backtrace_into(i + 1, k - 1, out);
      for (const auto& [u, v] : carved) backtrace_into(u, v, out);
    }
  }
};

MedianDp::MedianDp(const std::vector<RnaTree>& trees, Objective objective)
    : impl_(std::make_unique<Impl>(trees, objective)) {}

MedianDp::~MedianDp() = default;

long long MedianDp::cost_at(int i, int j) const { return impl_->table(impl_->cost, i, j); }

long long MedianDp::c1_at(int i, int j) const {
  if (!impl_->unconstrained) throw std::logic_error("split costs exist for IlNc only");
  return impl_->table(impl_->c1, i, j);
}

long long MedianDp::c2_at(int i, int j) const {
  if (!impl_->unconstrained) throw std::logic_error("split costs exist for IlNc only");
  return impl_->table(impl_->c2, i, j);
}
long long MedianDp::optimum() const { return impl_->cost[impl_->at(impl_->lo, impl_->hi)]; }

StructuralPartition MedianDp::backtrace(int i, int j) const {
  StructuralPartition out;
  impl_->backtrace_into(i, j, out);
  return out;
}

RnaTree rf_nc_median(const std::vector<RnaTree>& trees) {
  require_common_leafset(trees);
  std::map<std::pair<int, int>, std::size_t> count;
  for (const RnaTree& t : trees)
    for (const auto& node : t.internal_nodes()) ++count[node];
  std::vector<std::pair<int, int>> kept;
  for (const auto& [node, c] : count) {
    if (2 * c > trees.size()) kept.push_back(node);
  }
  return RnaTree(trees.front().leaf_lo(), trees.front().leaf_hi(), std::move(kept));
}

namespace {

MedianResult dp_median(const std::vector<RnaTree>& trees, MedianDp::Objective objective) {
  MedianDp dp(trees, objective);
  const int lo = trees.front().leaf_lo();
  const int hi = trees.front().leaf_hi();
  MedianResult result{tree_from_ils(dp.backtrace(lo, hi)), 0, dp.optimum()};
  // Undo the cost rewriting: the true Mcost adds back the per-tree collection
  // sizes that do not depend on the median.
  long long base = 0;
  for (const RnaTree& t : trees) base += t.num_internal();
  result.mcost = base + result.partition_cost;
  return result;
}

}  // namespace

MedianResult il_ilc_median(const std::vector<RnaTree>& trees) {
  return dp_median(trees, MedianDp::Objective::IlIlc);
}

MedianResult il_nc_median(const std::vector<RnaTree>& trees) {
  return dp_median(trees, MedianDp::Objective::IlNc);
}

MedianResult rf_ilc_median(const std::vector<RnaTree>& trees) {
  return dp_median(trees, MedianDp::Objective::RfIlc);
}

}  // namespace rnapars
