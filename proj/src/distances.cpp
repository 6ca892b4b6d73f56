#include "rnapars/distances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "rnapars/errors.hpp"

namespace rnapars {

Metric metric_from_string(std::string_view name) {
  if (name == "bp") return Metric::BP;
  if (name == "rf") return Metric::RF;
  if (name == "il") return Metric::IL;
  if (name == "re") return Metric::RE;
  throw InputError("unknown metric: " + std::string(name));
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::BP: return "bp";
    case Metric::RF: return "rf";
    case Metric::IL: return "il";
    case Metric::RE: return "re";
  }
  return "?";
}

namespace {

template <typename T>
long long symmetric_difference_size(const std::vector<T>& a, const std::vector<T>& b) {
  // Both inputs sorted.
  std::size_t ia = 0, ib = 0;
  long long shared = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] == b[ib]) {
      ++shared;
      ++ia;
      ++ib;
    } else if (a[ia] < b[ib]) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return static_cast<long long>(a.size() + b.size()) - 2 * shared;
}

void require_same_leafset(const RnaTree& a, const RnaTree& b) {
  if (a.leaf_lo() != b.leaf_lo() || a.leaf_hi() != b.leaf_hi())
    throw std::invalid_argument("trees must share a leafset");
}

}  // namespace

long long bp_distance(const SecondaryStructure& a, const SecondaryStructure& b) {
  if (a.length() != b.length())
    throw std::invalid_argument("structures must have equal length");
  return symmetric_difference_size(a.pairs(), b.pairs());
}

long long rf_distance(const RnaTree& a, const RnaTree& b) {
  require_same_leafset(a, b);
  return symmetric_difference_size(a.internal_nodes(), b.internal_nodes());
}

long long il_distance(const RnaTree& a, const RnaTree& b) {
  require_same_leafset(a, b);
  std::vector<InternalLeafset> ia = internal_leafsets(a);
  std::vector<InternalLeafset> ib = internal_leafsets(b);
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  return symmetric_difference_size(ia, ib);
}

CostFunction exact_match_cost() {
  return [](const NodeId& x, const NodeId& y) {
    return x == y ? 0.0 : std::numeric_limits<double>::infinity();
  };
}

CostFunction endpoint_shift_cost() {
  return [](const NodeId& x, const NodeId& y) {
    return static_cast<double>(std::abs(x.first - y.first) + std::abs(x.second - y.second));
  };
}

namespace {

// The internal nodes of an RNA tree form an ordered tree of nested arcs;
// editing happens on that tree alone. Nodes are held in postorder, with
// l[v] the postorder index of the leftmost node in v's subtree.
struct ArcTree {
  std::vector<NodeId> post;  // arcs sorted by closing position = postorder
  std::vector<int> l;

  explicit ArcTree(const RnaTree& t) {
    post = t.internal_nodes();
    std::sort(post.begin(), post.end(),
              [](const NodeId& a, const NodeId& b) { return a.second < b.second; });
    l.assign(post.size(), 0);
    // Completed subtrees waiting for a parent, as (opening pos, leftmost idx).
    std::vector<std::pair<int, int>> pending;
    for (std::size_t v = 0; v < post.size(); ++v) {
      int leftmost = static_cast<int>(v);
      while (!pending.empty() && pending.back().first > post[v].first) {
        leftmost = std::min(leftmost, pending.back().second);
        pending.pop_back();
      }
      l[v] = leftmost;
      pending.emplace_back(post[v].first, leftmost);
    }
  }
};

// Forest edit distance between postorder slices [a1, b1] and [a2, b2],
// memoized on the packed state. Deleting a node promotes its children, so a
// slice always stays a valid forest.
class ForestDp {
 public:
  ForestDp(const ArcTree& t1, const ArcTree& t2, const CostFunction& cost)
      : t1_(t1), t2_(t2), cost_(cost) {}

  double dist(int a1, int b1, int a2, int b2) {
    if (b1 < a1 && b2 < a2) return 0.0;
    if (b1 < a1) return static_cast<double>(b2 - a2 + 1);
    if (b2 < a2) return static_cast<double>(b1 - a1 + 1);
    const std::uint64_t key = pack(a1, b1, a2, b2);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    double best = dist(a1, b1 - 1, a2, b2) + 1.0;
    best = std::min(best, dist(a1, b1, a2, b2 - 1) + 1.0);
    const int l1 = t1_.l[static_cast<std::size_t>(b1)];
    const int l2 = t2_.l[static_cast<std::size_t>(b2)];
    const double match = dist(l1, b1 - 1, l2, b2 - 1) + dist(a1, l1 - 1, a2, l2 - 1) +
                         cost_(t1_.post[static_cast<std::size_t>(b1)],
                               t2_.post[static_cast<std::size_t>(b2)]);
    best = std::min(best, match);
    memo_.emplace(key, best);
    return best;
  }

  void trace(int a1, int b1, int a2, int b2, Mapping& out) {
    if (b1 < a1 || b2 < a2) return;
    const double v = dist(a1, b1, a2, b2);
    const int l1 = t1_.l[static_cast<std::size_t>(b1)];
    const int l2 = t2_.l[static_cast<std::size_t>(b2)];
    const double match = dist(l1, b1 - 1, l2, b2 - 1) + dist(a1, l1 - 1, a2, l2 - 1) +
                         cost_(t1_.post[static_cast<std::size_t>(b1)],
                               t2_.post[static_cast<std::size_t>(b2)]);
    if (v == match) {
      out.emplace_back(t1_.post[static_cast<std::size_t>(b1)],
                       t2_.post[static_cast<std::size_t>(b2)]);
      trace(l1, b1 - 1, l2, b2 - 1, out);
      trace(a1, l1 - 1, a2, l2 - 1, out);
      return;
    }
    if (v == dist(a1, b1 - 1, a2, b2) + 1.0) {
      trace(a1, b1 - 1, a2, b2, out);
      return;
    }
    trace(a1, b1, a2, b2 - 1, out);
  }

 private:
  static std::uint64_t pack(int a1, int b1, int a2, int b2) {
    return (static_cast<std::uint64_t>(a1) << 48) |
           (static_cast<std::uint64_t>(b1 + 1) << 32) |
           (static_cast<std::uint64_t>(a2) << 16) |
           static_cast<std::uint64_t>(b2 + 1);
  }

  const ArcTree& t1_;
  const ArcTree& t2_;
  const CostFunction& cost_;
  std::unordered_map<std::uint64_t, double> memo_;
};

}  // namespace

TreeEdit te_distance(const RnaTree& a, const RnaTree& b, const CostFunction& cost) {
  require_same_leafset(a, b);
  ArcTree ta(a), tb(b);
  ForestDp dp(ta, tb, cost);
  const int m1 = static_cast<int>(ta.post.size());
  const int m2 = static_cast<int>(tb.post.size());
  TreeEdit result;
  result.cost = dp.dist(0, m1 - 1, 0, m2 - 1);
  dp.trace(0, m1 - 1, 0, m2 - 1, result.mapping);
  std::sort(result.mapping.begin(), result.mapping.end());
  return result;
}

double re_distance(const RnaTree& a, const RnaTree& b) {
  return te_distance(a, b, endpoint_shift_cost()).cost;
}

double mapping_cost(const Mapping& m, int num_internal_a, int num_internal_b,
                    const CostFunction& cost) {
  double total = static_cast<double>(num_internal_a + num_internal_b) -
                 2.0 * static_cast<double>(m.size());
  for (const auto& [x, y] : m) total += cost(x, y);
  return total;
}

double tree_distance(const RnaTree& a, const RnaTree& b, Metric metric) {
  switch (metric) {
    case Metric::BP:
    case Metric::RF:
      return static_cast<double>(rf_distance(a, b));
    case Metric::IL:
      return static_cast<double>(il_distance(a, b));
    case Metric::RE:
      return re_distance(a, b);
  }
  throw std::logic_error("unreachable");
}

}  // namespace rnapars
