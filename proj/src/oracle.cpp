#include "rnapars/oracle.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace rnapars::oracle {

namespace {

// Worklist of (offset, length) windows still to fill; the first-position
// decomposition visits every structure exactly once.
void gen_structures(std::vector<std::pair<int, int>>& windows, int theta,
                    std::vector<std::pair<int, int>>& pairs,
                    std::vector<SecondaryStructure>& out, int total_length) {
  if (windows.empty()) {
    out.emplace_back(total_length, pairs);
    return;
  }
  const auto [offset, m] = windows.back();
  windows.pop_back();
  if (m == 0) {
    gen_structures(windows, theta, pairs, out, total_length);
  } else {
    windows.emplace_back(offset + 1, m - 1);  // first position unpaired
    gen_structures(windows, theta, pairs, out, total_length);
    windows.pop_back();
    for (int t = theta + 2; t <= m; ++t) {
      pairs.emplace_back(offset + 1, offset + t);
      windows.emplace_back(offset + 1, t - 2);
      windows.emplace_back(offset + t, m - t);
      gen_structures(windows, theta, pairs, out, total_length);
      windows.pop_back();
      windows.pop_back();
      pairs.pop_back();
    }
  }
  windows.emplace_back(offset, m);
}

}  // namespace

std::vector<SecondaryStructure> enumerate_structures(int n, int theta, int cap) {
  if (n < 0) throw std::invalid_argument("length must be nonnegative");
  if (n > cap) throw std::invalid_argument("enumeration cap exceeded (n=" +
                                           std::to_string(n) + ", cap=" +
                                           std::to_string(cap) + ")");
  std::vector<SecondaryStructure> out;
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::pair<int, int>> windows{{0, n}};
  gen_structures(windows, theta, pairs, out, n);
  std::sort(out.begin(), out.end(), [](const SecondaryStructure& a, const SecondaryStructure& b) {
    return a.to_dotbracket() < b.to_dotbracket();
  });
  return out;
}

namespace {

enum class Rel { Left, Right, Inside, Contains };

Rel relation(const NodeId& x, const NodeId& y) {
  if (x.second < y.first) return Rel::Left;
  if (y.second < x.first) return Rel::Right;
  if (y.first < x.first && x.second < y.second) return Rel::Inside;
  return Rel::Contains;
}

void gen_mappings(const std::vector<NodeId>& n1, const std::vector<NodeId>& n2,
                  std::size_t idx, std::vector<char>& used2, Mapping& current,
                  std::vector<Mapping>& out) {
  if (idx == n1.size()) {
    Mapping m = current;
    std::sort(m.begin(), m.end());
    out.push_back(std::move(m));
    return;
  }
  gen_mappings(n1, n2, idx + 1, used2, current, out);  // leave n1[idx] unmapped
  for (std::size_t j = 0; j < n2.size(); ++j) {
    if (used2[j]) continue;
    bool ok = true;
    for (const auto& [x1, x2] : current) {
      if (relation(x1, n1[idx]) != relation(x2, n2[j])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    used2[j] = 1;
    current.emplace_back(n1[idx], n2[j]);
    gen_mappings(n1, n2, idx + 1, used2, current, out);
    current.pop_back();
    used2[j] = 0;
  }
}

}  // namespace

std::vector<Mapping> enumerate_mappings(const RnaTree& a, const RnaTree& b,
                                        int max_internal) {
  if (a.num_internal() > max_internal || b.num_internal() > max_internal)
    throw std::invalid_argument("too many internal nodes for mapping enumeration");
  std::vector<Mapping> out;
  std::vector<char> used2(static_cast<std::size_t>(b.num_internal()), 0);
  Mapping current;
  gen_mappings(a.internal_nodes(), b.internal_nodes(), 0, used2, current, out);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool satisfies_constraint(const RnaTree& t, const std::vector<RnaTree>& inputs,
                          Constraint constraint) {
  switch (constraint) {
    case Constraint::NC:
      return true;
    case Constraint::DLC: {
      std::set<LeafInterval> allowed;
      for (const RnaTree& in : inputs)
        for (const LeafInterval& d : descendant_leafsets(in)) allowed.insert(d);
      for (const LeafInterval& d : descendant_leafsets(t))
        if (!allowed.count(d)) return false;
      return true;
    }
    case Constraint::ILC: {
      std::set<std::vector<int>> allowed;
      for (const RnaTree& in : inputs)
        for (const InternalLeafset& i : internal_leafsets(in)) allowed.insert(i.members);
      for (const InternalLeafset& i : internal_leafsets(t))
        if (!allowed.count(i.members)) return false;
      return true;
    }
    case Constraint::BPC: {
      std::set<NodeId> allowed;
      for (const RnaTree& in : inputs)
        for (const NodeId& x : in.internal_nodes()) allowed.insert(x);
      for (const NodeId& x : t.internal_nodes())
        if (!allowed.count(x)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

BruteMedian brute_median(const std::vector<RnaTree>& trees, Metric metric,
                         Constraint constraint, int cap) {
  if (trees.empty()) throw std::invalid_argument("need at least one input tree");
  if (trees.front().leaf_lo() != 0)
    throw std::invalid_argument("expected leafset [0, n+1]");
  const int n = trees.front().leaf_hi() - 1;
  std::optional<BruteMedian> best;
  for (const SecondaryStructure& s : enumerate_structures(n, 0, cap)) {
    RnaTree candidate = to_tree(s);
    if (!satisfies_constraint(candidate, trees, constraint)) continue;
    const double cost = mcost(candidate, trees, metric);
    if (!best || cost < best->cost) best = BruteMedian{cost, std::move(candidate)};
  }
  if (!best) throw std::logic_error("constrained class was empty");
  return *best;
}

BruteSp brute_sp(const Phylogeny& phy, const LeafTrees& leaf_trees, Metric metric,
                 CandidatePolicy policy, long long max_assignments) {
  std::vector<std::optional<RnaTree>> slots(static_cast<std::size_t>(phy.size()));
  for (int v : phy.leaves()) {
    auto it = leaf_trees.find(phy.node(v).label);
    if (it == leaf_trees.end())
      throw std::invalid_argument("missing leaf tree: " + phy.node(v).label);
    slots[static_cast<std::size_t>(v)] = it->second;
  }

  std::vector<RnaTree> cands;
  if (policy == CandidatePolicy::LeafRestricted) {
    for (int v : phy.leaves()) {
      const RnaTree& t = *slots[static_cast<std::size_t>(v)];
      if (std::find(cands.begin(), cands.end(), t) == cands.end()) cands.push_back(t);
    }
  } else {
    const int n = slots[static_cast<std::size_t>(phy.leaves().front())]->leaf_hi() - 1;
    for (const SecondaryStructure& s : enumerate_structures(n, 0, 6)) cands.push_back(to_tree(s));
  }
  const std::size_t m = cands.size();

  std::vector<std::vector<double>> dist(m, std::vector<double>(m, 0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      dist[a][b] = dist[b][a] = tree_distance(cands[a], cands[b], metric);

  // Every node's tree is one of the candidates; edges become matrix lookups.
  std::vector<std::size_t> state(static_cast<std::size_t>(phy.size()), 0);
  for (int v : phy.leaves()) {
    const auto it = std::find(cands.begin(), cands.end(), *slots[static_cast<std::size_t>(v)]);
    if (it == cands.end()) throw std::logic_error("leaf tree missing from candidate set");
    state[static_cast<std::size_t>(v)] = static_cast<std::size_t>(it - cands.begin());
  }

  std::vector<int> internals;
  for (int v = 0; v < phy.size(); ++v)
    if (!phy.is_leaf(v)) internals.push_back(v);

  long long combos = 1;
  for (std::size_t k = 0; k < internals.size(); ++k) {
    combos *= static_cast<long long>(m);
    if (combos > max_assignments)
      throw std::invalid_argument("too many assignments to enumerate");
  }

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_pick;
  std::vector<std::size_t> pick(internals.size(), 0);
  while (true) {
    for (std::size_t k = 0; k < internals.size(); ++k)
      state[static_cast<std::size_t>(internals[k])] = pick[k];
    double cost = 0;
    for (int v = 1; v < phy.size(); ++v)
      cost += dist[state[static_cast<std::size_t>(v)]]
                  [state[static_cast<std::size_t>(phy.node(v).parent)]];
    if (cost < best_cost) {
      best_cost = cost;
      best_pick = pick;
    }
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == m) pick[k++] = 0;
    if (k == pick.size()) break;
  }

  for (std::size_t k = 0; k < internals.size(); ++k)
    slots[static_cast<std::size_t>(internals[k])] = cands[best_pick[k]];
  BruteSp out;
  out.cost = best_cost;
  out.trees_by_node.reserve(slots.size());
  for (const auto& s : slots) out.trees_by_node.push_back(*s);
  return out;
}

}  // namespace rnapars::oracle
