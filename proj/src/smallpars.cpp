#include "rnapars/smallpars.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>

#include "rnapars/errors.hpp"
#include "rnapars/phylogeny.hpp"

namespace rnapars {

int Phylogeny::add_node(int parent, std::string label) {
  const int id = size();
  if (parent < 0) {
    if (id != 0) throw std::invalid_argument("only the first node may be the root");
  } else {
    if (parent >= id) throw std::invalid_argument("parent must exist");
    nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  }
  nodes_.push_back(Node{parent, {}, std::move(label)});
  return id;
}

void Phylogeny::set_label(int v, std::string label) {
  nodes_[static_cast<std::size_t>(v)].label = std::move(label);
}

std::vector<int> Phylogeny::postorder() const {
  std::vector<int> out;
  out.reserve(nodes_.size());
  std::vector<std::pair<int, std::size_t>> stack;
  if (!nodes_.empty()) stack.emplace_back(root(), 0);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < node(v).children.size()) {
      const int child = node(v).children[next++];
      stack.emplace_back(child, 0);
    } else {
      out.push_back(v);
      stack.pop_back();
    }
  }
  return out;
}

std::vector<int> Phylogeny::leaves() const {
  std::vector<int> out;
  for (int v : postorder())
    if (is_leaf(v)) out.push_back(v);
  return out;
}

std::vector<int> Phylogeny::depths() const {
  std::vector<int> out(nodes_.size(), 0);
  for (std::size_t v = 1; v < nodes_.size(); ++v)
    out[v] = out[static_cast<std::size_t>(nodes_[v].parent)] + 1;
  return out;
}

std::vector<int> Phylogeny::heights() const {
  std::vector<int> out(nodes_.size(), 0);
  for (int v : postorder()) {
    for (int c : node(v).children)
      out[static_cast<std::size_t>(v)] =
          std::max(out[static_cast<std::size_t>(v)], out[static_cast<std::size_t>(c)] + 1);
  }
  return out;
}

double sp_cost(const Phylogeny& phy, const std::vector<RnaTree>& trees_by_node,
               Metric metric) {
  if (static_cast<int>(trees_by_node.size()) != phy.size())
    throw std::invalid_argument("assignment must cover every node");
  double total = 0;
  for (int v = 1; v < phy.size(); ++v) {
    total += tree_distance(trees_by_node[static_cast<std::size_t>(v)],
                           trees_by_node[static_cast<std::size_t>(phy.node(v).parent)],
                           metric);
  }
  return total;
}

namespace {

// Leaf trees resolved to node indices; leaves come first in the result only
// conceptually -- the vector is indexed by node and internal slots are empty.
std::vector<std::optional<RnaTree>> resolve_leaves(const Phylogeny& phy,
                                                   const LeafTrees& leaf_trees) {
  std::vector<std::optional<RnaTree>> out(static_cast<std::size_t>(phy.size()));
  for (int v : phy.leaves()) {
    const std::string& id = phy.node(v).label;
    auto it = leaf_trees.find(id);
    if (it == leaf_trees.end())
      throw InputError("no structure for leaf id '" + id + "'");
    out[static_cast<std::size_t>(v)] = it->second;
  }
  int lo = 0, hi = 0;
  bool first = true;
  for (const auto& t : out) {
    if (!t) continue;
    if (first) {
      lo = t->leaf_lo();
      hi = t->leaf_hi();
      first = false;
    } else if (t->leaf_lo() != lo || t->leaf_hi() != hi) {
      throw InputError("leaf structures must share one length");
    }
  }
  return out;
}

std::vector<RnaTree> materialize(std::vector<std::optional<RnaTree>>&& slots) {
  std::vector<RnaTree> out;
  out.reserve(slots.size());
  for (auto& s : slots) {
    if (!s) throw std::logic_error("assignment left a node empty");
    out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace

Assignment rf_nc_sp(const Phylogeny& phy, const LeafTrees& leaf_trees, bool check_lemmas) {
  std::vector<std::optional<RnaTree>> slots = resolve_leaves(phy, leaf_trees);
  const std::vector<int> post = phy.postorder();
  const int root = phy.root();

  if (phy.size() == 1) {
    Assignment a{materialize(std::move(slots)), 0};
    return a;
  }

  // Distinct DLs across the leaf trees, as node spans.
  std::vector<std::pair<int, int>> dls;
  for (int v : phy.leaves()) {
    const auto& nodes = slots[static_cast<std::size_t>(v)]->internal_nodes();
    dls.insert(dls.end(), nodes.begin(), nodes.end());
  }
  std::sort(dls.begin(), dls.end());
  dls.erase(std::unique(dls.begin(), dls.end()), dls.end());

  // B masks per character and node: 1 = {0}, 2 = {1}, 3 = {0,1}.
  const std::size_t nv = static_cast<std::size_t>(phy.size());
  std::vector<std::vector<std::uint8_t>> bottom(dls.size(), std::vector<std::uint8_t>(nv, 0));
  std::vector<std::vector<std::uint8_t>> final_state(dls.size(),
                                                     std::vector<std::uint8_t>(nv, 0));
  long long changes = 0;
  for (std::size_t c = 0; c < dls.size(); ++c) {
    auto& b = bottom[c];
    for (int v : post) {
      const std::size_t vi = static_cast<std::size_t>(v);
      if (phy.is_leaf(v)) {
        const auto& nodes = slots[vi]->internal_nodes();
        const bool has = std::binary_search(nodes.begin(), nodes.end(), dls[c]);
        b[vi] = has ? 2 : 1;
      } else {
        int n0 = 0, n1 = 0;
        for (int ch : phy.node(v).children) {
          const std::uint8_t m = b[static_cast<std::size_t>(ch)];
          if (m == 1) ++n0;
          if (m == 2) ++n1;
        }
        b[vi] = n0 > n1 ? 1 : (n1 > n0 ? 2 : 3);
      }
    }
    auto& f = final_state[c];
    f[static_cast<std::size_t>(root)] = (b[static_cast<std::size_t>(root)] & 1) ? 0 : 1;
    for (auto it = post.rbegin(); it != post.rend(); ++it) {
      const int v = *it;
      if (v == root) continue;
      const std::size_t vi = static_cast<std::size_t>(v);
      f[vi] = b[vi] == 3 ? f[static_cast<std::size_t>(phy.node(v).parent)]
                         : static_cast<std::uint8_t>(b[vi] == 2);
    }
    for (int v = 1; v < phy.size(); ++v)
      changes += final_state[c][static_cast<std::size_t>(v)] !=
                 final_state[c][static_cast<std::size_t>(phy.node(v).parent)];
  }

  if (check_lemmas) {
    for (std::size_t c = 0; c < dls.size(); ++c) {
      for (std::size_t d = c + 1; d < dls.size(); ++d) {
        // Incompatible means the two spans cannot be nodes of one RNA tree:
        // they overlap without containment, or nest sharing an endpoint.
        const bool incompatible =
            dl_conflict({dls[c].first, dls[c].second}, {dls[d].first, dls[d].second}) ||
            dls[c].first == dls[d].first || dls[c].second == dls[d].second;
        if (!incompatible) continue;
        for (std::size_t v = 0; v < nv; ++v) {
          if (bottom[c][v] == 2 && bottom[d][v] != 1)
            throw std::logic_error("conflicting DLs both allowed by bottom-up sets");
          if (final_state[c][v] == 1 && final_state[d][v] == 1)
            throw std::logic_error("conflicting DLs both selected by final assignment");
        }
      }
    }
  }

  const int lo = slots[static_cast<std::size_t>(phy.leaves().front())]->leaf_lo();
  const int hi = slots[static_cast<std::size_t>(phy.leaves().front())]->leaf_hi();
  for (int v = 0; v < phy.size(); ++v) {
    if (phy.is_leaf(v)) continue;
    std::vector<LeafInterval> selected;
    for (std::size_t c = 0; c < dls.size(); ++c) {
      if (final_state[c][static_cast<std::size_t>(v)])
        selected.push_back({dls[c].first, dls[c].second});
    }
    slots[static_cast<std::size_t>(v)] = tree_from_dls(std::move(selected), {lo, hi});
  }

  Assignment a{materialize(std::move(slots)), 0};
  a.sp_cost = sp_cost(phy, a.trees, Metric::RF);
  if (a.sp_cost != static_cast<double>(changes))
    throw std::logic_error("per-character change count disagrees with SP cost");
  return a;
}

namespace {

// Distinct leaf trees in order of first appearance among the leaves.
std::vector<RnaTree> candidate_trees(const Phylogeny& phy,
                                     const std::vector<std::optional<RnaTree>>& slots) {
  std::vector<RnaTree> out;
  for (int v : phy.leaves()) {
    const RnaTree& t = *slots[static_cast<std::size_t>(v)];
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

}  // namespace

Assignment leaf_restricted_sp(const Phylogeny& phy, const LeafTrees& leaf_trees,
                              Metric metric) {
  std::vector<std::optional<RnaTree>> slots = resolve_leaves(phy, leaf_trees);
  const std::vector<RnaTree> cands = candidate_trees(phy, slots);
  const std::size_t m = cands.size();
  std::vector<std::vector<double>> dist(m, std::vector<double>(m, 0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      dist[a][b] = dist[b][a] = tree_distance(cands[a], cands[b], metric);

  std::vector<std::size_t> leaf_cand(static_cast<std::size_t>(phy.size()), 0);
  for (int v : phy.leaves()) {
    const RnaTree& t = *slots[static_cast<std::size_t>(v)];
    leaf_cand[static_cast<std::size_t>(v)] = static_cast<std::size_t>(
        std::find(cands.begin(), cands.end(), t) - cands.begin());
  }

  // Bottom-up: cost[v][s] = best cost of v's subtree when v takes candidate s.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(phy.size()),
                                        std::vector<double>(m, 0));
  const std::vector<int> post = phy.postorder();
  for (int v : post) {
    if (phy.is_leaf(v)) continue;
    auto& row = cost[static_cast<std::size_t>(v)];
    for (std::size_t s = 0; s < m; ++s) {
      double total = 0;
      for (int ch : phy.node(v).children) {
        const std::size_t ci = static_cast<std::size_t>(ch);
        if (phy.is_leaf(ch)) {
          total += dist[s][leaf_cand[ci]];
        } else {
          double best = inf;
          for (std::size_t t = 0; t < m; ++t)
            best = std::min(best, cost[ci][t] + dist[s][t]);
          total += best;
        }
      }
      row[s] = total;
    }
  }

  // Top-down choice, lowest candidate index on ties.
  std::vector<std::size_t> pick(static_cast<std::size_t>(phy.size()), 0);
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    const int v = *it;
    if (phy.is_leaf(v)) continue;
    const std::size_t vi = static_cast<std::size_t>(v);
    std::size_t best_s = 0;
    double best = inf;
    for (std::size_t s = 0; s < m; ++s) {
      double value = cost[vi][s];
      if (v != phy.root())
        value += dist[s][pick[static_cast<std::size_t>(phy.node(v).parent)]];
      if (value < best) {
        best = value;
        best_s = s;
      }
    }
    pick[vi] = best_s;
    slots[vi] = cands[best_s];
  }

  Assignment a{materialize(std::move(slots)), 0};
  a.sp_cost = sp_cost(phy, a.trees, metric);
  return a;
}

Assignment median_heuristic_sp(const Phylogeny& phy, const LeafTrees& leaf_trees,
                               Metric metric, Constraint constraint,
                               const Assignment& init, int max_rounds,
                               std::vector<double>* cost_history) {
  if (metric != Metric::RF && metric != Metric::IL)
    throw InputError("median-based heuristic supports rf and il metrics only");
  if (constraint != Constraint::NC && constraint != Constraint::ILC)
    throw InputError("median-based heuristic supports nc and ilc constraints only");
  std::vector<std::optional<RnaTree>> slots = resolve_leaves(phy, leaf_trees);
  if (static_cast<int>(init.trees.size()) != phy.size())
    throw std::invalid_argument("initial assignment must cover every node");
  for (int v : phy.leaves()) {
    if (init.trees[static_cast<std::size_t>(v)] != *slots[static_cast<std::size_t>(v)])
      throw std::invalid_argument("initial assignment disagrees with leaf trees");
  }

  std::vector<RnaTree> current = init.trees;
  double total = sp_cost(phy, current, metric);
  if (cost_history) cost_history->push_back(total);

  const auto solve_median = [&](const std::vector<RnaTree>& inputs) -> RnaTree {
    if (metric == Metric::RF) {
      if (constraint == Constraint::NC) return rf_nc_median(inputs);
      return rf_ilc_median(inputs).tree;
    }
    if (constraint == Constraint::NC) return il_nc_median(inputs).tree;
    return il_ilc_median(inputs).tree;
  };

  const std::vector<int> post = phy.postorder();
  for (int round = 0; round < max_rounds; ++round) {
    bool improved = false;
    for (int v : post) {
      if (phy.is_leaf(v)) continue;
      std::vector<int> neighbors = phy.node(v).children;
      if (v != phy.root()) neighbors.push_back(phy.node(v).parent);
      std::vector<RnaTree> inputs;
      inputs.reserve(neighbors.size());
      for (int u : neighbors) inputs.push_back(current[static_cast<std::size_t>(u)]);
      RnaTree median = solve_median(inputs);
      double before = 0, after = 0;
      for (int u : neighbors) {
        before += tree_distance(current[static_cast<std::size_t>(v)],
                                current[static_cast<std::size_t>(u)], metric);
        after += tree_distance(median, current[static_cast<std::size_t>(u)], metric);
      }
      if (after < before) {
        current[static_cast<std::size_t>(v)] = std::move(median);
        total += after - before;
        improved = true;
        if (cost_history) cost_history->push_back(total);
      }
    }
    if (!improved) break;
  }

  Assignment a{std::move(current), 0};
  a.sp_cost = sp_cost(phy, a.trees, metric);
  if (a.sp_cost != total) throw std::logic_error("incremental SP cost drifted");
  return a;
}

}  // namespace rnapars
