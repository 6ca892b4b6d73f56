#pragma once

#include <string>
#include <vector>

namespace rnapars {

// Rooted phylogeny with arbitrary out-degree. Leaves carry the ids used to
// look up their structures; internal labels are optional. Node 0 is the root.
class Phylogeny {
 public:
  struct Node {
    int parent = -1;
    std::vector<int> children;
    std::string label;
  };

  // Adds a node; the first added node must be the root (parent == -1).
  int add_node(int parent, std::string label = "");

  int size() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return size() - 1; }
  int root() const { return 0; }
  const Node& node(int v) const { return nodes_[static_cast<std::size_t>(v)]; }
  bool is_leaf(int v) const { return node(v).children.empty(); }
  void set_label(int v, std::string label);

  // Children-before-parent order (left to right within siblings).
  std::vector<int> postorder() const;
  std::vector<int> leaves() const;  // in postorder
  std::vector<int> depths() const;  // edges from the root
  std::vector<int> heights() const; // longest leafward path, leaves are 0

 private:
  std::vector<Node> nodes_;
};

}  // namespace rnapars
