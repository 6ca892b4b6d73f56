#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rnapars/distances.hpp"
#include "rnapars/errors.hpp"
#include "rnapars/io.hpp"
#include "rnapars/median.hpp"
#include "rnapars/oracle.hpp"
#include "rnapars/sampling.hpp"
#include "rnapars/smallpars.hpp"

namespace py = pybind11;
using namespace rnapars;

namespace {

RnaTree tree_of(const std::string& db) { return to_tree(parse_dotbracket(db)); }

std::vector<RnaTree> trees_of(const std::vector<std::string>& dbs) {
  std::vector<RnaTree> out;
  out.reserve(dbs.size());
  for (const auto& db : dbs) out.push_back(tree_of(db));
  return out;
}

std::string db_of(const RnaTree& t) { return to_structure(t).to_dotbracket(); }

LeafTrees leaf_trees_of(const std::map<std::string, std::string>& structures) {
  LeafTrees out;
  for (const auto& [id, db] : structures) out.emplace(id, tree_of(db));
  return out;
}

py::dict assignment_to_dict(const Phylogeny& phy, const Assignment& a) {
  py::dict out;
  for (int v = 0; v < phy.size(); ++v) {
    std::string id = phy.node(v).label;
    if (id.empty()) id = "node" + std::to_string(v);
    out[py::str(id)] = db_of(a.trees[static_cast<std::size_t>(v)]);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(rnapars, m) {
  m.doc() = "Median and small parsimony solvers for aligned RNA secondary structures";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def("bp_distance",
        [](const std::string& a, const std::string& b) {
          return bp_distance(parse_dotbracket(a), parse_dotbracket(b));
        },
        py::arg("a"), py::arg("b"));
  m.def("rf_distance",
        [](const std::string& a, const std::string& b) {
          return rf_distance(tree_of(a), tree_of(b));
        },
        py::arg("a"), py::arg("b"));
  m.def("il_distance",
        [](const std::string& a, const std::string& b) {
          return il_distance(tree_of(a), tree_of(b));
        },
        py::arg("a"), py::arg("b"));
  m.def("re_distance",
        [](const std::string& a, const std::string& b) {
          return re_distance(tree_of(a), tree_of(b));
        },
        py::arg("a"), py::arg("b"));
  m.def("te_distance",
        [](const std::string& a, const std::string& b, const std::string& cost) {
          CostFunction c;
          if (cost == "exact")
            c = exact_match_cost();
          else if (cost == "shift")
            c = endpoint_shift_cost();
          else
            throw InputError("cost must be 'exact' or 'shift'");
          const TreeEdit e = te_distance(tree_of(a), tree_of(b), c);
          return py::make_tuple(e.cost, e.mapping);
        },
        py::arg("a"), py::arg("b"), py::arg("cost") = "shift");

  m.def("mcost",
        [](const std::string& candidate, const std::vector<std::string>& inputs,
           const std::string& metric) {
          return mcost(tree_of(candidate), trees_of(inputs), metric_from_string(metric));
        },
        py::arg("candidate"), py::arg("inputs"), py::arg("metric") = "rf");
  m.def("rf_nc_median",
        [](const std::vector<std::string>& inputs) {
          return db_of(rf_nc_median(trees_of(inputs)));
        },
        py::arg("inputs"));
  const auto wrap_median = [](MedianResult (*solver)(const std::vector<RnaTree>&)) {
    return [solver](const std::vector<std::string>& inputs) {
      const MedianResult r = solver(trees_of(inputs));
      return py::make_tuple(db_of(r.tree), r.mcost);
    };
  };
  m.def("il_ilc_median", wrap_median(&il_ilc_median), py::arg("inputs"));
  m.def("il_nc_median", wrap_median(&il_nc_median), py::arg("inputs"));
  m.def("rf_ilc_median", wrap_median(&rf_ilc_median), py::arg("inputs"));

  m.def("sp_cost",
        [](const std::string& newick, const std::map<std::string, std::string>& assignment,
           const std::string& metric) {
          const Phylogeny phy = parse_newick(newick);
          std::vector<RnaTree> trees;
          for (int v = 0; v < phy.size(); ++v) {
            std::string id = phy.node(v).label;
            if (id.empty()) id = "node" + std::to_string(v);
            auto it = assignment.find(id);
            if (it == assignment.end()) throw InputError("missing assignment for " + id);
            trees.push_back(tree_of(it->second));
          }
          return sp_cost(phy, trees, metric_from_string(metric));
        },
        py::arg("newick"), py::arg("assignment"), py::arg("metric") = "rf");
  m.def("rf_nc_sp",
        [](const std::string& newick, const std::map<std::string, std::string>& structures) {
          const Phylogeny phy = parse_newick(newick);
          const Assignment a = rf_nc_sp(phy, leaf_trees_of(structures));
          return py::make_tuple(a.sp_cost, assignment_to_dict(phy, a));
        },
        py::arg("newick"), py::arg("structures"));
  m.def("leaf_restricted_sp",
        [](const std::string& newick, const std::map<std::string, std::string>& structures,
           const std::string& metric) {
          const Phylogeny phy = parse_newick(newick);
          const Assignment a =
              leaf_restricted_sp(phy, leaf_trees_of(structures), metric_from_string(metric));
          return py::make_tuple(a.sp_cost, assignment_to_dict(phy, a));
        },
        py::arg("newick"), py::arg("structures"), py::arg("metric") = "rf");
  m.def("median_heuristic_sp",
        [](const std::string& newick, const std::map<std::string, std::string>& structures,
           const std::string& metric, const std::string& constraint, int max_rounds) {
          const Phylogeny phy = parse_newick(newick);
          const LeafTrees leaves = leaf_trees_of(structures);
          const Metric m_ = metric_from_string(metric);
          const Assignment init = leaf_restricted_sp(phy, leaves, m_);
          const Assignment a = median_heuristic_sp(phy, leaves, m_,
                                                   constraint_from_string(constraint), init,
                                                   max_rounds);
          return py::make_tuple(a.sp_cost, assignment_to_dict(phy, a));
        },
        py::arg("newick"), py::arg("structures"), py::arg("metric") = "il",
        py::arg("constraint") = "ilc", py::arg("max_rounds") = 50);

  m.def("count_structures",
        [](int n, int theta) {
          const std::string digits = count_structures(n, theta).to_string();
          return py::reinterpret_steal<py::int_>(
              PyLong_FromString(digits.c_str(), nullptr, 10));
        },
        py::arg("n"), py::arg("theta") = 3);
  m.def("sample_structure",
        [](int n, int theta, std::uint64_t seed) {
          return sample_structure({n, theta, 1, seed}).to_dotbracket();
        },
        py::arg("n"), py::arg("theta") = 3, py::arg("seed") = 1);
  m.def("sample_phylogeny",
        [](int n, int theta, int height, std::uint64_t seed) {
          const SampledPhylogeny s = sample_phylogeny({n, theta, height, seed});
          std::vector<std::pair<std::string, std::string>> leaves;
          for (const auto& [id, structure] : s.leaf_structures)
            leaves.emplace_back(id, structure.to_dotbracket());
          return py::make_tuple(to_newick(s.phylogeny), leaves);
        },
        py::arg("n") = 100, py::arg("theta") = 3, py::arg("height") = 5, py::arg("seed") = 1);

  m.def("degap",
        [](const std::vector<std::pair<std::string, std::string>>& records) {
          std::vector<StructureRecord> in;
          for (const auto& [id, aligned] : records) in.push_back({id, aligned});
          std::vector<std::pair<std::string, std::string>> out;
          for (const auto& [id, s] : degap(in).records)
            out.emplace_back(id, s.to_dotbracket());
          return out;
        },
        py::arg("records"));

  m.def("project_stockholm",
        [](const std::string& text) {
          std::vector<std::pair<std::string, std::string>> out;
          for (const auto& rec : project_consensus(parse_stockholm(text)))
            out.emplace_back(rec.id, rec.aligned);
          return out;
        },
        py::arg("text"),
        "Aligned dot-bracket records from a Stockholm seed alignment");

  m.def("enumerate_structures",
        [](int n, int theta, int cap) {
          std::vector<std::string> out;
          for (const SecondaryStructure& s : oracle::enumerate_structures(n, theta, cap))
            out.push_back(s.to_dotbracket());
          return out;
        },
        py::arg("n"), py::arg("theta") = 0, py::arg("cap") = 12);
}
