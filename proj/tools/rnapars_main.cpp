#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rnapars/distances.hpp"
#include "rnapars/errors.hpp"
#include "rnapars/io.hpp"
#include "rnapars/median.hpp"
#include "rnapars/oracle.hpp"
#include "rnapars/sampling.hpp"
#include "rnapars/smallpars.hpp"

namespace fs = std::filesystem;
using namespace rnapars;

namespace {

struct OutputOptions {
  std::optional<fs::path> out;
  bool json = false;
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--out", opts.out, "Write results to this file instead of stdout");
  cmd->add_flag("--json", opts.json, "Emit JSON instead of CSV");
}

// Structure inputs may be FASTA-like dot-bracket files or Stockholm seed
// alignments (detected by the header); Stockholm rows get the consensus
// structure projected onto each sequence first.
std::vector<StructureRecord> load_records(const fs::path& path) {
  std::ifstream probe(path);
  std::string first_line;
  if (probe) std::getline(probe, first_line);
  if (first_line.rfind("# STOCKHOLM", 0) == 0)
    return project_consensus(read_stockholm(path));
  return read_structures(path);
}

std::vector<std::pair<std::string, RnaTree>> load_trees(const fs::path& path) {
  const DegapResult degapped = degap(load_records(path));
  if (degapped.dropped_columns > 0)
    std::cerr << "note: " << path.filename().string() << ": dropped "
              << degapped.dropped_columns << " gapped column(s)\n";
  std::vector<std::pair<std::string, RnaTree>> out;
  out.reserve(degapped.records.size());
  for (const auto& [id, s] : degapped.records) out.emplace_back(id, to_tree(s));
  return out;
}

std::string node_display_id(const Phylogeny& phy, int v) {
  if (!phy.node(v).label.empty()) return phy.node(v).label;
  return "node" + std::to_string(v);
}

int thread_budget(std::size_t tasks) {
  unsigned n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("RNAPARS_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) n = static_cast<unsigned>(parsed);
  }
  if (n < 1) n = 1;
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

// ---------------------------------------------------------------------------
// distance

struct DistanceArgs {
  fs::path input;
  std::string metric = "rf";
  std::string pairs = "all";
  OutputOptions out;
};

void run_distance(const DistanceArgs& args) {
  const DegapResult degapped = degap(load_records(args.input));
  if (degapped.dropped_columns > 0)
    std::cerr << "note: " << args.input.filename().string() << ": dropped "
              << degapped.dropped_columns << " gapped column(s)\n";
  const Metric metric = metric_from_string(args.metric);
  std::vector<std::pair<std::string, RnaTree>> trees;
  for (const auto& [id, s] : degapped.records) trees.emplace_back(id, to_tree(s));

  std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
  if (args.pairs == "all") {
    for (std::size_t a = 0; a < trees.size(); ++a)
      for (std::size_t b = a + 1; b < trees.size(); ++b) index_pairs.emplace_back(a, b);
  } else if (args.pairs == "first-vs-rest") {
    for (std::size_t b = 1; b < trees.size(); ++b) index_pairs.emplace_back(0, b);
  } else {
    throw InputError("--pairs must be 'all' or 'first-vs-rest'");
  }

  ResultTable table;
  table.columns = {"id1", "id2", "metric", "value"};
  for (const auto& [a, b] : index_pairs) {
    double value;
    if (metric == Metric::BP) {
      value = static_cast<double>(bp_distance(degapped.records[a].second,
                                              degapped.records[b].second));
    } else {
      value = tree_distance(trees[a].second, trees[b].second, metric);
    }
    table.rows.push_back(
        {trees[a].first, trees[b].first, args.metric, format_number(value)});
  }
  write_results(table, args.out.out, args.out.json);
}

// ---------------------------------------------------------------------------
// median

struct MedianArgs {
  fs::path input;
  std::string metric = "rf";
  std::string constraint = "nc";
  OutputOptions out;
};

void run_median(const MedianArgs& args) {
  if (args.metric == "re")
    throw InputError("unsupported: the RE median is an open problem");
  const Metric metric = metric_from_string(args.metric);
  if (metric != Metric::RF && metric != Metric::IL)
    throw InputError("--metric must be 'rf' or 'il'");
  const Constraint constraint = constraint_from_string(args.constraint);
  if (constraint != Constraint::NC && constraint != Constraint::ILC)
    throw InputError("--constraint must be 'nc' or 'ilc'");

  const auto named = load_trees(args.input);
  std::vector<RnaTree> trees;
  for (const auto& [id, t] : named) trees.push_back(t);

  RnaTree median = trees.front();
  double cost = 0;
  if (metric == Metric::RF && constraint == Constraint::NC) {
    median = rf_nc_median(trees);
    cost = mcost(median, trees, Metric::RF);
  } else {
    const MedianResult r = metric == Metric::RF
                               ? rf_ilc_median(trees)
                               : (constraint == Constraint::NC ? il_nc_median(trees)
                                                               : il_ilc_median(trees));
    median = r.tree;
    cost = static_cast<double>(r.mcost);
  }

  ResultTable table;
  table.columns = {"metric", "constraint", "mcost", "dotbracket"};
  table.rows.push_back({args.metric, args.constraint, format_number(cost),
                        to_structure(median).to_dotbracket()});
  write_results(table, args.out.out, args.out.json);
}

// ---------------------------------------------------------------------------
// smallpars

struct SmallparsArgs {
  fs::path structures;
  fs::path tree;
  std::string metric = "rf";
  std::string constraint = "nc";
  std::string solver = "exact";
  int max_rounds = 50;
  OutputOptions out;
};

Assignment solve_smallpars(const Phylogeny& phy, const LeafTrees& leaves,
                           const std::string& solver, Metric metric,
                           Constraint constraint, int max_rounds) {
  if (solver == "exact") {
    if (metric != Metric::RF || constraint != Constraint::NC)
      throw InputError("no exact solver for " + std::string(to_string(metric)) + "/" +
                       std::string(to_string(constraint)) +
                       "; 'exact' supports rf/nc only");
    return rf_nc_sp(phy, leaves);
  }
  if (solver == "leaf-restricted") return leaf_restricted_sp(phy, leaves, metric);
  if (solver == "median-heuristic") {
    const Assignment init = leaf_restricted_sp(phy, leaves, metric);
    return median_heuristic_sp(phy, leaves, metric, constraint, init, max_rounds);
  }
  throw InputError("--solver must be exact, median-heuristic or leaf-restricted");
}

void check_leaf_ids(const Phylogeny& phy,
                    const std::vector<std::pair<std::string, RnaTree>>& records) {
  std::vector<std::string> structure_ids, leaf_ids;
  for (const auto& [id, t] : records) structure_ids.push_back(id);
  for (int v : phy.leaves()) leaf_ids.push_back(phy.node(v).label);
  std::sort(structure_ids.begin(), structure_ids.end());
  std::sort(leaf_ids.begin(), leaf_ids.end());
  if (structure_ids == leaf_ids) return;
  std::string message = "structure ids and phylogeny leaves disagree;";
  for (const std::string& id : structure_ids) {
    if (!std::binary_search(leaf_ids.begin(), leaf_ids.end(), id))
      message += " structure '" + id + "' has no leaf;";
  }
  for (const std::string& id : leaf_ids) {
    if (!std::binary_search(structure_ids.begin(), structure_ids.end(), id))
      message += " leaf '" + id + "' has no structure;";
  }
  throw InputError(message);
}

void run_smallpars(const SmallparsArgs& args) {
  const auto records = load_trees(args.structures);
  const Phylogeny phy = read_newick(args.tree);
  check_leaf_ids(phy, records);
  LeafTrees leaves(records.begin(), records.end());

  const Metric metric = metric_from_string(args.metric);
  const Constraint constraint = constraint_from_string(args.constraint);
  const Assignment assignment =
      solve_smallpars(phy, leaves, args.solver, metric, constraint, args.max_rounds);

  ResultTable table;
  table.columns = {"node_id", "depth", "num_base_pairs", "dotbracket",
                   "spcost", "spcost_per_edge"};
  const std::vector<int> depth = phy.depths();
  for (int v = 0; v < phy.size(); ++v) {
    const RnaTree& t = assignment.trees[static_cast<std::size_t>(v)];
    table.rows.push_back({node_display_id(phy, v),
                          std::to_string(depth[static_cast<std::size_t>(v)]),
                          std::to_string(t.num_base_pairs()),
                          to_structure(t).to_dotbracket(), "", ""});
  }
  const double per_edge =
      phy.num_edges() > 0 ? assignment.sp_cost / phy.num_edges() : 0.0;
  table.rows.push_back({"summary", "", "", "", format_number(assignment.sp_cost),
                        format_number(per_edge)});
  write_results(table, args.out.out, args.out.json);
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  int length = 100;
  int theta = 3;
  int height = 5;
  std::uint64_t seed = 1;
  int replicates = 1;
  fs::path out_dir;
};

void run_sample(const SampleArgs& args) {
  if (args.length < 1) throw InputError("--length must be positive");
  if (args.replicates < 1) throw InputError("--replicates must be positive");
  fs::create_directories(args.out_dir);
  for (int r = 0; r < args.replicates; ++r) {
    char name[16];
    std::snprintf(name, sizeof name, "rep%03d", r);
    const fs::path dir = args.out_dir / name;
    fs::create_directories(dir);
    SamplerConfig config{args.length, args.theta, args.height,
                         split_seed(args.seed, static_cast<std::uint64_t>(r))};
    const SampledPhylogeny sampled = sample_phylogeny(config);

    std::ofstream structures(dir / "structures.fa", std::ios::binary);
    if (!structures) throw InputError("cannot write " + (dir / "structures.fa").string());
    for (const auto& [id, s] : sampled.leaf_structures)
      structures << '>' << id << '\n' << s.to_dotbracket() << '\n';

    std::ofstream tree(dir / "tree.nwk", std::ios::binary);
    if (!tree) throw InputError("cannot write " + (dir / "tree.nwk").string());
    tree << to_newick(sampled.phylogeny) << '\n';

    nlohmann::json meta{{"length", args.length},   {"theta", args.theta},
                        {"height", args.height},   {"seed", args.seed},
                        {"replicate", r},          {"stream_seed", config.seed}};
    std::ofstream meta_out(dir / "meta.json", std::ios::binary);
    meta_out << meta.dump(2) << '\n';
  }
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
  fs::path data_dir;
  std::vector<std::string> methods = {"rf_nc", "il_nc", "il_ilc", "rf_ilc"};
  int max_rounds = 50;
  OutputOptions out;
};

Assignment run_method(const std::string& method, const Phylogeny& phy,
                      const LeafTrees& leaves, int max_rounds) {
  if (method == "rf_nc") return rf_nc_sp(phy, leaves);
  if (method == "re") return leaf_restricted_sp(phy, leaves, Metric::RE);
  const auto heuristic = [&](Metric metric, Constraint constraint) {
    const Assignment init = leaf_restricted_sp(phy, leaves, metric);
    return median_heuristic_sp(phy, leaves, metric, constraint, init, max_rounds);
  };
  if (method == "il_nc") return heuristic(Metric::IL, Constraint::NC);
  if (method == "il_ilc") return heuristic(Metric::IL, Constraint::ILC);
  if (method == "rf_ilc") return heuristic(Metric::RF, Constraint::ILC);
  throw InputError("unknown method '" + method +
                   "' (expected rf_nc, il_nc, il_ilc, rf_ilc or re)");
}

void run_experiment(const ExperimentArgs& args) {
  struct Family {
    std::string name;
    fs::path structures;
    fs::path tree;
  };
  std::vector<Family> families;
  const auto has_inputs = [](const fs::path& dir) {
    return fs::exists(dir / "structures.fa") && fs::exists(dir / "tree.nwk");
  };
  if (has_inputs(args.data_dir)) {
    families.push_back({args.data_dir.filename().string(),
                        args.data_dir / "structures.fa", args.data_dir / "tree.nwk"});
  } else if (fs::is_directory(args.data_dir)) {
    for (const auto& entry : fs::directory_iterator(args.data_dir)) {
      if (entry.is_directory() && has_inputs(entry.path()))
        families.push_back({entry.path().filename().string(),
                            entry.path() / "structures.fa", entry.path() / "tree.nwk"});
    }
    std::sort(families.begin(), families.end(),
              [](const Family& a, const Family& b) { return a.name < b.name; });
  }
  bool any_method = false;
  for (const std::string& m : args.methods) any_method |= !m.empty();
  if (families.empty() && any_method)
    throw InputError("no dataset found under " + args.data_dir.string() +
                     " (expected structures.fa and tree.nwk)");

  struct Task {
    std::size_t family;
    std::string method;
  };
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < families.size(); ++f)
    for (const std::string& m : args.methods)
      if (!m.empty()) tasks.push_back({f, m});

  std::vector<std::vector<std::vector<std::string>>> rows_per_task(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) break;
      const Task& task = tasks[k];
      const Family& family = families[task.family];
      const auto records = load_trees(family.structures);
      const Phylogeny phy = read_newick(family.tree);
      check_leaf_ids(phy, records);
      const LeafTrees leaves(records.begin(), records.end());

      const auto start = std::chrono::steady_clock::now();
      const Assignment assignment = run_method(task.method, phy, leaves, args.max_rounds);
      const double wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count();

      const std::vector<int> height = phy.heights();
      const int max_height = *std::max_element(height.begin(), height.end());
      const double per_edge =
          phy.num_edges() > 0 ? assignment.sp_cost / phy.num_edges() : 0.0;
      for (int h = 0; h <= max_height; ++h) {
        double total_bp = 0, max_bp = 0;
        int count = 0;
        for (int v = 0; v < phy.size(); ++v) {
          if (height[static_cast<std::size_t>(v)] != h) continue;
          const double bp = assignment.trees[static_cast<std::size_t>(v)].num_base_pairs();
          total_bp += bp;
          max_bp = std::max(max_bp, bp);
          ++count;
        }
        if (count == 0) continue;
        rows_per_task[k].push_back({family.name, task.method, std::to_string(h),
                                    format_number(total_bp / count), format_number(max_bp),
                                    format_number(per_edge), format_number(wall_ms)});
      }
    }
  };
  std::vector<std::thread> pool;
  const int threads = thread_budget(tasks.size());
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  ResultTable table;
  table.columns = {"replicate", "method",          "node_height", "mean_bp",
                   "max_bp",    "spcost_per_edge", "wall_ms"};
  for (const auto& rows : rows_per_task)
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  std::sort(table.rows.begin(), table.rows.end());
  write_results(table, args.out.out, args.out.json);
}

// ---------------------------------------------------------------------------
// hidden oracle helpers

struct OracleArgs {
  int length = 6;
  int theta = 0;
  int cap = 12;
  fs::path input;
  std::string metric = "rf";
  std::string constraint = "nc";
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Median and small parsimony solvers for aligned RNA secondary structures"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read flags from a key=value file ([subcommand] sections)");

  DistanceArgs distance_args;
  CLI::App* distance = app.add_subcommand("distance", "Pairwise distances between structures");
  distance->add_option("--input", distance_args.input, "FASTA-like structure file")
      ->required();
  distance->add_option("--metric", distance_args.metric, "rf, il, re or bp")
      ->check(CLI::IsMember({"rf", "il", "re", "bp"}));
  distance->add_option("--pairs", distance_args.pairs, "all or first-vs-rest")
      ->check(CLI::IsMember({"all", "first-vs-rest"}));
  add_output_flags(distance, distance_args.out);

  MedianArgs median_args;
  CLI::App* median = app.add_subcommand("median", "Median structure of a set of structures");
  median->add_option("--input", median_args.input, "FASTA-like structure file")->required();
  median->add_option("--metric", median_args.metric, "rf or il (re is an open problem)");
  median->add_option("--constraint", median_args.constraint, "nc or ilc");
  add_output_flags(median, median_args.out);

  SmallparsArgs smallpars_args;
  CLI::App* smallpars =
      app.add_subcommand("smallpars", "Ancestral structures over a phylogeny");
  smallpars->add_option("--structures", smallpars_args.structures, "FASTA-like structure file")
      ->required();
  smallpars->add_option("--tree", smallpars_args.tree, "Newick phylogeny")->required();
  smallpars->add_option("--metric", smallpars_args.metric, "rf, il or re");
  smallpars->add_option("--constraint", smallpars_args.constraint, "nc or ilc");
  smallpars->add_option("--solver", smallpars_args.solver,
                        "exact, median-heuristic or leaf-restricted");
  smallpars->add_option("--max-rounds", smallpars_args.max_rounds,
                        "Improvement passes for the heuristic");
  add_output_flags(smallpars, smallpars_args.out);

  SampleArgs sample_args;
  CLI::App* sample = app.add_subcommand("sample", "Generate random datasets");
  sample->add_option("--length", sample_args.length, "Structure length");
  sample->add_option("--theta", sample_args.theta, "Minimum hairpin loop size");
  sample->add_option("--height", sample_args.height, "Complete binary phylogeny height");
  sample->add_option("--seed", sample_args.seed, "Random seed");
  sample->add_option("--replicates", sample_args.replicates, "Number of replicates");
  sample->add_option("--out-dir", sample_args.out_dir, "Output directory")->required();

  ExperimentArgs experiment_args;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run method combinations over a dataset");
  experiment->add_option("--data-dir", experiment_args.data_dir,
                         "Dataset directory (replicate subdirectories or a single family)")
      ->required();
  experiment
      ->add_option("--methods", experiment_args.methods,
                   "Comma-separated subset of rf_nc,il_nc,il_ilc,rf_ilc,re")
      ->delimiter(',');
  experiment->add_option("--max-rounds", experiment_args.max_rounds,
                         "Improvement passes for the heuristics");
  add_output_flags(experiment, experiment_args.out);

  OracleArgs oracle_args;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Brute-force reference tools");
  oracle_cmd->group("");  // hidden
  CLI::App* oracle_count = oracle_cmd->add_subcommand("count", "Count structures");
  oracle_count->add_option("--length", oracle_args.length);
  oracle_count->add_option("--theta", oracle_args.theta);
  CLI::App* oracle_enum = oracle_cmd->add_subcommand("enumerate", "List structures");
  oracle_enum->add_option("--length", oracle_args.length);
  oracle_enum->add_option("--theta", oracle_args.theta);
  oracle_enum->add_option("--cap", oracle_args.cap);
  CLI::App* oracle_median = oracle_cmd->add_subcommand("brute-median", "Exhaustive median");
  oracle_median->add_option("--input", oracle_args.input)->required();
  oracle_median->add_option("--metric", oracle_args.metric);
  oracle_median->add_option("--constraint", oracle_args.constraint);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (*distance) run_distance(distance_args);
    if (*median) run_median(median_args);
    if (*smallpars) run_smallpars(smallpars_args);
    if (*sample) run_sample(sample_args);
    if (*experiment) run_experiment(experiment_args);
    if (*oracle_cmd) {
      if (*oracle_count) {
        std::cout << count_structures(oracle_args.length, oracle_args.theta).to_string()
                  << '\n';
      } else if (*oracle_enum) {
        for (const SecondaryStructure& s : oracle::enumerate_structures(
                 oracle_args.length, oracle_args.theta, oracle_args.cap))
          std::cout << s.to_dotbracket() << '\n';
      } else if (*oracle_median) {
        const auto named = load_trees(oracle_args.input);
        std::vector<RnaTree> trees;
        for (const auto& [id, t] : named) trees.push_back(t);
        const auto r = oracle::brute_median(trees, metric_from_string(oracle_args.metric),
                                            constraint_from_string(oracle_args.constraint));
        std::cout << format_number(r.cost) << ','
                  << to_structure(r.tree).to_dotbracket() << '\n';
      } else {
        throw InputError("oracle needs a subcommand: count, enumerate or brute-median");
      }
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
