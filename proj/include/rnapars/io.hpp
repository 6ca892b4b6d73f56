#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rnapars/phylogeny.hpp"
#include "rnapars/structure.hpp"

namespace rnapars {

struct StructureRecord {
  std::string id;
  std::string aligned;  // dot-bracket over {(, ), ., -}, one shared length
};

// FASTA-like structure files: ">id" lines each followed by one structure
// line. Duplicate ids, ragged lengths and stray characters are rejected.
std::vector<StructureRecord> parse_structures(std::string_view text);
std::vector<StructureRecord> read_structures(const std::filesystem::path& path);

struct DegapResult {
  std::vector<std::pair<std::string, SecondaryStructure>> records;
  int dropped_columns = 0;
};

// Removes every column gapped in any record; a pair losing exactly one
// endpoint keeps the survivor as an unpaired position.
DegapResult degap(const std::vector<StructureRecord>& records);

// Standard Newick; branch lengths are accepted and ignored, out-degree is
// unrestricted, every leaf must be labelled.
Phylogeny parse_newick(std::string_view text);
Phylogeny read_newick(const std::filesystem::path& path);

std::string to_newick(const Phylogeny& phy);

struct StockholmAlignment {
  std::vector<std::pair<std::string, std::string>> rows;  // (id, aligned sequence)
  std::string ss_cons;
};

// Stockholm 1.0 subset: sequence rows plus the "#=GC SS_cons" consensus
// line; interleaved blocks are concatenated. WUSS normalization keeps the
// two nesting bracket families ('<' and '(') as round brackets and turns
// every other annotation character into '.'.
StockholmAlignment parse_stockholm(std::string_view text);
StockholmAlignment read_stockholm(const std::filesystem::path& path);

// Projects the consensus structure onto each sequence: a consensus pair is
// kept where both columns hold nucleotides that form a canonical pair
// (AU, UA, GC, CG, GU, UG; T reads as U); otherwise both positions become
// unpaired. Gap columns of the sequence stay '-'.
std::vector<StructureRecord> project_consensus(const StockholmAlignment& alignment);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const ResultTable& table, std::ostream& out);
void write_json(const ResultTable& table, std::ostream& out);

// CSV (or JSON) to the given path, or standard output when absent.
void write_results(const ResultTable& table,
                   const std::optional<std::filesystem::path>& out_path, bool as_json);

// Shortest decimal rendering that round-trips the double.
std::string format_number(double value);

}  // namespace rnapars
