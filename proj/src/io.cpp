#include "rnapars/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rnapars/errors.hpp"

namespace rnapars {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::vector<StructureRecord> parse_structures(std::string_view text) {
  std::vector<StructureRecord> records;
  std::set<std::string> seen;
  std::optional<std::string> pending_id;
  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    if (line[0] == '>') {
      if (pending_id) throw InputError("record '" + *pending_id + "' has no structure line");
      std::string id = line.substr(1);
      while (!id.empty() && (id.back() == ' ' || id.back() == '\t')) id.pop_back();
      std::size_t lead = id.find_first_not_of(" \t");
      id = lead == std::string::npos ? "" : id.substr(lead);
      if (id.empty()) throw InputError("empty record id");
      if (!seen.insert(id).second) throw InputError("duplicate record id '" + id + "'");
      pending_id = std::move(id);
    } else {
      if (!pending_id) throw InputError("structure line before any '>' header");
      for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (c != '(' && c != ')' && c != '.' && c != '-')
          throw InputError("record '" + *pending_id + "': illegal character '" +
                           std::string(1, c) + "' at column " + std::to_string(k + 1));
      }
      records.push_back({*pending_id, line});
      pending_id.reset();
    }
  }
  if (pending_id) throw InputError("record '" + *pending_id + "' has no structure line");
  if (records.empty()) throw InputError("no structure records found");
  for (const StructureRecord& r : records) {
    if (r.aligned.size() != records.front().aligned.size())
      throw InputError("record '" + r.id + "' has length " +
                       std::to_string(r.aligned.size()) + ", expected " +
                       std::to_string(records.front().aligned.size()));
  }
  return records;
}

std::vector<StructureRecord> read_structures(const std::filesystem::path& path) {
  return parse_structures(slurp(path));
}

DegapResult degap(const std::vector<StructureRecord>& records) {
  if (records.empty()) throw InputError("no records to degap");
  const std::size_t width = records.front().aligned.size();
  std::vector<char> keep(width, 1);
  for (const StructureRecord& r : records) {
    for (std::size_t k = 0; k < width; ++k)
      if (r.aligned[k] == '-') keep[k] = 0;
  }
  std::vector<int> new_pos(width, 0);  // 1-based position after degapping
  int cursor = 0;
  for (std::size_t k = 0; k < width; ++k) new_pos[k] = keep[k] ? ++cursor : 0;
  if (cursor == 0) throw InputError("every column is gapped");

  DegapResult out;
  out.dropped_columns = static_cast<int>(width) - cursor;
  for (const StructureRecord& r : records) {
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k < width; ++k) {
      if (r.aligned[k] == '(') open.push_back(k);
      if (r.aligned[k] == ')') {
        if (open.empty())
          throw InputError("record '" + r.id + "': unbalanced ')' at column " +
                           std::to_string(k + 1));
        const std::size_t i = open.back();
        open.pop_back();
        // Keep the pair only when both endpoints survive.
        if (keep[i] && keep[k]) pairs.emplace_back(new_pos[i], new_pos[k]);
      }
    }
    if (!open.empty())
      throw InputError("record '" + r.id + "': unbalanced '(' at column " +
                       std::to_string(open.back() + 1));
    out.records.emplace_back(r.id, SecondaryStructure(cursor, std::move(pairs)));
  }
  return out;
}

namespace {

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  Phylogeny parse() {
    Phylogeny phy;
    skip_space();
    parse_node(phy, -1);
    skip_space();
    if (!consume(';')) fail("expected ';'");
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    return phy;
  }

 private:
  void parse_node(Phylogeny& phy, int parent) {
    skip_space();
    const int v = phy.add_node(parent);
    if (consume('(')) {
      parse_node(phy, v);
      while (consume(',')) parse_node(phy, v);
      if (!consume(')')) fail("expected ')'");
    }
    std::string label = parse_label();
    skip_space();
    if (consume(':')) parse_number();
    if (phy.node(v).children.empty() && label.empty()) fail("unlabeled leaf");
    phy.set_label(v, std::move(label));
  }

  std::string parse_label() {
    skip_space();
    std::string out;
    if (consume('\'')) {
      while (pos_ < text_.size() && text_[pos_] != '\'') out += text_[pos_++];
      if (!consume('\'')) fail("unterminated quoted label");
      return out;
    }
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ',' || c == ')' || c == '(' || c == ':' || c == ';' || std::isspace(
              static_cast<unsigned char>(c)))
        break;
      out += c;
      ++pos_;
    }
    return out;
  }

  void parse_number() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == '-' || text_[pos_] == '+' || text_[pos_] == 'e' ||
            text_[pos_] == 'E'))
      ++pos_;
    if (pos_ == start) fail("expected branch length");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw InputError("newick parse error at position " + std::to_string(pos_ + 1) + ": " +
                     what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Phylogeny parse_newick(std::string_view text) { return NewickParser(text).parse(); }

Phylogeny read_newick(const std::filesystem::path& path) {
  return parse_newick(slurp(path));
}

namespace {

void append_newick(const Phylogeny& phy, int v, std::string& out) {
  if (!phy.is_leaf(v)) {
    out += '(';
    const auto& children = phy.node(v).children;
    for (std::size_t k = 0; k < children.size(); ++k) {
      if (k > 0) out += ',';
      append_newick(phy, children[k], out);
    }
    out += ')';
  }
  out += phy.node(v).label;
}

}  // namespace

std::string to_newick(const Phylogeny& phy) {
  std::string out;
  append_newick(phy, phy.root(), out);
  out += ';';
  return out;
}

StockholmAlignment parse_stockholm(std::string_view text) {
  StockholmAlignment out;
  std::map<std::string, std::size_t> row_index;
  for (const std::string& line : split_lines(text)) {
    if (line.empty() || line == "//") continue;
    if (line.rfind("#=GC", 0) == 0) {
      std::istringstream ss(line);
      std::string tag, feature, value;
      ss >> tag >> feature >> value;
      if (feature == "SS_cons" && !value.empty()) out.ss_cons += value;
      continue;
    }
    if (line[0] == '#') continue;
    std::istringstream ss(line);
    std::string id, seq;
    ss >> id >> seq;
    if (id.empty() || seq.empty())
      throw InputError("malformed stockholm sequence line: " + line);
    auto [it, inserted] = row_index.try_emplace(id, out.rows.size());
    if (inserted)
      out.rows.emplace_back(id, seq);
    else
      out.rows[it->second].second += seq;  // interleaved block
  }
  if (out.rows.empty()) throw InputError("no sequence rows in stockholm input");
  if (out.ss_cons.empty()) throw InputError("missing #=GC SS_cons line");
  for (const auto& [id, seq] : out.rows) {
    if (seq.size() != out.ss_cons.size())
      throw InputError("row '" + id + "' has length " + std::to_string(seq.size()) +
                       ", consensus has " + std::to_string(out.ss_cons.size()));
  }
  // WUSS normalization.
  for (char& c : out.ss_cons) {
    if (c == '<' || c == '(')
      c = '(';
    else if (c == '>' || c == ')')
      c = ')';
    else
      c = '.';
  }
  return out;
}

StockholmAlignment read_stockholm(const std::filesystem::path& path) {
  return parse_stockholm(slurp(path));
}

namespace {

bool canonical_pair(char a, char b) {
  auto normalize = [](char c) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return c == 'T' ? 'U' : c;
  };
  const char x = normalize(a), y = normalize(b);
  return (x == 'A' && y == 'U') || (x == 'U' && y == 'A') || (x == 'G' && y == 'C') ||
         (x == 'C' && y == 'G') || (x == 'G' && y == 'U') || (x == 'U' && y == 'G');
}

bool is_gap(char c) { return c == '-' || c == '.' || c == '_' || c == '~'; }

}  // namespace

std::vector<StructureRecord> project_consensus(const StockholmAlignment& alignment) {
  const SecondaryStructure consensus = parse_dotbracket(alignment.ss_cons);
  std::vector<StructureRecord> out;
  out.reserve(alignment.rows.size());
  for (const auto& [id, seq] : alignment.rows) {
    std::string structure(seq.size(), '.');
    for (std::size_t k = 0; k < seq.size(); ++k)
      if (is_gap(seq[k])) structure[k] = '-';
    for (const auto& [i, j] : consensus.pairs()) {
      const char a = seq[static_cast<std::size_t>(i) - 1];
      const char b = seq[static_cast<std::size_t>(j) - 1];
      if (!is_gap(a) && !is_gap(b) && canonical_pair(a, b)) {
        structure[static_cast<std::size_t>(i) - 1] = '(';
        structure[static_cast<std::size_t>(j) - 1] = ')';
      }
    }
    out.push_back({id, std::move(structure)});
  }
  return out;
}

std::string format_number(double value) {
  if (value == std::floor(value) && std::abs(value) < 1e15)
    return std::to_string(static_cast<long long>(value));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const ResultTable& table, std::ostream& out) {
  for (std::size_t k = 0; k < table.columns.size(); ++k) {
    if (k > 0) out << ',';
    out << table.columns[k];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out << ',';
      out << row[k];
    }
    out << '\n';
  }
}

void write_json(const ResultTable& table, std::ostream& out) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t k = 0; k < table.columns.size() && k < row.size(); ++k)
      obj[table.columns[k]] = row[k];
    rows.push_back(std::move(obj));
  }
  out << rows.dump(2) << '\n';
}

void write_results(const ResultTable& table,
                   const std::optional<std::filesystem::path>& out_path, bool as_json) {
  if (!out_path) {
    if (as_json)
      write_json(table, std::cout);
    else
      write_csv(table, std::cout);
    return;
  }
  std::ofstream out(*out_path, std::ios::binary);
  if (!out) throw InputError("cannot write " + out_path->string());
  if (as_json)
    write_json(table, out);
  else
    write_csv(table, out);
}

}  // namespace rnapars
