#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rnapars {

// An RNA secondary structure: a sequence length n plus a set of non-crossing
// base pairs (i, j) with 1 <= i < j <= n. Positions are 1-based; every
// position belongs to at most one pair. Immutable after construction.
class SecondaryStructure {
 public:
  SecondaryStructure(int length, std::vector<std::pair<int, int>> pairs);

  int length() const { return length_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  std::string to_dotbracket() const;

  // True when every pair (i, j) encloses at least theta unpaired-or-not
  // positions, i.e. j - i - 1 >= theta.
  bool respects_theta(int theta) const;

  bool operator==(const SecondaryStructure&) const = default;
  bool operator<(const SecondaryStructure& other) const;

 private:
  int length_ = 0;
  std::vector<std::pair<int, int>> pairs_;  // sorted by opening position
};

// Parses round-bracket dot-bracket notation over {(, ), .}. Pseudoknot
// bracket alphabets are rejected; errors report the offending 1-based column.
SecondaryStructure parse_dotbracket(std::string_view text);

}  // namespace rnapars
