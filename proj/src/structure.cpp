#include "rnapars/structure.hpp"

#include <algorithm>
#include <stdexcept>

#include "rnapars/errors.hpp"

namespace rnapars {

SecondaryStructure::SecondaryStructure(int length, std::vector<std::pair<int, int>> pairs)
    : length_(length), pairs_(std::move(pairs)) {
  if (length_ < 0) throw std::invalid_argument("structure length must be nonnegative");
  std::sort(pairs_.begin(), pairs_.end());
  std::vector<char> used(static_cast<std::size_t>(length_) + 1, 0);
  for (const auto& [i, j] : pairs_) {
    if (i < 1 || j > length_ || i >= j)
      throw std::invalid_argument("base pair out of range");
    if (used[i] || used[j]) throw std::invalid_argument("position in more than one pair");
    used[i] = used[j] = 1;
  }
  // Non-crossing: with pairs sorted by opening position, every open pair on
  // the stack must properly enclose the next one.
  std::vector<int> open;
  for (const auto& [i, j] : pairs_) {
    while (!open.empty() && open.back() < i) open.pop_back();
    if (!open.empty() && j > open.back())
      throw std::invalid_argument("crossing base pairs");
    open.push_back(j);
  }
}

std::string SecondaryStructure::to_dotbracket() const {
  std::string out(static_cast<std::size_t>(length_), '.');
  for (const auto& [i, j] : pairs_) {
    out[static_cast<std::size_t>(i) - 1] = '(';
    out[static_cast<std::size_t>(j) - 1] = ')';
  }
  return out;
}

bool SecondaryStructure::respects_theta(int theta) const {
  for (const auto& [i, j] : pairs_) {
    if (j - i - 1 < theta) return false;
  }
  return true;
}

bool SecondaryStructure::operator<(const SecondaryStructure& other) const {
  if (length_ != other.length_) return length_ < other.length_;
  return pairs_ < other.pairs_;
}

SecondaryStructure parse_dotbracket(std::string_view text) {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> open;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    const int col = static_cast<int>(k) + 1;
    if (c == '(') {
      open.push_back(col);
    } else if (c == ')') {
      if (open.empty())
        throw InputError("unbalanced ')' at column " + std::to_string(col));
      pairs.emplace_back(open.back(), col);
      open.pop_back();
    } else if (c != '.') {
      throw InputError(std::string("illegal character '") + c + "' at column " +
                       std::to_string(col));
    }
  }
  if (!open.empty())
    throw InputError("unbalanced '(' at column " + std::to_string(open.back()));
  return SecondaryStructure(static_cast<int>(text.size()), std::move(pairs));
}

}  // namespace rnapars
