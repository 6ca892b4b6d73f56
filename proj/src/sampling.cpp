#include "rnapars/sampling.hpp"

#include <stdexcept>

namespace rnapars {

namespace {

// counts[m] = counts[m-1] + sum over t of counts[t-2] * counts[m-t], pairing
// the first position with position t; the hairpin gate forces t - 2 >= theta.
std::vector<BigUint> structure_counts(int n, int theta) {
  std::vector<BigUint> counts(static_cast<std::size_t>(n) + 1);
  counts[0] = BigUint(1);
  for (int m = 1; m <= n; ++m) {
    BigUint total = counts[static_cast<std::size_t>(m - 1)];
    for (int t = theta + 2; t <= m; ++t) {
      total += counts[static_cast<std::size_t>(t - 2)] *
               counts[static_cast<std::size_t>(m - t)];
    }
    counts[static_cast<std::size_t>(m)] = total;
  }
  return counts;
}

BigUint random_below(const BigUint& bound, std::mt19937_64& rng) {
  if (bound.is_zero()) throw std::logic_error("random_below(0)");
  const std::size_t bits = bound.bit_length();
  while (true) {
    std::vector<bool> draw(bits);
    std::uint64_t word = 0;
    int remaining = 0;
    for (std::size_t i = 0; i < bits; ++i) {
      if (remaining == 0) {
        word = rng();
        remaining = 64;
      }
      draw[i] = word & 1;
      word >>= 1;
      --remaining;
    }
    BigUint value = BigUint::from_bits(draw);
    if (value < bound) return value;
  }
}

}  // namespace

BigUint count_structures(int n, int theta) {
  if (n < 0) throw std::invalid_argument("length must be nonnegative");
  if (theta < 0) throw std::invalid_argument("theta must be nonnegative");
  return structure_counts(n, theta).back();
}

StructureSampler::StructureSampler(int length, int theta, std::uint64_t seed)
    : length_(length), theta_(theta), counts_(structure_counts(length, theta)), rng_(seed) {
  if (length < 1) throw std::invalid_argument("length must be positive");
}

SecondaryStructure StructureSampler::sample() {
  std::vector<std::pair<int, int>> pairs;
  // Stack of (offset, window length) still to be realized.
  std::vector<std::pair<int, int>> todo{{0, length_}};
  while (!todo.empty()) {
    const auto [offset, m] = todo.back();
    todo.pop_back();
    if (m == 0) continue;
    BigUint r = random_below(counts_[static_cast<std::size_t>(m)], rng_);
    if (r < counts_[static_cast<std::size_t>(m - 1)]) {
      todo.emplace_back(offset + 1, m - 1);  // first position unpaired
      continue;
    }
    r -= counts_[static_cast<std::size_t>(m - 1)];
    bool placed = false;
    for (int t = theta_ + 2; t <= m; ++t) {
      const BigUint block = counts_[static_cast<std::size_t>(t - 2)] *
                            counts_[static_cast<std::size_t>(m - t)];
      if (r < block) {
        pairs.emplace_back(offset + 1, offset + t);
        todo.emplace_back(offset + 1, t - 2);
        todo.emplace_back(offset + t, m - t);
        placed = true;
        break;
      }
      r -= block;
    }
    if (!placed) throw std::logic_error("sampler fell past its own counts");
  }
  return SecondaryStructure(length_, std::move(pairs));
}

SecondaryStructure sample_structure(const SamplerConfig& config) {
  StructureSampler sampler(config.length, config.theta, config.seed);
  return sampler.sample();
}

SampledPhylogeny sample_phylogeny(const SamplerConfig& config) {
  if (config.height < 1) throw std::invalid_argument("height must be >= 1");
  SampledPhylogeny out;
  // Complete binary tree, leaves labelled left to right.
  int leaf_counter = 0;
  struct Frame {
    int parent;
    int depth;
  };
  std::vector<Frame> stack{{-1, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth == config.height) {
      out.phylogeny.add_node(f.parent, "leaf" + std::to_string(leaf_counter++));
    } else {
      const int v = out.phylogeny.add_node(f.parent);
      // Push right child first so the left subtree is built first.
      stack.push_back({v, f.depth + 1});
      stack.push_back({v, f.depth + 1});
    }
  }
  StructureSampler sampler(config.length, config.theta, config.seed);
  for (int v : out.phylogeny.leaves())
    out.leaf_structures.emplace_back(out.phylogeny.node(v).label, sampler.sample());
  return out;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace rnapars
