#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rnapars/bigint.hpp"
#include "rnapars/phylogeny.hpp"
#include "rnapars/structure.hpp"

namespace rnapars {

struct SamplerConfig {
  int length = 100;
  int theta = 3;   // minimum unpaired positions enclosed by a pair
  int height = 5;  // complete binary phylogeny height
  std::uint64_t seed = 1;
};

// Number of secondary structures of length n whose pairs (i, j) all satisfy
// j - i - 1 >= theta, counted exactly.
BigUint count_structures(int n, int theta);

// Exactly-uniform sampling by weighting each decomposition branch with its
// structure count; deterministic for a given generator state.
class StructureSampler {
 public:
  StructureSampler(int length, int theta, std::uint64_t seed);
  SecondaryStructure sample();

 private:
  int length_;
  int theta_;
  std::vector<BigUint> counts_;  // counts_[m] = structures of length m
  std::mt19937_64 rng_;
};

SecondaryStructure sample_structure(const SamplerConfig& config);

struct SampledPhylogeny {
  Phylogeny phylogeny;
  std::vector<std::pair<std::string, SecondaryStructure>> leaf_structures;
};

// Complete binary phylogeny of the configured height with an independent
// uniform structure at each leaf; leaves are labelled leaf0, leaf1, ...
SampledPhylogeny sample_phylogeny(const SamplerConfig& config);

// Derives an independent stream seed (splitmix64 step over seed and index).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace rnapars
