#include "doctest.h"

#include "rnapars/oracle.hpp"
#include "rnapars/sampling.hpp"

using namespace rnapars;

TEST_CASE("count_structures anchors") {
  CHECK(count_structures(4, 3).to_u64() == 1);
  CHECK(count_structures(5, 3).to_u64() == 2);
  CHECK(count_structures(7, 3).to_u64() == 8);
  CHECK(count_structures(0, 0).to_u64() == 1);
}

TEST_CASE("count_structures matches exhaustive enumeration up to n = 12") {
  for (int theta : {0, 3}) {
    for (int n = 0; n <= 12; ++n) {
      CHECK(count_structures(n, theta).to_u64() ==
            oracle::enumerate_structures(n, theta).size());
    }
  }
}

TEST_CASE("counting handles lengths far beyond u64") {
  // Growth is roughly exponential; just check it is monotone and large.
  const BigUint big = count_structures(200, 3);
  CHECK(big > count_structures(150, 3));
  CHECK(big.to_string().size() > 30);
}

TEST_CASE("sampling respects the hairpin gate and is deterministic") {
  SamplerConfig config{20, 3, 5, 12345};
  const SecondaryStructure a = sample_structure(config);
  const SecondaryStructure b = sample_structure(config);
  CHECK(a == b);
  CHECK(a.length() == 20);
  CHECK(a.respects_theta(3));

  StructureSampler sampler(4, 3, 777);
  for (int k = 0; k < 5; ++k) CHECK(sampler.sample().to_dotbracket() == "....");
}

TEST_CASE("two-structure case splits evenly") {
  StructureSampler sampler(5, 3, 2024);
  int paired = 0;
  const int draws = 20000;
  for (int k = 0; k < draws; ++k)
    if (!sampler.sample().pairs().empty()) ++paired;
  // Binomial(20000, 1/2): allow six sigma.
  CHECK(paired > draws / 2 - 430);
  CHECK(paired < draws / 2 + 430);
}

TEST_CASE("sample_phylogeny builds complete binary trees") {
  SamplerConfig config{12, 3, 1, 5};
  const SampledPhylogeny two = sample_phylogeny(config);
  CHECK(two.leaf_structures.size() == 2);
  CHECK(two.phylogeny.size() == 3);

  config.height = 5;
  const SampledPhylogeny big = sample_phylogeny(config);
  CHECK(big.leaf_structures.size() == 32);
  CHECK(big.phylogeny.size() == 63);
  for (const auto& [id, s] : big.leaf_structures) {
    CHECK(s.length() == 12);
    CHECK(s.respects_theta(3));
  }
  // Left-to-right leaf labels.
  CHECK(big.leaf_structures.front().first == "leaf0");
  CHECK(big.leaf_structures.back().first == "leaf31");

  const SampledPhylogeny again = sample_phylogeny(config);
  CHECK(again.leaf_structures == big.leaf_structures);
}

TEST_CASE("split_seed decorrelates replicate streams") {
  CHECK(split_seed(1, 0) != split_seed(1, 1));
  CHECK(split_seed(1, 0) != split_seed(2, 0));
  CHECK(split_seed(7, 3) == split_seed(7, 3));
}
