#include "doctest.h"

#include <algorithm>

#include "rnapars/errors.hpp"
#include "rnapars/oracle.hpp"
#include "rnapars/rna_tree.hpp"
#include "rnapars/sampling.hpp"
#include "rnapars/structure.hpp"

using namespace rnapars;

namespace {

using Pairs = std::vector<std::pair<int, int>>;

RnaTree tree_of(const std::string& db) { return to_tree(parse_dotbracket(db)); }

InternalLeafset il(std::vector<int> members) { return InternalLeafset{std::move(members)}; }

}  // namespace

TEST_CASE("parse_dotbracket") {
  const SecondaryStructure s = parse_dotbracket("((..))");
  CHECK(s.length() == 6);
  CHECK(s.pairs() == Pairs{{1, 6}, {2, 5}});

  const SecondaryStructure dots = parse_dotbracket("......");
  CHECK(dots.length() == 6);
  CHECK(dots.pairs().empty());

  CHECK_THROWS_AS(parse_dotbracket("((.)"), InputError);
  CHECK_THROWS_AS(parse_dotbracket(".)."), InputError);
  CHECK_THROWS_AS(parse_dotbracket("(<.>)"), InputError);
  CHECK(parse_dotbracket("((..))").to_dotbracket() == "((..))");
}

TEST_CASE("to_tree realizes nesting as ancestry") {
  const RnaTree t = tree_of("((..))");
  CHECK(t.leaf_lo() == 0);
  CHECK(t.leaf_hi() == 7);
  CHECK(t.internal_nodes() == Pairs{{0, 7}, {1, 6}, {2, 5}});
  const auto ils = internal_leafsets(t);
  CHECK(ils[2] == il({2, 3, 4, 5}));

  const RnaTree flat = tree_of("......");
  CHECK(flat.internal_nodes() == Pairs{{0, 7}});
  CHECK(internal_leafsets(flat)[0] == il({0, 1, 2, 3, 4, 5, 6, 7}));

  const RnaTree two = tree_of("(.)(.)");
  CHECK(two.internal_nodes() == Pairs{{0, 7}, {1, 3}, {4, 6}});
  CHECK(internal_leafsets(two)[0] == il({0, 7}));
}

TEST_CASE("to_structure inverts to_tree") {
  CHECK(to_structure(tree_of("((..))")).pairs() == Pairs{{1, 6}, {2, 5}});
  CHECK(to_structure(RnaTree(0, 7, {{0, 7}})).pairs().empty());
  CHECK(to_structure(tree_of("(.)(.)")).pairs() == Pairs{{1, 3}, {4, 6}});
  CHECK_THROWS(to_structure(RnaTree(1, 5, {{1, 5}})));
}

TEST_CASE("descendant leafsets") {
  CHECK(descendant_leafsets(tree_of("((..))")) ==
        std::vector<LeafInterval>{{0, 7}, {1, 6}, {2, 5}});
  CHECK(descendant_leafsets(tree_of("......")) == std::vector<LeafInterval>{{0, 7}});
  CHECK(descendant_leafsets(tree_of("(.)(.)")) ==
        std::vector<LeafInterval>{{0, 7}, {1, 3}, {4, 6}});
}

TEST_CASE("internal leafsets of (....)") {
  const auto ils = internal_leafsets(tree_of("(....)"));
  REQUIRE(ils.size() == 2);
  CHECK(ils[0] == il({0, 7}));
  CHECK(ils[1] == il({1, 2, 3, 4, 5, 6}));
}

TEST_CASE("dl_conflict") {
  CHECK(!dl_conflict({1, 6}, {2, 5}));
  CHECK(dl_conflict({1, 4}, {3, 6}));
  CHECK(!dl_conflict({1, 3}, {4, 6}));
  CHECK(!dl_conflict({1, 3}, {1, 3}));
  CHECK(dl_conflict({3, 6}, {1, 4}));  // symmetric
}

TEST_CASE("il_conflict") {
  CHECK(!il_conflict(il({0, 7}), il({1, 6})));
  CHECK(il_conflict(il({1, 4}), il({3, 6})));
  CHECK(il_conflict(il({1, 6}), il({1, 3})));
  CHECK(il_conflict(il({3, 6}), il({1, 4})));  // symmetric
  CHECK(!il_conflict(il({1, 2}), il({4, 6})));
}

TEST_CASE("gaps") {
  CHECK(gaps(il({0, 7})) == std::vector<LeafInterval>{{1, 6}});
  CHECK(gaps(il({1, 2, 3})).empty());
  CHECK(gaps(il({0, 3, 7})) == std::vector<LeafInterval>{{1, 2}, {4, 6}});
}

TEST_CASE("tree_from_dls") {
  CHECK(tree_from_dls({{0, 7}, {1, 6}}, {0, 7}) == tree_of("(....)"));
  CHECK(tree_from_dls({{0, 7}}, {0, 7}).num_base_pairs() == 0);
  CHECK_THROWS_AS(tree_from_dls({{0, 7}, {1, 4}, {3, 6}}, {0, 7}), std::invalid_argument);
  CHECK_THROWS_AS(tree_from_dls({{1, 6}}, {0, 7}), std::invalid_argument);
  // Nested intervals sharing an endpoint cannot be spans of distinct nodes.
  CHECK_THROWS_AS(tree_from_dls({{0, 7}, {1, 6}, {1, 4}}, {0, 7}), std::invalid_argument);
}

TEST_CASE("tree_from_ils") {
  CHECK(tree_from_ils({il({0, 7}), il({1, 6}), il({2, 3, 4, 5})}) == tree_of("((..))"));
  CHECK(tree_from_ils({il({0, 1, 2, 3, 4, 5, 6, 7})}).num_base_pairs() == 0);
  CHECK(tree_from_ils({il({0, 7}), il({1, 2}), il({3, 6}), il({4, 5})}) ==
        tree_of("()(())"));
  CHECK_THROWS_AS(tree_from_ils({il({0, 7}), il({1, 6})}), std::invalid_argument);
  CHECK_THROWS_AS(tree_from_ils({il({0, 7}), il({1, 2, 3, 4, 5}), il({6})}),
                  std::invalid_argument);
  // Endpoints in different sets do not form a rooted tree.
  CHECK_THROWS_AS(tree_from_ils({il({0, 3}), il({1, 2}), il({4, 7}), il({5, 6})}),
                  std::invalid_argument);
}

TEST_CASE("round trips hold on sampled structures of realistic length") {
  // Exhaustive coverage stops at n = 8; spot-check the same identities on
  // long sampled structures.
  rnapars::StructureSampler sampler(250, 3, 424242);
  for (int k = 0; k < 10; ++k) {
    const SecondaryStructure s = sampler.sample();
    const RnaTree t = to_tree(s);
    CHECK(to_structure(t) == s);
    CHECK(parse_dotbracket(s.to_dotbracket()) == s);
    CHECK(tree_from_ils(internal_leafsets(t)) == t);
    CHECK(tree_from_dls(descendant_leafsets(t), {0, 251}) == t);
  }
}

TEST_CASE("round trips hold for every structure up to n = 8") {
  for (int n = 0; n <= 8; ++n) {
    for (const SecondaryStructure& s : oracle::enumerate_structures(n)) {
      const RnaTree t = to_tree(s);
      CHECK(to_structure(t) == s);

      const auto dls = descendant_leafsets(t);
      CHECK(tree_from_dls(dls, {0, n + 1}) == t);

      const auto ils = internal_leafsets(t);
      CHECK(tree_from_ils(ils) == t);

      CHECK(ils.size() == dls.size());
      CHECK(static_cast<int>(ils.size()) == static_cast<int>(s.pairs().size()) + 1);

      // DLs are pairwise conflict-free, ILs form a structural partition.
      std::size_t members = 0;
      for (std::size_t a = 0; a < ils.size(); ++a) {
        CHECK(ils[a].members.size() >= 2);
        members += ils[a].members.size();
        for (std::size_t b = a + 1; b < ils.size(); ++b) {
          CHECK(!dl_conflict(dls[a], dls[b]));
          CHECK(!il_conflict(ils[a], ils[b]));
        }
      }
      CHECK(members == static_cast<std::size_t>(n) + 2);
    }
  }
}
