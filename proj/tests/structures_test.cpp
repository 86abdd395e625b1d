#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "hbdec/structures.hpp"

using namespace hbdec;

namespace {

SignaturePtr binary() { return make_signature({Symbol{"E", 2}}); }

// Orbit counting: number of isomorphism classes of binary relations on n
// points is the average number of relations fixed by a permutation.
std::size_t burnside_binary(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t total = 0;
  std::size_t count = 0;
  do {
    // A relation is fixed iff it is constant on each cycle of the induced action on pairs.
    std::set<std::pair<int, int>> seen;
    std::size_t cycles = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (seen.count({a, b})) continue;
        ++cycles;
        int x = a;
        int y = b;
        while (seen.insert({x, y}).second) {
          x = perm[x];
          y = perm[y];
        }
      }
    }
    total += std::size_t{1} << cycles;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / count;
}

// All labelled binary relations on n points, bucketed by brute-force canonical key.
std::size_t brute_iso_classes(int n) {
  auto sig = binary();
  const int pairs = n * n;
  std::set<std::vector<char>> keys;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<char> best;
    do {
      std::vector<char> key(static_cast<std::size_t>(pairs));
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) key[perm[a] * n + perm[b]] = (mask >> (a * n + b)) & 1U;
      }
      if (best.empty() || key < best) best = key;
    } while (std::next_permutation(perm.begin(), perm.end()));
    keys.insert(best);
  }
  return keys.size();
}

}  // namespace

TEST(Structures, IsomorphismClassCountsMatchOrbitCounting) {
  auto sig = binary();
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(enumerate_structures(sig, n).size(), burnside_binary(n)) << "n=" << n;
  }
  EXPECT_EQ(enumerate_structures(sig, 2).size(), 10u);
  EXPECT_EQ(enumerate_structures(sig, 3).size(), 104u);
  EXPECT_EQ(brute_iso_classes(3), 104u);
}

TEST(Structures, EmptySignatureHasOneStructurePerSize) {
  auto sig = make_signature({});
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(enumerate_structures(sig, n).size(), 1u);
}

TEST(Structures, LiteralRoundTrip) {
  auto sig = make_signature({Symbol{"R", 2}, Symbol{"P", 1}});
  FinStructure s = parse_literal("size=3: R(0,1) R(2,0) P(1)", sig);
  EXPECT_TRUE(s.holds(0, std::vector<int>{0, 1}));
  EXPECT_FALSE(s.holds(0, std::vector<int>{1, 0}));
  EXPECT_TRUE(s.holds(1, std::vector<int>{1}));
  EXPECT_EQ(parse_literal(to_literal(s), sig), s);
  EXPECT_EQ(to_literal(s), "size=3: R(0,1) R(2,0) P(1)");
}

TEST(Structures, LiteralErrors) {
  auto sig = binary();
  EXPECT_THROW(parse_literal("size=2: E(0,2)", sig), InputError);
  EXPECT_THROW(parse_literal("size=2: F(0,1)", sig), InputError);
  EXPECT_THROW(parse_literal("size=2: E(0)", sig), InputError);
  EXPECT_THROW(parse_literal("2: E(0,1)", sig), InputError);
}

TEST(Structures, CanonicalFormIsPermutationInvariant) {
  auto sig = binary();
  for (const auto& s : enumerate_structures(sig, 3)) {
    std::vector<int> perm{0, 1, 2};
    do {
      EXPECT_EQ(canonical_form(permuted(s, perm)), s);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(Structures, EmbedsAgreesWithSubsetOracle) {
  auto sig = binary();
  auto small = enumerate_structures(sig, 2);
  auto large = enumerate_structures(sig, 3);
  for (const auto& p : small) {
    for (const auto& s : large) {
      bool oracle = false;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          if (a == b) continue;
          std::vector<int> pick{a, b};
          if (isomorphic(induced(s, pick), p)) oracle = true;
        }
      }
      std::vector<int> witness;
      bool found = embeds(p, s, &witness);
      EXPECT_EQ(found, oracle);
      if (found) {
        EXPECT_EQ(induced(s, witness), p);
      }
    }
  }
}

TEST(Structures, PrunedEnumerationRespectsPredicate) {
  auto sig = binary();
  // Symmetric loopless relations: graphs on n vertices.
  auto graph = [](const FinStructure& s) {
    for (int a = 0; a < s.size(); ++a) {
      std::vector<int> aa{a, a};
      if (s.holds(0, aa)) return false;
      for (int b = 0; b < s.size(); ++b) {
        std::vector<int> ab{a, b};
        std::vector<int> ba{b, a};
        if (s.holds(0, ab) != s.holds(0, ba)) return false;
      }
    }
    return true;
  };
  std::vector<std::size_t> expected{1, 1, 2, 4, 11};
  auto levels = enumerate_structures_upto(sig, 4, graph);
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(levels[n].size(), expected[n]) << "n=" << n;
}

TEST(Structures, SignatureValidation) {
  EXPECT_THROW(make_signature({Symbol{"E", 2}, Symbol{"E", 1}}), InputError);
  auto sig = binary();
  EXPECT_EQ(sig->max_arity(), 2);
  EXPECT_EQ(sig->to_string(), "E/2");
}
