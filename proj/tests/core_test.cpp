#include <gtest/gtest.h>

#include <chrono>

#include "catalog.hpp"
#include "hbdec/core.hpp"
#include "hbdec/io.hpp"

using namespace hbdec;
namespace cat = testing_catalog;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> literals(const std::vector<FinStructure>& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(to_literal(s));
  return out;
}

std::vector<std::size_t> age_sizes(const BoundedClass& k, int upto) {
  std::vector<std::size_t> out;
  for (const auto& level : enumerate_age_upto(k, upto)) out.push_back(level.size());
  return out;
}

}  // namespace

TEST(Core, WeakOrderCollapsesToAPoint) {
  auto t0 = std::chrono::steady_clock::now();
  auto core = compute_core(cat::all().reduct("Qleq"));
  EXPECT_LT(seconds_since(t0), 1.0);
  EXPECT_EQ(serialize_pair(core.reduct_out), read_file(cat::source_dir() / "tests/golden/qleq_core.cls"));
  EXPECT_EQ(age_sizes(core.base_out, 3), (std::vector<std::size_t>{1, 1, 0, 0}));
  EXPECT_FALSE(core.witness.injective());
}

TEST(Core, StrictOrderIsItsOwnCore) {
  const auto& qlt = cat::all().reduct("Qlt");
  auto t0 = std::chrono::steady_clock::now();
  auto core = compute_core(qlt);
  EXPECT_LT(seconds_since(t0), 1.0);
  EXPECT_TRUE(core.witness.identity());
  for (int n = 0; n <= 4; ++n) {
    EXPECT_EQ(literals(enumerate_age(core.base_out, n)), literals(enumerate_age(qlt.base, n))) << "n=" << n;
  }
}

TEST(Core, RandomGraphCoreIsTheClique) {
  auto t0 = std::chrono::steady_clock::now();
  auto core = compute_core(cat::all().reduct("Random"));
  EXPECT_LT(seconds_since(t0), 1.0);
  const auto& bounds = literals(core.base_out.bounds);
  EXPECT_NE(std::find(bounds.begin(), bounds.end(), "size=2:"), bounds.end());
  EXPECT_EQ(age_sizes(core.base_out, 4), (std::vector<std::size_t>{1, 1, 1, 1, 1}));
  auto k3 = parse_literal("size=3: E(0,1) E(0,2) E(1,0) E(1,2) E(2,0) E(2,1)", core.base_out.signature);
  EXPECT_TRUE(in_age(core.base_out, k3));
}

TEST(Core, CompleteBipartiteCoreIsAnEdge) {
  auto t0 = std::chrono::steady_clock::now();
  auto core = compute_core(cat::all().reduct("Kww"));
  EXPECT_LT(seconds_since(t0), 5.0);
  EXPECT_EQ(age_sizes(core.base_out, 3), (std::vector<std::size_t>{1, 1, 1, 0}));
  auto edge = parse_literal("size=2: E(0,1) E(1,0)", core.base_out.signature);
  EXPECT_TRUE(in_age(core.base_out, edge));
}

TEST(Core, OutputsAreOptimalAndRecoringIsIdentity) {
  for (const auto& name : {"Qlt", "Qleq", "QltRev", "QltRev2", "Qneq", "Random", "Henson", "Kww", "Matching", "Point"}) {
    auto core = compute_core(cat::all().reduct(name));
    EXPECT_TRUE(is_optimally_presented(core.reduct_out).optimal) << name;
    auto again = compute_core(core.reduct_out);
    EXPECT_TRUE(again.witness.identity()) << name;
    EXPECT_EQ(literals(again.base_out.bounds), literals(core.base_out.bounds)) << name;
  }
}

TEST(Core, NonOptimalInputsAreRefuted) {
  auto report = is_optimally_presented(cat::all().reduct("Qleq"));
  EXPECT_FALSE(report.optimal);
  ASSERT_TRUE(report.refutation);
  EXPECT_FALSE(report.refutation->surjective());
  EXPECT_TRUE(is_optimally_presented(cat::all().reduct("Qlt")).optimal);
}

TEST(Core, WitnessIsRangeRigidAndPreservesRelations) {
  for (const auto& name : {"Qleq", "Random", "Kww", "Matching"}) {
    const auto& r = cat::all().reduct(name);
    auto core = compute_core(r);
    EXPECT_TRUE(core.witness.range_rigid()) << name;
    EXPECT_TRUE(preserves_all(core.witness, r)) << name;
    EXPECT_TRUE(is_realizable(core.witness)) << name;
  }
}

TEST(Core, LevelBelowDefaultIsRejected) {
  EXPECT_THROW(compute_core(cat::all().reduct("Qlt"), CoreOptions{1}), InputError);
  EXPECT_EQ(compute_core(cat::all().reduct("Qlt"), CoreOptions{3}).level, 3);
}
