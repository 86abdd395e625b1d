#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <map>

#include "catalog.hpp"
#include "hbdec/certificate.hpp"
#include "hbdec/decide.hpp"
#include "hbdec/verify.hpp"

using namespace hbdec;
namespace cat = testing_catalog;

namespace {

const std::vector<std::string> kReducts{"Qlt",    "Qleq", "QltRev",   "QltRev2", "Qneq",
                                        "Random", "Henson", "Kww", "Matching", "Point"};

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hbdec_decide_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

Verdict bidef(const std::string& a, const std::string& b, Mode mode = Mode::fo) {
  DecideOptions opts;
  opts.mode = mode;
  return decide_bidef(cat::all().reduct(a), cat::all().reduct(b), opts);
}

// All verdicts between catalog reducts in one mode, computed once.
const std::map<std::pair<std::string, std::string>, Answer>& table(Mode mode) {
  static std::map<Mode, std::map<std::pair<std::string, std::string>, Answer>> cache;
  auto& t = cache[mode];
  if (t.empty()) {
    for (const auto& a : kReducts) {
      for (const auto& b : kReducts) t[{a, b}] = bidef(a, b, mode).answer;
    }
  }
  return t;
}

}  // namespace

TEST(Decide, OrderAndReversalAreBidefinable) {
  auto t0 = std::chrono::steady_clock::now();
  auto v = bidef("Qlt", "QltRev");
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
  ASSERT_EQ(v.answer, Answer::yes) << v.reason;
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(v.witness->xi.injective());
  EXPECT_FALSE(v.witness->xi.identity());
  EXPECT_EQ(v.witness->matching.front(), (std::pair<std::string, std::string>{"Lt", "Gt"}));
  auto dir = scratch("rev");
  write_bidef_certificate(dir, v);
  auto res = verify::check_directory(dir);
  EXPECT_TRUE(res.ok) << res.failure;
}

TEST(Decide, WeakAndStrictOrderAreNotBidefinable) {
  auto t0 = std::chrono::steady_clock::now();
  auto v = bidef("Qleq", "Qlt");
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
  EXPECT_EQ(v.answer, Answer::no);
  EXPECT_FALSE(v.witness);
  EXPECT_THROW(write_bidef_certificate(scratch("none"), v), InputError);
}

TEST(Decide, KnownVerdicts) {
  EXPECT_EQ(bidef("QltRev", "QltRev2").answer, Answer::yes);
  EXPECT_EQ(bidef("Qlt", "Qneq").answer, Answer::no);
  EXPECT_EQ(bidef("Qleq", "Point").answer, Answer::yes);
  EXPECT_EQ(bidef("Random", "Kww").answer, Answer::no);
  EXPECT_EQ(bidef("Qlt", "QltRev", Mode::pp).answer, Answer::yes);
  EXPECT_EQ(bidef("Qlt", "QltRev", Mode::ep).answer, Answer::yes);
}

TEST(Decide, ReportsCaps) {
  auto v = bidef("Qlt", "QltRev");
  EXPECT_EQ(v.caps.k, 2);
  EXPECT_EQ(v.caps.n, 2);
  EXPECT_EQ(v.caps.realize_cap_forward, 3);
  DecideOptions bad;
  bad.n = 3;
  EXPECT_THROW(decide_bidef(cat::all().reduct("Qlt"), cat::all().reduct("Qneq"), bad), InputError);
}

TEST(Decide, EquivalenceAcrossCatalog) {
  for (Mode mode : {Mode::fo, Mode::ep}) {
    const auto& t = table(mode);
    for (const auto& a : kReducts) {
      EXPECT_EQ(t.at({a, a}), Answer::yes) << to_string(mode) << " " << a;
      for (const auto& b : kReducts) {
        EXPECT_EQ(t.at({a, b}), t.at({b, a})) << to_string(mode) << " " << a << " " << b;
        if (t.at({a, b}) != Answer::yes) continue;
        for (const auto& c : kReducts) {
          if (t.at({b, c}) == Answer::yes) {
            EXPECT_EQ(t.at({a, c}), Answer::yes) << to_string(mode) << " " << a << " " << b << " " << c;
          }
        }
      }
    }
  }
}

TEST(Decide, YesCertificatesVerify) {
  int checked = 0;
  for (const auto& a : kReducts) {
    for (const auto& b : kReducts) {
      if (table(Mode::fo).at({a, b}) != Answer::yes) continue;
      auto v = bidef(a, b);
      auto dir = scratch("all");
      write_bidef_certificate(dir, v);
      auto res = verify::check_directory(dir);
      EXPECT_TRUE(res.ok) << a << " " << b << ": " << res.failure;
      ++checked;
    }
  }
  EXPECT_GT(checked, static_cast<int>(kReducts.size()));
}

TEST(Decide, BiinterpretabilityPreconditions) {
  const auto& doc = cat::all();
  DecideOptions opts;
  auto v = decide_biint(doc.reduct("Matching"), doc.reduct("Qlt"), opts);
  EXPECT_EQ(v.answer, Answer::precondition_failed);
  ASSERT_TRUE(v.amalgamation);
  EXPECT_FALSE(v.amalgamation->pass);
  auto w = decide_biint(doc.reduct("Qlt"), doc.reduct("QltRev"), opts);
  EXPECT_EQ(w.answer, Answer::yes);
  EXPECT_GT(w.caps.ap_cap, 0);
  opts.mode = Mode::pp;
  EXPECT_EQ(decide_biint(doc.reduct("Qlt"), doc.reduct("QltRev"), opts).answer, Answer::yes);
}

TEST(Decide, ModeNames) {
  EXPECT_EQ(parse_mode("pp"), Mode::pp);
  EXPECT_EQ(to_string(Mode::ep), "ep");
  EXPECT_EQ(to_string(Answer::precondition_failed), "PRECONDITION-FAILED");
  EXPECT_THROW(parse_mode("so"), InputError);
}
