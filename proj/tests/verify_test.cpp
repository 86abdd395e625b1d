#include <gtest/gtest.h>

#include <filesystem>

#include "catalog.hpp"
#include "hbdec/certificate.hpp"
#include "hbdec/verify.hpp"

using namespace hbdec;
namespace cat = testing_catalog;
namespace fs = std::filesystem;

namespace {

fs::path fresh(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("hbdec_verify_" + name);
  fs::remove_all(dir);
  return dir;
}

void replace_in(const fs::path& file, const std::string& from, const std::string& to) {
  auto text = read_file(file);
  auto pos = text.find(from);
  ASSERT_NE(pos, std::string::npos) << from << " not in " << file;
  text.replace(pos, from.size(), to);
  write_file(file, text);
}

fs::path bidef_certificate(const std::string& name) {
  auto v = decide_bidef(cat::all().reduct("Qlt"), cat::all().reduct("QltRev"));
  auto dir = fresh(name);
  write_bidef_certificate(dir, v);
  return dir;
}

fs::path core_certificate(const std::string& name) {
  const auto& r = cat::all().reduct("Qleq");
  auto dir = fresh(name);
  write_core_certificate(dir, r, compute_core(r));
  return dir;
}

const std::string kGt = "[0,1|size=2: Lt(1,0)]";
const std::string kLt = "[0,1|size=2: Lt(0,1)]";

}  // namespace

TEST(Verify, GenuineCertificatesPass) {
  EXPECT_TRUE(verify::check_directory(bidef_certificate("ok")).ok);
  auto core = verify::check_directory(core_certificate("core_ok"));
  EXPECT_TRUE(core.ok) << core.failure;
}

TEST(Verify, TamperedBehaviourIsRejected) {
  auto dir = bidef_certificate("xi");
  // Send < to < instead of >: no longer carries Lt onto Gt.
  replace_in(dir / "xi.txt", kLt + " -> " + kGt, kLt + " -> " + kLt);
  auto res = verify::check_directory(dir);
  EXPECT_FALSE(res.ok);
  EXPECT_FALSE(res.failure.empty());
}

TEST(Verify, NonInverseBehavioursAreRejected) {
  auto dir = bidef_certificate("eta");
  // Identity instead of the reversal on the way back.
  std::string id;
  for (const auto& t : {"[0,0|size=1:]", kGt.c_str(), kLt.c_str()}) id += std::string(t) + " -> " + t + "\n";
  write_file(dir / "eta.txt", id);
  EXPECT_FALSE(verify::check_directory(dir).ok);
}

TEST(Verify, BrokenMatchingIsRejected) {
  auto dir = bidef_certificate("matching");
  write_file(dir / "matching.txt", "");
  EXPECT_FALSE(verify::check_directory(dir).ok);
  write_file(dir / "matching.txt", "Lt -> Nope\n");
  EXPECT_FALSE(verify::check_directory(dir).ok);
}

TEST(Verify, IncompleteTablesAreRejected) {
  auto dir = bidef_certificate("partial");
  auto xi = read_file(dir / "xi.txt");
  write_file(dir / "xi.txt", xi.substr(0, xi.find('\n') + 1));
  EXPECT_FALSE(verify::check_directory(dir).ok);
}

TEST(Verify, CoreWitnessMustLandInTheCore) {
  auto dir = core_certificate("core_bad");
  // The identity does not map the input into the one-point core.
  std::string id;
  for (const auto& t : {"[0,0|size=1:]", kGt.c_str(), kLt.c_str()}) id += std::string(t) + " -> " + t + "\n";
  write_file(dir / "witness.txt", id);
  EXPECT_FALSE(verify::check_directory(dir).ok);
}

TEST(Verify, MalformedDirectories) {
  EXPECT_FALSE(verify::check_directory(fresh("missing")).ok);
  auto dir = bidef_certificate("kind");
  replace_in(dir / "certificate.txt", "kind bidef", "kind mystery");
  EXPECT_FALSE(verify::check_directory(dir).ok);
  auto garbled = bidef_certificate("garbled");
  write_file(garbled / "structures.cls", "class source\n  sig Lt/2\n");
  EXPECT_FALSE(verify::check_directory(garbled).ok);
}

TEST(Verify, ReaderAgreesWithEngineTypes) {
  const auto& q = cat::all().cls("linord");
  auto vc = verify::read_structures(serialize_class(q)).classes.at("linord");
  for (int k = 1; k <= 3; ++k) {
    auto mine = verify::types_of(vc, k);
    auto theirs = enumerate_types(q, k);
    ASSERT_EQ(mine.size(), theirs.size());
    for (const auto& t : theirs) EXPECT_TRUE(mine.count(t.to_string())) << t.to_string();
  }
}
