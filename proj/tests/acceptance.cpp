// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "catalog.hpp"
#include "hbdec/certificate.hpp"
#include "hbdec/verify.hpp"
#include "oracles.hpp"

using namespace hbdec;
namespace cat = testing_catalog;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void within(Clock::time_point t0, double limit, const std::string& what) {
    double s = since(t0);
    std::ostringstream msg;
    msg << what << " took " << s << " s (limit " << limit << " s)";
    expect(s < limit, msg.str());
  }
};

int failed = 0;

void criterion(int n, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  std::ostringstream line;
  line << (c.failures.empty() ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " (" << since(t0)
       << " s)";
  std::cout << line.str() << "\n";
  for (const auto& f : c.failures) std::cout << "    " << f << "\n";
  std::cout.flush();
  if (!c.failures.empty()) ++failed;
}

const std::vector<std::string> kReducts{"Qlt",    "Qleq",   "QltRev", "QltRev2",  "Qneq",
                                        "Random", "Henson", "Kww",    "Matching", "Point"};
const std::vector<std::string> kOrderReducts{"Qlt", "Qleq", "QltRev", "QltRev2", "Qneq"};
const std::vector<std::string> kClasses{"linord", "graph", "trianglefree", "bipartite", "matching", "onepoint"};

const std::string kEq = "[0,0|size=1:]";
const std::string kGt = "[0,1|size=2: Lt(1,0)]";
const std::string kLt = "[0,1|size=2: Lt(0,1)]";

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("hbdec_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> age_literals(const BoundedClass& k, int n) {
  std::vector<std::string> out;
  for (const auto& s : enumerate_age(k, n)) out.push_back(to_literal(s));
  return out;
}

OrbitUnion binary(const BoundedClass& base, const std::vector<std::string>& types) {
  std::vector<KType> members;
  for (const auto& t : types) members.push_back(parse_type(t, base.signature));
  return make_orbit_union(2, members);
}

void expect_valid(Check& c, const fs::path& dir, const std::string& what) {
  auto r = verify::check_directory(dir);
  c.expect(r.ok, what + " certificate rejected: " + r.failure);
}

Verdict bidef(const std::string& a, const std::string& b, Mode mode) {
  DecideOptions opts;
  opts.mode = mode;
  return decide_bidef(cat::all().reduct(a), cat::all().reduct(b), opts);
}

std::string serialize_document(const Document& d) {
  std::string out;
  for (const auto& c : d.classes) out += serialize_class(c) + "\n";
  for (const auto& r : d.reducts) out += serialize_reduct(r) + "\n";
  return out;
}

}  // namespace

int main() {
  const auto& doc = cat::all();
  const auto start = Clock::now();

  criterion(1, "core of (Q,<=) is the one-point class, golden output", [&](Check& c) {
    auto t0 = Clock::now();
    auto core = compute_core(doc.reduct("Qleq"));
    c.within(t0, 1.0, "core");
    auto golden = read_file(cat::source_dir() / "tests/golden/qleq_core.cls");
    c.expect(serialize_pair(core.reduct_out) == golden, "output differs from tests/golden/qleq_core.cls");
  });

  criterion(2, "core of (Q,<) is linear orders with the identity witness", [&](Check& c) {
    auto t0 = Clock::now();
    auto core = compute_core(doc.reduct("Qlt"));
    c.within(t0, 1.0, "core");
    c.expect(core.witness.identity(), "witness is not the identity");
    for (int n = 0; n <= 4; ++n) {
      c.expect(age_literals(core.base_out, n) == age_literals(doc.cls("linord"), n),
               "age differs at size " + std::to_string(n));
    }
  });

  criterion(3, "core of the random graph is the clique", [&](Check& c) {
    auto t0 = Clock::now();
    auto core = compute_core(doc.reduct("Random"));
    c.within(t0, 1.0, "core");
    auto nonedge = parse_literal("size=2:", core.base_out.signature);
    bool forbidden = false;
    for (const auto& b : core.base_out.bounds) forbidden = forbidden || b == nonedge;
    c.expect(forbidden, "the non-edge pair is not a bound");
    for (int n = 1; n <= 4; ++n) {
      auto members = enumerate_age(core.base_out, n);
      c.expect(members.size() == 1 && members[0].tuples(0).size() == static_cast<std::size_t>(n * (n - 1)),
               "size " + std::to_string(n) + " members are not exactly the clique");
    }
  });

  criterion(4, "core of K_{w,w} is K2", [&](Check& c) {
    auto t0 = Clock::now();
    auto core = compute_core(doc.reduct("Kww"));
    c.within(t0, 5.0, "core");
    auto k2 = parse_literal("size=2: E(0,1) E(1,0)", core.base_out.signature);
    auto one = parse_literal("size=1:", core.base_out.signature);
    c.expect(enumerate_age(core.base_out, 1) == std::vector<FinStructure>{one}, "size 1 members");
    c.expect(enumerate_age(core.base_out, 2) == std::vector<FinStructure>{k2}, "size 2 members are not K2");
    c.expect(enumerate_age(core.base_out, 3).empty(), "size 3 members exist");
  });

  criterion(5, "bi-definability of (Q,<) with its reversal, and not with (Q,<=)", [&](Check& c) {
    auto t0 = Clock::now();
    auto yes = bidef("Qlt", "QltRev", Mode::fo);
    c.within(t0, 10.0, "YES instance");
    c.expect(yes.answer == Answer::yes && yes.caps.k == 2, "expected YES at k=2");
    if (yes.witness) {
      const auto& xi = yes.witness->xi;
      auto lt = parse_type(kLt, xi.source().cls().signature);
      auto gt = parse_type(kGt, xi.source().cls().signature);
      c.expect(xi.image(lt) == gt && xi.image(gt) == lt, "witness is not the reversal");
      auto dir = scratch("c5");
      write_bidef_certificate(dir, yes);
      expect_valid(c, dir, "reversal");
    }
    t0 = Clock::now();
    auto no = bidef("Qleq", "Qlt", Mode::fo);
    c.within(t0, 10.0, "NO instance");
    c.expect(no.answer == Answer::no, "expected NO for (Q,<=) vs (Q,<)");
  });

  criterion(6, "pp-definability in the core of (Q,<)", [&](Check& c) {
    auto t0 = Clock::now();
    auto core = compute_core(doc.reduct("Qlt"));
    auto ne_rel = binary(core.base_out, {kLt, kGt});
    auto ne = pp_definable(core, ne_rel);
    auto lt = pp_definable(core, binary(core.base_out, {kLt}));
    c.within(t0, 10.0, "pp decisions");
    c.expect(lt.definable, "{<} reported not definable");
    c.expect(!ne.definable && ne.witness && ne.witness->arity == 2, "{<,>} not refuted by a binary witness");
    if (ne.witness) {
      auto dir = scratch("c6_found");
      write_pp_certificate(dir, core, "Ne", ne_rel, *ne.witness);
      expect_valid(c, dir, "found polymorphism");
    }
    auto min = oracles::min_polymorphism(core);
    auto dir = scratch("c6_min");
    write_pp_certificate(dir, core, "Ne", ne_rel, min);
    expect_valid(c, dir, "componentwise minimum");
    std::cout << "    found witness " << (ne.witness && ne.witness->table == min.table ? "is" : "differs from")
              << " the componentwise minimum; both verify\n";
  });

  criterion(7, "three self-behaviours of linear orders at k=2, matching the 27-table oracle", [&](Check& c) {
    const auto& q = doc.cls("linord");
    auto oracle = oracles::behaviours(q, q, 2);
    auto engine = oracles::engine_behaviours(q, q, 2);
    c.expect(oracle.size() == 3, "oracle finds " + std::to_string(oracle.size()));
    c.expect(engine == oracle, "engine and oracle disagree");
    std::set<std::map<std::string, std::string>> expected{
        {{kEq, kEq}, {kLt, kLt}, {kGt, kGt}}, {{kEq, kEq}, {kLt, kGt}, {kGt, kLt}}, {{kEq, kEq}, {kLt, kEq}, {kGt, kEq}}};
    c.expect(engine == expected, "not identity, reversal and collapse");
  });

  criterion(8, "property suites on the catalog", [&](Check& c) {
    auto t0 = Clock::now();
    // (a) probes on every realizable behaviour between catalog classes.
    int probed = 0;
    for (const auto& a : kClasses) {
      for (const auto& b : kClasses) {
        auto sa = make_type_space(doc.cls(a), 2);
        auto sb = make_type_space(doc.cls(b), 2);
        for (const auto& xi : enumerate_behaviours(sa, sb)) {
          auto report = greedy_extension_probe(xi, 8, 200, 20261016);
          ++probed;
          c.expect(report.applicable && report.failures == 0, "(a) probe failures " + a + " -> " + b);
        }
      }
    }
    std::cout << "    (a) " << probed << " behaviours probed\n";

    // (b) optimal presentation and idempotence of the core.
    std::map<std::string, CorePresentation> cores;
    for (const auto& name : kReducts) {
      auto core = compute_core(doc.reduct(name));
      c.expect(is_optimally_presented(core.reduct_out).optimal, "(b) core of " + name + " not optimal");
      c.expect(compute_core(core.reduct_out).witness.identity(), "(b) re-coring " + name + " is not the identity");
      auto dir = scratch("c8_core_" + name);
      write_core_certificate(dir, doc.reduct(name), core);
      expect_valid(c, dir, "(d) core of " + name);
      cores.emplace(name, std::move(core));
    }

    // (c) and (d): equivalence properties, every YES certificate re-verified.
    int yes_certs = 0;
    for (Mode mode : {Mode::fo, Mode::ep, Mode::pp}) {
      const auto& names = mode == Mode::pp ? kOrderReducts : kReducts;
      std::map<std::pair<std::string, std::string>, Answer> t;
      for (const auto& a : names) {
        for (const auto& b : names) {
          auto v = bidef(a, b, mode);
          t[{a, b}] = v.answer;
          if (v.answer != Answer::yes) continue;
          auto dir = scratch("c8_bidef");
          write_bidef_certificate(dir, v);
          expect_valid(c, dir, "(d) " + to_string(mode) + " " + a + "/" + b);
          ++yes_certs;
        }
      }
      const std::string m = "(c) " + to_string(mode) + " ";
      for (const auto& a : names) {
        c.expect(t[{a, a}] == Answer::yes, m + "not reflexive on " + a);
        for (const auto& b : names) {
          c.expect(t[{a, b}] == t[{b, a}], m + "not symmetric on " + a + "/" + b);
          if (t[{a, b}] != Answer::yes) continue;
          for (const auto& d : names) {
            if (t[{b, d}] == Answer::yes) c.expect(t[{a, d}] == Answer::yes, m + "not transitive " + a + "/" + b + "/" + d);
          }
        }
      }
    }
    std::cout << "    (d) " << yes_certs << " bi-definability certificates verified\n";

    // (e) serialize(parse(serialize(parse(x)))) is byte-identical, on inputs and emitted cores.
    for (const auto& name : cat::names()) {
      auto once = serialize_document(parse_document(read_file(cat::file(name))));
      c.expect(serialize_document(parse_document(once)) == once, "(e) round trip of " + name);
    }
    for (const auto& [name, core] : cores) {
      auto text = serialize_pair(core.reduct_out);
      c.expect(serialize_document(parse_document(text)) == text + "\n", "(e) round trip of core of " + name);
    }
    c.within(t0, 120.0, "property suites");
  });

  std::cout << "total " << since(start) << " s, " << failed << " criteria failed\n";
  return failed == 0 ? 0 : 1;
}
