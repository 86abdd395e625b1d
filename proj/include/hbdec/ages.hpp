#pragma once

// Finitely bounded classes: the age of a homogeneous structure given by a
// signature and a finite set of forbidden induced substructures.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hbdec/structures.hpp"

namespace hbdec {

struct BoundedClass {
  std::string name;
  SignaturePtr signature = std::make_shared<const Signature>();
  /// Canonical, pairwise non-isomorphic, none embedding into another, sorted.
  std::vector<FinStructure> bounds;
  bool homogeneous_asserted = false;
  bool ramsey_asserted = false;

  /// Builds a class and normalizes the bound set: canonicalize, deduplicate,
  /// drop every bound into which another bound embeds.
  static BoundedClass make(std::string name, SignaturePtr sig, const std::vector<FinStructure>& raw,
                           bool homogeneous, bool ramsey) {
    BoundedClass k;
    k.name = std::move(name);
    k.signature = std::move(sig);
    k.homogeneous_asserted = homogeneous;
    k.ramsey_asserted = ramsey;
    std::set<FinStructure> canon;
    for (const auto& b : raw) {
      if (!(b.signature() == *k.signature)) throw InputError("bound outside the class signature");
      if (b.size() < 1) throw InputError("bounds must have at least one point");
      canon.insert(canonical_form(b));
    }
    std::vector<FinStructure> all(canon.begin(), canon.end());
    for (const auto& b : all) {
      bool redundant = false;
      for (const auto& c : all) {
        if (!(c == b) && embeds(c, b)) {
          redundant = true;
          break;
        }
      }
      if (!redundant) k.bounds.push_back(b);
    }
    return k;
  }

  int max_bound_size() const {
    int m = 0;
    for (const auto& b : bounds) m = std::max(m, b.size());
    return m;
  }

  /// Same signature and bound set (names and flags are presentation only).
  bool same_age_presentation(const BoundedClass& other) const {
    return *signature == *other.signature && bounds == other.bounds;
  }
};

inline bool in_age(const BoundedClass& k, const FinStructure& s) {
  if (!(s.signature() == *k.signature)) throw InputError("in_age: signature mismatch");
  for (const auto& b : k.bounds) {
    if (embeds(b, s)) return false;
  }
  return true;
}

inline StructurePredicate age_predicate(const BoundedClass& k) {
  return [&k](const FinStructure& s) { return in_age(k, s); };
}

/// Canonical representatives of the age members of size exactly n.
inline std::vector<FinStructure> enumerate_age(const BoundedClass& k, int n) {
  return enumerate_structures(k.signature, n, age_predicate(k));
}

/// Age members of sizes 0..n (index = size).
inline std::vector<std::vector<FinStructure>> enumerate_age_upto(const BoundedClass& k, int n) {
  return enumerate_structures_upto(k.signature, n, age_predicate(k));
}

/// All labelled age members on exactly n points, sorted by encoding.
inline std::vector<FinStructure> labelled_age_members(const BoundedClass& k, int n) {
  std::set<FinStructure> out;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (const auto& rep : enumerate_age(k, n)) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      out.insert(permuted(rep, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return {out.begin(), out.end()};
}

/// A one-point amalgamation diagram: `left` and `right` extend `base` by one
/// point each (the new point has index base.size()).
struct AmalgamationDiagram {
  FinStructure base;
  FinStructure left;
  FinStructure right;
};

struct AmalgamationReport {
  bool pass = true;
  int cap = 0;
  bool strong = false;
  std::optional<AmalgamationDiagram> counterexample;
};

inline int default_amalgamation_cap(const BoundedClass& k) {
  return std::max(2, 2 * k.max_bound_size());
}

namespace detail {

// Looks for an amalgam of two one-point extensions on base.size()+2 points.
inline bool has_strong_amalgam(const BoundedClass& k, const FinStructure& left, const FinStructure& right) {
  const int n0 = left.size() - 1;
  const int a = n0;
  const int b = n0 + 1;
  const auto& sig = *k.signature;
  FinStructure am(k.signature, n0 + 2);
  Tuple image;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (const auto& t : left.tuples(r)) am.set(r, t);
    for (const auto& t : right.tuples(r)) {
      image = t;
      for (int& v : image) {
        if (v == n0) v = b;
      }
      am.set(r, image);
    }
  }
  std::vector<std::pair<std::size_t, Tuple>> free;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for_each_tuple(n0 + 2, sig[r].arity, [&](const Tuple& t) {
      bool has_a = std::find(t.begin(), t.end(), a) != t.end();
      bool has_b = std::find(t.begin(), t.end(), b) != t.end();
      if (has_a && has_b) free.emplace_back(r, t);
    });
  }
  if (free.size() > 24) throw InputError("amalgamation check: too many free tuples");
  const std::uint64_t limit = std::uint64_t{1} << free.size();
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    for (std::size_t i = 0; i < free.size(); ++i) am.set(free[i].first, free[i].second, ((mask >> i) & 1U) != 0);
    if (in_age(k, am)) return true;
  }
  return false;
}

}  // namespace detail

/// Checks one-point (strong) amalgamation for all diagrams with |B1|,|B2| <= cap.
/// A pass says nothing beyond the cap.
inline AmalgamationReport check_amalgamation(const BoundedClass& k, int cap, bool strong) {
  if (cap < 1) throw InputError("amalgamation cap must be at least 1");
  AmalgamationReport report;
  report.cap = cap;
  report.strong = strong;
  auto keep = age_predicate(k);
  auto levels = enumerate_age_upto(k, cap - 1);
  for (const auto& level : levels) {
    for (const auto& base : level) {
      std::vector<FinStructure> exts;
      for_each_one_point_extension(base, keep, [&](const FinStructure& e) { exts.push_back(e); });
      for (std::size_t i = 0; i < exts.size(); ++i) {
        for (std::size_t j = i; j < exts.size(); ++j) {
          if (!strong && i == j) continue;
          if (!detail::has_strong_amalgam(k, exts[i], exts[j])) {
            report.pass = false;
            report.counterexample = AmalgamationDiagram{base, exts[i], exts[j]};
            return report;
          }
        }
      }
    }
  }
  return report;
}

}  // namespace hbdec
