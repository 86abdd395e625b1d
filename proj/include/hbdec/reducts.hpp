#pragma once

// First-order reducts given by quantifier-free definitions over a bounded
// class. Every relation compiles to a union of orbits (types) of the base.

#include <optional>
#include <string>
#include <vector>

#include "hbdec/canonical.hpp"
#include "hbdec/formula.hpp"

namespace hbdec {

struct OrbitUnion {
  int arity = 0;
  /// Sorted, duplicate-free m-types of the base class.
  std::vector<KType> members;

  bool contains(const KType& t) const { return std::binary_search(members.begin(), members.end(), t); }
  bool operator==(const OrbitUnion&) const = default;

  std::string to_string() const {
    std::string out = "orbits [";
    for (std::size_t i = 0; i < members.size(); ++i) {
      out += i ? ", " : " ";
      out += members[i].to_string();
    }
    return out + (members.empty() ? "]" : " ]");
  }
};

inline OrbitUnion make_orbit_union(int arity, std::vector<KType> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (const auto& m : members) {
    if (m.k() != arity) throw InputError("orbit union member has the wrong arity");
  }
  return OrbitUnion{arity, std::move(members)};
}

struct RelationDef {
  std::string name;
  int arity = 1;
  /// Absent for relations given directly as orbit unions.
  std::optional<QfFormula> formula;
  OrbitUnion orbits;
};

struct Reduct {
  std::string name;
  BoundedClass base;
  std::vector<RelationDef> relations;

  const RelationDef* find(std::string_view rel) const {
    for (const auto& r : relations) {
      if (r.name == rel) return &r;
    }
    return nullptr;
  }

  int max_arity() const {
    int m = 0;
    for (const auto& r : relations) m = std::max(m, r.arity);
    return m;
  }
};

/// The m-types of the base satisfying the formula on their block tuple.
inline OrbitUnion compile_formula(const BoundedClass& base, const QfFormula& phi, int arity) {
  if (phi.variable_bound() > arity) throw InputError("formula uses a variable beyond its arity");
  std::vector<KType> members;
  for (auto& t : enumerate_types(base, arity)) {
    if (phi.eval(t.quotient, t.partition)) members.push_back(std::move(t));
  }
  return make_orbit_union(arity, std::move(members));
}

inline OrbitUnion compile_orbit_union(const Reduct& c, std::string_view rel) {
  const RelationDef* def = c.find(rel);
  if (!def) throw InputError("relation '" + std::string(rel) + "' is not declared in reduct " + c.name);
  if (def->formula) return compile_formula(c.base, *def->formula, def->arity);
  return def->orbits;
}

/// Checks that every member is a type of the base; throws otherwise.
inline void validate_orbit_union(const BoundedClass& base, const OrbitUnion& u) {
  auto types = enumerate_types(base, u.arity);
  for (const auto& m : u.members) {
    if (!std::binary_search(types.begin(), types.end(), m)) {
      throw InputError("orbit " + m.to_string() + " is not a type of class " + base.name);
    }
  }
}

inline Reduct make_reduct(std::string name, BoundedClass base, std::vector<RelationDef> rels) {
  Reduct c{std::move(name), std::move(base), {}};
  for (auto& r : rels) {
    if (c.find(r.name)) throw InputError("duplicate relation '" + r.name + "' in reduct " + c.name);
    if (r.arity < 1) throw InputError("relation arity must be positive");
    if (r.formula) {
      r.orbits = compile_formula(c.base, *r.formula, r.arity);
    } else {
      if (r.orbits.arity != r.arity) throw InputError("orbit literal arity mismatch for '" + r.name + "'");
      validate_orbit_union(c.base, r.orbits);
    }
    c.relations.push_back(std::move(r));
  }
  return c;
}

/// The same definitions read over another base with the same signature:
/// formulas are recompiled, orbit literals keep the orbits that still exist.
inline Reduct reinterpret(const Reduct& c, const BoundedClass& base, std::string name) {
  if (!(*base.signature == *c.base.signature)) throw InputError("reinterpret: signature mismatch");
  std::vector<RelationDef> rels;
  for (const auto& r : c.relations) {
    RelationDef d{r.name, r.arity, r.formula, {}};
    if (!r.formula) {
      auto types = enumerate_types(base, r.arity);
      std::vector<KType> kept;
      for (const auto& m : r.orbits.members) {
        if (std::binary_search(types.begin(), types.end(), m)) kept.push_back(m);
      }
      d.orbits = make_orbit_union(r.arity, std::move(kept));
    }
    rels.push_back(std::move(d));
  }
  return make_reduct(std::move(name), base, std::move(rels));
}

/// Every member of `src` is sent into `tgt` (arity via the padding convention).
inline bool behaviour_preserves_relation(const Behaviour& xi, const OrbitUnion& src, const OrbitUnion& tgt) {
  if (src.arity > xi.level() || tgt.arity > xi.level()) {
    throw InputError("behaviour_preserves_relation: level below the relation arity");
  }
  if (src.arity != tgt.arity) throw InputError("behaviour_preserves_relation: arity mismatch");
  for (const auto& p : src.members) {
    if (!tgt.contains(xi.apply(p))) return false;
  }
  return true;
}

/// Endomorphism test for a behaviour of the base: each relation into itself.
inline bool preserves_all(const Behaviour& xi, const Reduct& c) {
  for (const auto& r : c.relations) {
    if (!behaviour_preserves_relation(xi, r.orbits, r.orbits)) return false;
  }
  return true;
}

/// Level used when none is given: the largest arity in sight, at least 2.
inline int default_level(const Reduct& c) {
  return std::max({2, c.base.signature->max_arity(), c.max_arity()});
}

}  // namespace hbdec
