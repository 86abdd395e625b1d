#pragma once

// Model-complete cores of reducts. A range-rigid canonical endomorphism
// hitting an inclusion-minimal set of base orbits is chosen; the age of its
// range is presented by fresh bounds and the reduct is read over it with the
// same definitions.

#include <set>
#include <string>
#include <vector>

#include "hbdec/reducts.hpp"

namespace hbdec {

struct CoreOptions {
  int k = 0;           // 0: default_level
  int realize_cap = 0; // 0: default_realize_cap
  int jobs = 1;
};

struct CorePresentation {
  BoundedClass base_out;
  Reduct reduct_out;
  Behaviour witness;
  std::vector<KType> image_types;
  int level = 0;
  int realize_cap = 0;
  int scan_cap = 0;
};

inline void require_flags(const BoundedClass& k) {
  if (!k.homogeneous_asserted || !k.ramsey_asserted) {
    throw InputError("class " + k.name + " must assert homogeneous and ramsey");
  }
}

inline int resolve_level(const Reduct& c, int k) {
  int def = default_level(c);
  if (k == 0) return def;
  if (k < def) throw InputError("level k=" + std::to_string(k) + " is below the default " + std::to_string(def));
  return k;
}

/// Bound size sufficient to present the age of a range: any minimal
/// non-member either contains an old bound or has a k-tuple of a missing type.
inline int core_scan_cap(const BoundedClass& base, int k) {
  return std::max({base.max_bound_size(), base.signature->max_arity(), k});
}

/// The class of base age members all of whose k-types are in `allowed`,
/// presented by its minimal non-members of size <= cap.
inline BoundedClass class_from_types(const BoundedClass& base, const std::vector<KType>& allowed, int k,
                                     std::string name, int cap) {
  std::set<KType> ok(allowed.begin(), allowed.end());
  auto member = [&](const FinStructure& s) {
    if (!in_age(base, s)) return false;
    bool all = true;
    for_each_tuple(s.size(), k, [&](const Tuple& t) {
      if (all && !ok.count(type_of_unchecked(s, t))) all = false;
    });
    return all;
  };
  std::vector<FinStructure> members{FinStructure(base.signature, 0)};
  std::set<FinStructure> bounds;
  for (int size = 1; size <= cap; ++size) {
    std::set<FinStructure> next;
    for (const auto& m : members) {
      for_each_one_point_extension(m, {}, [&](const FinStructure& ext) {
        FinStructure c = canonical_form(ext);
        if (member(c)) {
          next.insert(c);
          return;
        }
        std::vector<int> rest(static_cast<std::size_t>(size - 1));
        for (int drop = 0; drop < size; ++drop) {
          int w = 0;
          for (int i = 0; i < size; ++i) {
            if (i != drop) rest[w++] = i;
          }
          if (!member(induced(c, rest))) return;
        }
        bounds.insert(c);
      });
    }
    members.assign(next.begin(), next.end());
  }
  return BoundedClass::make(std::move(name), base.signature, {bounds.begin(), bounds.end()}, true, true);
}

/// Realizable endo-behaviours of the base that preserve every relation of c.
inline std::vector<Behaviour> relation_preserving_endos(const Reduct& c, const TypeSpacePtr& space,
                                                        const CoreOptions& opts, bool range_rigid_only) {
  BehaviourSearch search;
  search.realize_cap = opts.realize_cap;
  search.jobs = opts.jobs;
  search.filter = [&](const Behaviour& b) { return (!range_rigid_only || b.range_rigid()) && preserves_all(b, c); };
  return enumerate_behaviours(space, space, search);
}

inline CorePresentation compute_core(const Reduct& c, const CoreOptions& opts = {}) {
  require_flags(c.base);
  const int k = resolve_level(c, opts.k);
  auto space = make_type_space(c.base, k);
  auto endos = relation_preserving_endos(c, space, opts, true);
  if (endos.empty()) throw InternalError("no range-rigid relation-preserving endo-behaviour (identity should qualify)");

  std::vector<std::vector<int>> images;
  for (const auto& e : endos) images.push_back(e.image_set());
  auto subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  std::optional<std::size_t> chosen;
  std::string chosen_text;
  for (std::size_t i = 0; i < endos.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < endos.size() && minimal; ++j) {
      if (images[j].size() < images[i].size() && subset(images[j], images[i])) minimal = false;
    }
    if (!minimal) continue;
    std::string text = endos[i].serialize();
    if (!chosen || text < chosen_text) {
      chosen = i;
      chosen_text = std::move(text);
    }
  }
  const Behaviour& witness = endos[*chosen];
  std::vector<KType> image_types;
  for (int t : images[*chosen]) image_types.push_back((*space)[t]);

  const int cap = core_scan_cap(c.base, k);
  BoundedClass base_out = class_from_types(c.base, image_types, k, c.name + "_base", cap);
  Reduct reduct_out = reinterpret(c, base_out, c.name + "_core");
  const int realize_cap = opts.realize_cap > 0 ? opts.realize_cap : default_realize_cap(k, c.base);
  return CorePresentation{std::move(base_out), std::move(reduct_out), witness, std::move(image_types), k,
                          realize_cap, cap};
}

struct OptimalityReport {
  bool optimal = true;
  std::optional<Behaviour> refutation;
};

/// Every realizable relation-preserving endo-behaviour is surjective on k-types.
inline OptimalityReport is_optimally_presented(const Reduct& c, const CoreOptions& opts = {}) {
  const int k = resolve_level(c, opts.k);
  auto space = make_type_space(c.base, k);
  for (auto& e : relation_preserving_endos(c, space, opts, false)) {
    if (!e.surjective()) return {false, std::move(e)};
  }
  return {};
}

}  // namespace hbdec
