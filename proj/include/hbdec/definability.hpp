#pragma once

// Expansions of model-complete cores by definable relations.
//
// ep: in a model-complete core fo- and ep-definability agree, and a union of
// base orbits is added when every canonical endomorphism of the core keeps it.
//
// pp: a relation is refuted by a canonical polymorphism of arity m that
// preserves the declared relations and sends a tuple of members outside the
// relation. Polymorphism behaviours are canonical for the diagonal action:
// a table from the types of m*k-tuples (the m argument k-tuples
// concatenated) to k-types. Refutations are absolute; acceptance is relative
// to the arity cap.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hbdec/core.hpp"

namespace hbdec {

inline std::string union_name(int arity, std::uint64_t mask) {
  return "U" + std::to_string(arity) + "_" + std::to_string(mask);
}

/// All non-empty orbit unions of arity <= n over the core base, in order
/// (arity, then subset mask over the sorted types).
inline std::vector<OrbitUnion> all_orbit_unions(const BoundedClass& base, int n) {
  std::vector<OrbitUnion> out;
  for (int m = 1; m <= n; ++m) {
    auto types = enumerate_types(base, m);
    if (types.size() > 16) throw InputError("too many " + std::to_string(m) + "-types to expand by all unions");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << types.size()); ++mask) {
      std::vector<KType> members;
      for (std::size_t i = 0; i < types.size(); ++i) {
        if ((mask >> i) & 1U) members.push_back(types[i]);
      }
      out.push_back(make_orbit_union(m, std::move(members)));
    }
  }
  return out;
}

namespace detail {

inline std::uint64_t union_mask(const BoundedClass& base, const OrbitUnion& u) {
  auto types = enumerate_types(base, u.arity);
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (u.contains(types[i])) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

inline Reduct expand_with(const CorePresentation& core, const std::vector<OrbitUnion>& extra, const std::string& suffix) {
  std::vector<RelationDef> rels = core.reduct_out.relations;
  for (const auto& u : extra) {
    bool dup = false;
    for (const auto& r : rels) {
      if (r.arity == u.arity && r.orbits == u) dup = true;
    }
    if (dup) continue;
    rels.push_back(RelationDef{union_name(u.arity, union_mask(core.base_out, u)), u.arity, std::nullopt, u});
  }
  return make_reduct(core.reduct_out.name + suffix, core.base_out, std::move(rels));
}

}  // namespace detail

/// Realizable endo-behaviours of the core base preserving the core's relations.
inline std::vector<Behaviour> core_endos(const CorePresentation& core, int realize_cap = 0, int jobs = 1) {
  auto space = make_type_space(core.base_out, core.level);
  BehaviourSearch search;
  search.realize_cap = realize_cap;
  search.jobs = jobs;
  search.filter = [&](const Behaviour& b) { return preserves_all(b, core.reduct_out); };
  return enumerate_behaviours(space, space, search);
}

/// Orbit unions of arity <= n preserved by every canonical endomorphism of the core.
/// A base orbit union need not be definable in the core: the core can have
/// automorphisms that merge base orbits (reversal for (Q,!=) over linear orders).
inline std::vector<OrbitUnion> invariant_unions(const CorePresentation& core, int n, int realize_cap = 0, int jobs = 1) {
  auto endos = core_endos(core, realize_cap, jobs);
  std::vector<OrbitUnion> out;
  for (auto& u : all_orbit_unions(core.base_out, n)) {
    bool kept = true;
    for (const auto& e : endos) {
      if (!behaviour_preserves_relation(e, u, u)) {
        kept = false;
        break;
      }
    }
    if (kept) out.push_back(std::move(u));
  }
  return out;
}

inline Reduct ep_expand(const CorePresentation& core, int n, int realize_cap = 0, int jobs = 1) {
  return detail::expand_with(core, invariant_unions(core, n, realize_cap, jobs), "_ep");
}

struct PolymorphismBehaviour {
  int arity = 0;
  TypeSpacePtr values;  // level-k types of the core base
  TypeSpacePtr joint;   // level-(arity*k) types of the core base
  std::vector<int> table;

  int level() const { return values->level(); }

  /// Type of argument `a` of a joint type.
  KType argument(int joint_type, int a) const {
    const int k = level();
    std::vector<int> sigma(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) sigma[i] = a * k + i;
    return restrict_type((*joint)[joint_type], sigma);
  }

  std::string serialize() const {
    std::string out = "# polymorphism arity=" + std::to_string(arity) + " level=" + std::to_string(level()) + "\n";
    for (std::size_t p = 0; p < table.size(); ++p) {
      out += (*joint)[p].to_string() + " -> " + (*values)[table[p]].to_string() + "\n";
    }
    return out;
  }
};

struct PpVerdict {
  bool definable = true;
  int arity_cap = 0;
  int realize_cap = 0;
  std::optional<PolymorphismBehaviour> witness;
};

struct PpOptions {
  int arity_cap = 0;    // 0: number of member types of the relation
  int realize_cap = 0;  // 0: default_realize_cap
};

namespace detail {

// Constraint search for an m-ary polymorphism behaviour refuting a relation.
class PolymorphismSearch {
 public:
  PolymorphismSearch(const CorePresentation& core, const OrbitUnion& rel, int m, int realize_cap)
      : core_(core), rel_(rel), m_(m), k_(core.level) {
    values_ = make_type_space(core.base_out, k_);
    joint_ = std::make_shared<const TypeSpace>(core.base_out, m_ * k_, false);
    cap_ = realize_cap > 0 ? realize_cap : default_realize_cap(k_, core.base_out);
    if (values_->size() > 64) throw InputError("pp search supports at most 64 k-types");
    const std::size_t nj = joint_->size();
    const auto& maps = values_->self_maps();
    args_.assign(nj, std::vector<int>(static_cast<std::size_t>(m_)));
    lifted_.assign(nj, std::vector<int>(maps.size()));
    for (std::size_t p = 0; p < nj; ++p) {
      for (int a = 0; a < m_; ++a) {
        std::vector<int> sigma(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_; ++i) sigma[i] = a * k_ + i;
        args_[p][a] = values_->index_of(restrict_type((*joint_)[p], sigma));
      }
      for (std::size_t s = 0; s < maps.size(); ++s) {
        std::vector<int> sigma(static_cast<std::size_t>(m_ * k_));
        for (int a = 0; a < m_; ++a) {
          for (int i = 0; i < k_; ++i) sigma[a * k_ + i] = a * k_ + maps[s][i];
        }
        lifted_[p][s] = joint_->index_of(restrict_type((*joint_)[p], sigma));
      }
    }
  }

  std::optional<PolymorphismBehaviour> run() {
    const std::size_t nj = joint_->size();
    const std::size_t nv = values_->size();
    std::vector<std::uint64_t> dom(nj, nv == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nv) - 1);
    // Preservation of the declared relations.
    for (const auto& r : core_.reduct_out.relations) {
      std::uint64_t inside = member_mask(r.orbits);
      for (std::size_t p = 0; p < nj; ++p) {
        bool all = true;
        for (int a = 0; a < m_; ++a) all = all && ((inside >> args_[p][a]) & 1U);
        if (all) dom[p] &= inside;
      }
    }
    if (!arc_consistent(dom)) return std::nullopt;
    const std::uint64_t target = member_mask(rel_);
    std::vector<std::pair<std::size_t, int>> candidates;
    for (std::size_t p = 0; p < nj; ++p) {
      bool all = true;
      for (int a = 0; a < m_; ++a) all = all && ((target >> args_[p][a]) & 1U);
      if (!all) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        if (((dom[p] >> v) & 1U) && !((target >> v) & 1U)) candidates.emplace_back(p, static_cast<int>(v));
      }
    }
    if (candidates.empty()) return std::nullopt;
    build_configs();
    for (const auto& [p, v] : candidates) {
      auto d = dom;
      d[p] = std::uint64_t{1} << v;
      if (!arc_consistent(d)) continue;
      if (!configs_ok(d, all_vars())) continue;
      if (solve(d)) {
        PolymorphismBehaviour w{m_, values_, joint_, {}};
        for (auto x : d) w.table.push_back(std::countr_zero(x));
        return w;
      }
    }
    return std::nullopt;
  }

 private:
  struct Config {
    int points;
    std::vector<int> vars;  // joint type of every k-tuple of points (lexicographic)
  };

  std::uint64_t member_mask(const OrbitUnion& u) const {
    std::uint64_t mask = 0;
    for (std::size_t v = 0; v < values_->size(); ++v) {
      if (u.contains(TypeSpace::prefix((*values_)[v], u.arity))) mask |= std::uint64_t{1} << v;
    }
    return mask;
  }

  std::vector<std::size_t> all_vars() const {
    std::vector<std::size_t> out(joint_->size());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }

  // value(lifted(p, s)) == restriction(value(p), s) for all p, s.
  bool arc_consistent(std::vector<std::uint64_t>& dom) const {
    const std::size_t nmaps = values_->self_maps().size();
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t p = 0; p < dom.size(); ++p) {
        for (std::size_t s = 0; s < nmaps; ++s) {
          const int q = lifted_[p][s];
          std::uint64_t keep_p = 0;
          std::uint64_t reach_q = 0;
          for (std::uint64_t bits = dom[p]; bits; bits &= bits - 1) {
            int v = std::countr_zero(bits);
            int r = values_->restriction(v, s);
            if ((dom[q] >> r) & 1U) {
              keep_p |= std::uint64_t{1} << v;
              reach_q |= std::uint64_t{1} << r;
            }
          }
          if (keep_p != dom[p]) {
            dom[p] = keep_p;
            changed = true;
          }
          if ((dom[q] & reach_q) != dom[q]) {
            dom[q] &= reach_q;
            changed = true;
          }
          if (!dom[p] || !dom[q]) return false;
        }
      }
    }
    return true;
  }

  void build_configs() {
    if (built_) return;
    built_ = true;
    watchers_.assign(joint_->size(), {});
    for (int s = 1; s <= cap_; ++s) {
      for (const auto& c : enumerate_types(core_.base_out, m_ * s)) {
        // Points must be pairwise distinct elements of the m-th power.
        bool distinct = true;
        for (int i = 0; i < s && distinct; ++i) {
          for (int j = i + 1; j < s && distinct; ++j) {
            bool differ = false;
            for (int a = 0; a < m_; ++a) differ = differ || !c.same(a * s + i, a * s + j);
            distinct = differ;
          }
        }
        if (!distinct) continue;
        Config cfg{s, {}};
        std::vector<int> sigma(static_cast<std::size_t>(m_ * k_));
        for_each_tuple(s, k_, [&](const Tuple& t) {
          for (int a = 0; a < m_; ++a) {
            for (int i = 0; i < k_; ++i) sigma[a * k_ + i] = a * s + t[i];
          }
          cfg.vars.push_back(joint_->index_of(restrict_type(c, sigma)));
        });
        const std::size_t id = configs_.size();
        std::vector<int> seen = cfg.vars;
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (int v : seen) watchers_[v].push_back(id);
        configs_.push_back(std::move(cfg));
      }
    }
  }

  bool config_ok(const Config& c, const std::vector<std::uint64_t>& dom) const {
    for (int v : c.vars) {
      if (std::popcount(dom[v]) != 1) return true;  // not decided yet
    }
    auto img = build_image(c.points, k_, core_.base_out.signature, [&](const Tuple& t) -> const KType& {
      std::size_t idx = 0;
      for (int x : t) idx = idx * static_cast<std::size_t>(c.points) + static_cast<std::size_t>(x);
      return (*values_)[std::countr_zero(dom[c.vars[idx]])];
    });
    return img && in_age(core_.base_out, *img);
  }

  bool configs_ok(const std::vector<std::uint64_t>& dom, const std::vector<std::size_t>& vars) const {
    std::vector<char> done(configs_.size(), 0);
    for (auto v : vars) {
      if (std::popcount(dom[v]) != 1) continue;
      for (auto id : watchers_[v]) {
        if (done[id]) continue;
        done[id] = 1;
        if (!config_ok(configs_[id], dom)) return false;
      }
    }
    return true;
  }

  bool solve(std::vector<std::uint64_t>& dom) const {
    std::size_t best = dom.size();
    int best_size = 65;
    for (std::size_t p = 0; p < dom.size(); ++p) {
      int c = std::popcount(dom[p]);
      if (c > 1 && c < best_size) {
        best = p;
        best_size = c;
      }
    }
    if (best == dom.size()) return configs_ok(dom, all_vars());
    for (std::uint64_t bits = dom[best]; bits; bits &= bits - 1) {
      auto d = dom;
      d[best] = std::uint64_t{1} << std::countr_zero(bits);
      if (!arc_consistent(d)) continue;
      std::vector<std::size_t> fresh;
      for (std::size_t p = 0; p < d.size(); ++p) {
        if (std::popcount(d[p]) == 1 && std::popcount(dom[p]) != 1) fresh.push_back(p);
      }
      if (!configs_ok(d, fresh)) continue;
      if (solve(d)) {
        dom = std::move(d);
        return true;
      }
    }
    return false;
  }

  const CorePresentation& core_;
  const OrbitUnion& rel_;
  int m_;
  int k_;
  int cap_ = 0;
  TypeSpacePtr values_;
  TypeSpacePtr joint_;
  std::vector<std::vector<int>> args_;
  std::vector<std::vector<int>> lifted_;
  bool built_ = false;
  std::vector<Config> configs_;
  std::vector<std::vector<std::size_t>> watchers_;
};

}  // namespace detail

/// Refutes pp-definability of `rel` in the core by a polymorphism behaviour
/// of arity <= cap, or reports it definable relative to the caps.
inline PpVerdict pp_definable(const CorePresentation& core, const OrbitUnion& rel, const PpOptions& opts = {}) {
  if (rel.arity > core.level) throw InputError("pp_definable: relation arity exceeds the level");
  validate_orbit_union(core.base_out, rel);
  PpVerdict verdict;
  verdict.arity_cap = opts.arity_cap > 0 ? opts.arity_cap : std::max<int>(1, static_cast<int>(rel.members.size()));
  verdict.realize_cap = opts.realize_cap > 0 ? opts.realize_cap : default_realize_cap(core.level, core.base_out);
  // Declared relations and the full relation are primitive positive outright.
  if (rel.members.size() == enumerate_types(core.base_out, rel.arity).size()) return verdict;
  for (const auto& r : core.reduct_out.relations) {
    if (r.orbits == rel) return verdict;
  }
  for (int m = 1; m <= verdict.arity_cap; ++m) {
    detail::PolymorphismSearch search(core, rel, m, verdict.realize_cap);
    if (auto w = search.run()) {
      verdict.definable = false;
      verdict.witness = std::move(w);
      return verdict;
    }
  }
  return verdict;
}

/// Expansion by every orbit union of arity <= n that is pp-definable up to the caps.
inline Reduct pp_expand(const CorePresentation& core, int n, const PpOptions& opts = {}) {
  std::vector<OrbitUnion> keep;
  for (auto& u : all_orbit_unions(core.base_out, n)) {
    if (pp_definable(core, u, opts).definable) keep.push_back(std::move(u));
  }
  return detail::expand_with(core, keep, "_pp");
}

}  // namespace hbdec
