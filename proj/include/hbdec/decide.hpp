#pragma once

// Bi-definability of model-complete cores, and bi-interpretability under the
// no-algebraicity (and, for pp, transitivity) preconditions.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hbdec/definability.hpp"

namespace hbdec {

enum class Mode { fo, ep, pp };
enum class Answer { yes, no, precondition_failed };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::fo:
      return "fo";
    case Mode::ep:
      return "ep";
    case Mode::pp:
      return "pp";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "fo") return Mode::fo;
  if (s == "ep") return Mode::ep;
  if (s == "pp") return Mode::pp;
  throw InputError("unknown mode '" + std::string(s) + "' (expected fo, ep or pp)");
}

inline std::string to_string(Answer a) {
  switch (a) {
    case Answer::yes:
      return "YES";
    case Answer::no:
      return "NO";
    case Answer::precondition_failed:
      return "PRECONDITION-FAILED";
  }
  return "?";
}

struct DecideOptions {
  Mode mode = Mode::fo;
  int k = 0;            // 0: the larger default level of the two reducts
  int n = 0;            // expansion arity; 0: largest relation arity of the inputs
  int realize_cap = 0;  // 0: default per target class
  int arity_cap = 0;    // pp only; 0: per relation default
  int ap_cap = 0;       // biint only; 0: default_amalgamation_cap
  int jobs = 1;
};

struct Caps {
  int k = 0;
  int n = 0;
  int realize_cap_forward = 0;
  int realize_cap_backward = 0;
  int arity_cap = 0;
  int ap_cap = 0;
};

struct BidefWitness {
  Reduct source;  // expanded core of the first input
  Reduct target;  // expanded core of the second input
  Behaviour xi;   // source -> target
  Behaviour eta;  // target -> source
  /// tau, in source relation order: (source relation, target relation).
  std::vector<std::pair<std::string, std::string>> matching;
};

struct Verdict {
  Answer answer = Answer::no;
  Mode mode = Mode::fo;
  Caps caps;
  std::string reason;
  std::optional<BidefWitness> witness;
  std::optional<AmalgamationReport> amalgamation;
};

namespace detail {

inline Reduct expand_core(const CorePresentation& core, Mode mode, int n, int arity_cap, int realize_cap, int jobs) {
  if (mode == Mode::pp) return pp_expand(core, n, PpOptions{arity_cap, realize_cap});
  return ep_expand(core, n, realize_cap, jobs);
}

/// Image of a relation of the source under a behaviour (padding convention).
inline OrbitUnion image_union(const Behaviour& xi, const OrbitUnion& u) {
  std::vector<KType> out;
  for (const auto& t : u.members) out.push_back(xi.apply(t));
  return make_orbit_union(u.arity, std::move(out));
}

/// Lexicographically least relation bijection with xi(R) == tau(R), as target indices.
inline std::optional<std::vector<int>> least_matching(const Behaviour& xi, const Reduct& a, const Reduct& b) {
  if (a.relations.size() != b.relations.size()) return std::nullopt;
  std::vector<char> used(b.relations.size(), 0);
  std::vector<int> tau;
  for (const auto& r : a.relations) {
    OrbitUnion img = image_union(xi, r.orbits);
    int pick = -1;
    for (std::size_t j = 0; j < b.relations.size() && pick < 0; ++j) {
      if (!used[j] && b.relations[j].arity == r.arity && b.relations[j].orbits == img) pick = static_cast<int>(j);
    }
    if (pick < 0) return std::nullopt;
    used[pick] = 1;
    tau.push_back(pick);
  }
  return tau;
}

}  // namespace detail

inline Verdict decide_bidef(const Reduct& c, const Reduct& d, const DecideOptions& opts = {}) {
  require_flags(c.base);
  require_flags(d.base);
  Verdict v;
  v.mode = opts.mode;
  const int k = std::max({opts.k, default_level(c), default_level(d)});
  const int n_default = std::max(c.max_arity(), d.max_arity());
  if (opts.n != 0 && opts.n < n_default) throw InputError("expansion arity below the largest relation arity");
  const int n = std::max({1, opts.n, n_default});
  if (n > k) throw InputError("expansion arity exceeds the level");
  v.caps.k = k;
  v.caps.n = n;
  v.caps.arity_cap = opts.arity_cap;

  CoreOptions co{k, opts.realize_cap, opts.jobs};
  CorePresentation ca = compute_core(c, co);
  CorePresentation cb = compute_core(d, co);
  Reduct ea = detail::expand_core(ca, opts.mode, n, opts.arity_cap, opts.realize_cap, opts.jobs);
  Reduct eb = detail::expand_core(cb, opts.mode, n, opts.arity_cap, opts.realize_cap, opts.jobs);

  auto sa = make_type_space(ca.base_out, k);
  auto sb = make_type_space(cb.base_out, k);
  v.caps.realize_cap_forward = opts.realize_cap > 0 ? opts.realize_cap : default_realize_cap(k, cb.base_out);
  v.caps.realize_cap_backward = opts.realize_cap > 0 ? opts.realize_cap : default_realize_cap(k, ca.base_out);
  if (sa->size() != sb->size()) {
    v.reason = "the cores have " + std::to_string(sa->size()) + " and " + std::to_string(sb->size()) + " " +
               std::to_string(k) + "-types";
    return v;
  }
  if (ea.relations.size() != eb.relations.size()) {
    v.reason = "the expansions have different numbers of relations";
    return v;
  }

  BehaviourSearch search;
  search.injective_only = true;
  search.realize_cap = opts.realize_cap;
  search.jobs = opts.jobs;
  auto forward = enumerate_behaviours(sa, sb, search);
  auto backward = enumerate_behaviours(sb, sa, search);

  std::optional<std::vector<int>> best;
  for (const auto& xi : forward) {
    if (xi.image_set().size() != sb->size()) continue;
    std::vector<int> inverse(sb->size());
    for (std::size_t p = 0; p < xi.table().size(); ++p) inverse[xi(static_cast<int>(p))] = static_cast<int>(p);
    auto eta = std::find_if(backward.begin(), backward.end(), [&](const Behaviour& b) { return b.table() == inverse; });
    if (eta == backward.end()) continue;
    auto tau = detail::least_matching(xi, ea, eb);
    if (!tau) continue;
    // eta must carry every tau(R) back onto R.
    bool back = true;
    for (std::size_t i = 0; i < tau->size() && back; ++i) {
      back = detail::image_union(*eta, eb.relations[(*tau)[i]].orbits) == ea.relations[i].orbits;
    }
    if (!back) continue;
    if (!best || *tau < *best) {
      best = tau;
      std::vector<std::pair<std::string, std::string>> matching;
      for (std::size_t i = 0; i < tau->size(); ++i) {
        matching.emplace_back(ea.relations[i].name, eb.relations[(*tau)[i]].name);
      }
      v.witness = BidefWitness{ea, eb, xi, *eta, std::move(matching)};
    }
  }
  if (v.witness) {
    v.answer = Answer::yes;
    v.reason = "mutually inverse realizable behaviours carry the expansions onto each other";
  } else {
    v.reason = "no pair of mutually inverse realizable behaviours respects any relation matching";
    if (opts.mode == Mode::pp) v.reason += " (relative to the pp arity cap)";
  }
  return v;
}

inline Verdict decide_biint(const Reduct& c, const Reduct& d, const DecideOptions& opts = {}) {
  require_flags(c.base);
  require_flags(d.base);
  const int k = std::max({opts.k, default_level(c), default_level(d)});
  CoreOptions co{k, opts.realize_cap, opts.jobs};
  int ap_used = 0;
  for (const Reduct* r : {&c, &d}) {
    if (opts.mode == Mode::pp) {
      std::size_t ones = count_one_types(r->base);
      if (ones != 1) {
        Verdict v;
        v.answer = Answer::precondition_failed;
        v.mode = opts.mode;
        v.caps.k = k;
        v.reason = "class " + r->base.name + " is not transitive (" + std::to_string(ones) + " 1-types)";
        return v;
      }
    }
    CorePresentation core = compute_core(*r, co);
    const int cap = opts.ap_cap > 0 ? opts.ap_cap : default_amalgamation_cap(core.base_out);
    ap_used = std::max(ap_used, cap);
    auto report = check_amalgamation(core.base_out, cap, true);
    if (!report.pass) {
      Verdict v;
      v.answer = Answer::precondition_failed;
      v.mode = opts.mode;
      v.caps.k = k;
      v.caps.ap_cap = cap;
      v.reason = "core of " + r->name + " fails strong amalgamation up to size " + std::to_string(cap) +
                 " (proxy for algebraicity)";
      v.amalgamation = std::move(report);
      return v;
    }
  }
  Verdict v = decide_bidef(c, d, opts);
  v.caps.ap_cap = ap_used;
  return v;
}

}  // namespace hbdec
