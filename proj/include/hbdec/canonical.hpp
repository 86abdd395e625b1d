#pragma once

// Behaviours of canonical functions between two bounded classes: maps from
// source k-types to target k-types that are compatible with restriction and
// whose finite traces (image structures) stay inside the target age.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hbdec/parallel.hpp"
#include "hbdec/types.hpp"

namespace hbdec {

class Behaviour {
 public:
  Behaviour(TypeSpacePtr source, TypeSpacePtr target, std::vector<int> table)
      : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
    if (source_->level() != target_->level()) throw InputError("behaviour: level mismatch");
    if (table_.size() != source_->size()) throw InputError("behaviour: table is not total");
    for (int v : table_) {
      if (v < 0 || static_cast<std::size_t>(v) >= target_->size()) {
        throw InputError("behaviour: target index out of range");
      }
    }
  }

  const TypeSpace& source() const { return *source_; }
  const TypeSpace& target() const { return *target_; }
  const TypeSpacePtr& source_ptr() const { return source_; }
  const TypeSpacePtr& target_ptr() const { return target_; }
  int level() const { return source_->level(); }
  const std::vector<int>& table() const { return table_; }
  int operator()(int type) const { return table_[type]; }

  const KType& image(const KType& p) const { return (*target_)[table_[source_->index_of(p)]]; }

  /// Image of an m-type (m <= k): pad to level k, apply, restrict to the first m positions.
  KType apply(const KType& t) const {
    const KType& v = (*target_)[table_[source_->pad(t)]];
    return TypeSpace::prefix(v, t.k());
  }

  bool compatible() const {
    const auto& maps = source_->self_maps();
    for (std::size_t p = 0; p < table_.size(); ++p) {
      for (std::size_t m = 0; m < maps.size(); ++m) {
        if (target_->restriction(table_[p], m) != table_[source_->restriction(static_cast<int>(p), m)]) {
          return false;
        }
      }
    }
    return true;
  }

  /// For every type, "the pair (i,j) is sent to a degenerate pair" is an equivalence on positions.
  bool coherent() const {
    const int k = level();
    const auto& maps = source_->self_maps();
    auto map_index = [&](int i, int j) {
      std::vector<int> sigma(static_cast<std::size_t>(k), j);
      sigma[0] = i;
      return static_cast<std::size_t>(std::find(maps.begin(), maps.end(), sigma) - maps.begin());
    };
    for (std::size_t p = 0; p < table_.size(); ++p) {
      auto collapsed = [&](int i, int j) {
        int pair = source_->restriction(static_cast<int>(p), map_index(i, j));
        return (*target_)[table_[pair]].same(0, 1);
      };
      for (int i = 0; i < k; ++i) {
        if (!collapsed(i, i)) return false;
        for (int j = 0; j < k; ++j) {
          if (collapsed(i, j) != collapsed(j, i)) return false;
          for (int l = 0; l < k; ++l) {
            if (collapsed(i, j) && collapsed(j, l) && !collapsed(i, l)) return false;
          }
        }
      }
    }
    return true;
  }

  /// Distinct positions stay distinct (the behaviour of an injective function).
  bool injective() const {
    for (std::size_t p = 0; p < table_.size(); ++p) {
      if (!preserves_distinctness((*source_)[p], (*target_)[table_[p]])) return false;
    }
    return true;
  }

  static bool preserves_distinctness(const KType& from, const KType& to) {
    for (int i = 0; i < from.k(); ++i) {
      for (int j = i + 1; j < from.k(); ++j) {
        if (!from.same(i, j) && to.same(i, j)) return false;
      }
    }
    return true;
  }

  bool endo() const { return source_->same_space(*target_); }

  bool identity() const {
    if (!endo()) return false;
    for (std::size_t p = 0; p < table_.size(); ++p) {
      if (table_[p] != static_cast<int>(p)) return false;
    }
    return true;
  }

  /// Idempotent on types.
  bool range_rigid() const {
    if (!endo()) return false;
    for (int v : table_) {
      if (table_[v] != v) return false;
    }
    return true;
  }

  std::vector<int> image_set() const {
    std::vector<int> out(table_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool surjective() const { return image_set().size() == target_->size(); }

  /// One line per source type: `p -> q`.
  std::string serialize() const {
    std::string out;
    for (std::size_t p = 0; p < table_.size(); ++p) {
      out += (*source_)[p].to_string() + " -> " + (*target_)[table_[p]].to_string() + "\n";
    }
    return out;
  }

  friend bool operator==(const Behaviour& a, const Behaviour& b) {
    return a.source_->same_space(*b.source_) && a.target_->same_space(*b.target_) && a.table_ == b.table_;
  }

 private:
  TypeSpacePtr source_;
  TypeSpacePtr target_;
  std::vector<int> table_;
};

/// Identity behaviour of a type space.
inline Behaviour identity_behaviour(const TypeSpacePtr& space) {
  std::vector<int> table(space->size());
  std::iota(table.begin(), table.end(), 0);
  return Behaviour(space, space, std::move(table));
}

/// eta after xi.
inline Behaviour compose(const Behaviour& eta, const Behaviour& xi) {
  if (!xi.target().same_space(eta.source())) throw InputError("compose: class or level mismatch");
  std::vector<int> table(xi.table().size());
  for (std::size_t p = 0; p < table.size(); ++p) table[p] = eta(xi(static_cast<int>(p)));
  return Behaviour(xi.source_ptr(), eta.target_ptr(), std::move(table));
}

/// Builds the image of a finite configuration of `points` elements given the
/// target type assigned to every k-tuple of points. Returns nullopt when the
/// assignments do not come from any function: collapsing is not an
/// equivalence, or two k-tuples disagree on the image structure.
template <typename ValueFn>
std::optional<FinStructure> build_image(int points, int k, const SignaturePtr& target_sig, ValueFn&& value) {
  if (k < 2) throw InputError("behaviours need level k >= 2 to observe collapsing");
  if (points == 0) return FinStructure(target_sig, 0);
  std::vector<std::vector<char>> eq(static_cast<std::size_t>(points), std::vector<char>(static_cast<std::size_t>(points), 0));
  Tuple t(static_cast<std::size_t>(k));
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      std::fill(t.begin(), t.end(), j);
      t[0] = i;
      eq[i][j] = value(static_cast<const Tuple&>(t)).same(0, 1) ? 1 : 0;
    }
  }
  for (int i = 0; i < points; ++i) {
    if (!eq[i][i]) return std::nullopt;
    for (int j = 0; j < points; ++j) {
      if (eq[i][j] != eq[j][i]) return std::nullopt;
      for (int l = 0; l < points; ++l) {
        if (eq[i][j] && eq[j][l] && !eq[i][l]) return std::nullopt;
      }
    }
  }
  std::vector<int> block(static_cast<std::size_t>(points), -1);
  std::vector<int> rep;
  for (int i = 0; i < points; ++i) {
    if (block[i] >= 0) continue;
    block[i] = static_cast<int>(rep.size());
    for (int j = i + 1; j < points; ++j) {
      if (eq[i][j]) block[j] = block[i];
    }
    rep.push_back(i);
  }
  const int q = static_cast<int>(rep.size());
  FinStructure img(target_sig, q);
  const auto& sig = *target_sig;
  Tuple prefix;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const int arity = sig[r].arity;
    if (arity > k) throw InputError("target arity exceeds the behaviour level");
    for_each_tuple(q, arity, [&](const Tuple& b) {
      for (int i = 0; i < k; ++i) t[i] = rep[b[std::min(i, arity - 1)]];
      const KType& v = value(static_cast<const Tuple&>(t));
      prefix.assign(v.partition.begin(), v.partition.begin() + arity);
      if (v.quotient.holds(r, prefix)) img.set(r, b);
    });
  }
  bool ok = true;
  Tuple collapsed(static_cast<std::size_t>(k));
  for_each_tuple(points, k, [&](const Tuple& u) {
    if (!ok) return;
    for (int i = 0; i < k; ++i) collapsed[i] = block[u[i]];
    if (!(type_of_unchecked(img, collapsed) == value(u))) ok = false;
  });
  if (!ok) return std::nullopt;
  return img;
}

/// Type indices of every k-tuple of `s` (tuples in lexicographic order).
inline std::vector<int> tuple_types(const TypeSpace& space, const FinStructure& s) {
  std::vector<int> out;
  for_each_tuple(s.size(), space.level(), [&](const Tuple& t) {
    out.push_back(space.index_of(type_of_unchecked(s, t)));
  });
  return out;
}

/// Finite trace of a behaviour on a source age member; nullopt if the
/// behaviour cannot be the behaviour of any function on this structure.
inline std::optional<FinStructure> image_structure(const Behaviour& xi, const FinStructure& s) {
  if (!in_age(xi.source().cls(), s)) throw InputError("image_structure: structure outside the source age");
  const auto types = tuple_types(xi.source(), s);
  const int n = s.size();
  return build_image(n, xi.level(), xi.target().cls().signature, [&](const Tuple& t) -> const KType& {
    return xi.target()[xi(types[s.index(t)])];
  });
}

/// Size bound for the realizability check: large enough to see every target
/// bound, every failure of transitive collapsing (3 points) and every
/// inconsistency between k-tuples sharing all but one element (k+1 points).
inline int default_realize_cap(int k, const BoundedClass& target) {
  return std::max({k + 1, target.max_bound_size(), target.signature->max_arity()});
}

/// Bounded realizability check over all source age members of size <= cap.
class Realizer {
 public:
  Realizer(TypeSpacePtr source, TypeSpacePtr target, int cap = 0)
      : source_(std::move(source)), target_(std::move(target)) {
    cap_ = cap > 0 ? cap : default_realize_cap(source_->level(), target_->cls());
    auto levels = enumerate_age_upto(source_->cls(), cap_);
    for (std::size_t n = 1; n < levels.size(); ++n) {
      for (const auto& s : levels[n]) samples_.push_back({s, tuple_types(*source_, s)});
    }
  }

  int cap() const { return cap_; }

  bool operator()(std::span<const int> table) const {
    for (const auto& sample : samples_) {
      auto img = image(table, sample);
      if (!img || !in_age(target_->cls(), *img)) return false;
    }
    return true;
  }

  bool operator()(const Behaviour& xi) const { return (*this)(xi.table()); }

 private:
  struct Sample {
    FinStructure structure;
    std::vector<int> types;
  };

  std::optional<FinStructure> image(std::span<const int> table, const Sample& sample) const {
    return build_image(sample.structure.size(), source_->level(), target_->cls().signature,
                       [&](const Tuple& t) -> const KType& {
                         return (*target_)[table[sample.types[sample.structure.index(t)]]];
                       });
  }

  TypeSpacePtr source_;
  TypeSpacePtr target_;
  int cap_ = 0;
  std::vector<Sample> samples_;
};

inline bool is_realizable(const Behaviour& xi, int cap = 0) {
  return Realizer(xi.source_ptr(), xi.target_ptr(), cap)(xi);
}

struct BehaviourSearch {
  /// Keep only behaviours sending distinct positions to distinct positions.
  bool injective_only = false;
  /// Applied to complete compatible tables before the realizability check.
  std::function<bool(const Behaviour&)> filter;
  int realize_cap = 0;
  int jobs = 1;
};

/// All compatible, coherent, realizable behaviours, sorted by table.
inline std::vector<Behaviour> enumerate_behaviours(const TypeSpacePtr& source, const TypeSpacePtr& target,
                                                   const BehaviourSearch& opts = {}) {
  const int k = source->level();
  if (target->level() != k) throw InputError("enumerate_behaviours: level mismatch");
  if (k < std::max(source->cls().signature->max_arity(), target->cls().signature->max_arity())) {
    throw InputError("enumerate_behaviours: level below the maximal arity");
  }
  const std::size_t n = source->size();
  const std::size_t nmaps = source->self_maps().size();

  // Assignment order: fewer blocks first, so restrictions are decided early.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return (*source)[a].blocks() < (*source)[b].blocks(); });
  // preimages[p] = (p'', m) with restriction(p'', m) == p.
  std::vector<std::vector<std::pair<int, std::size_t>>> preimages(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t m = 0; m < nmaps; ++m) {
      preimages[source->restriction(static_cast<int>(p), m)].emplace_back(static_cast<int>(p), m);
    }
  }

  std::vector<int> table(n, -1);
  std::vector<std::vector<int>> complete;
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == n) {
      complete.push_back(table);
      return;
    }
    const int p = order[depth];
    for (std::size_t q = 0; q < target->size(); ++q) {
      if (opts.injective_only && !Behaviour::preserves_distinctness((*source)[p], (*target)[q])) continue;
      table[p] = static_cast<int>(q);
      bool ok = true;
      for (std::size_t m = 0; m < nmaps && ok; ++m) {
        int lower = source->restriction(p, m);
        if (table[lower] >= 0 && target->restriction(static_cast<int>(q), m) != table[lower]) ok = false;
      }
      for (const auto& [upper, m] : preimages[p]) {
        if (!ok) break;
        if (table[upper] >= 0 && target->restriction(table[upper], m) != static_cast<int>(q)) ok = false;
      }
      if (ok) rec(depth + 1);
      table[p] = -1;
    }
  };
  rec(0);
  std::sort(complete.begin(), complete.end());

  std::vector<Behaviour> candidates;
  for (auto& t : complete) {
    Behaviour b(source, target, std::move(t));
    if (!b.coherent()) continue;
    if (opts.filter && !opts.filter(b)) continue;
    candidates.push_back(std::move(b));
  }
  Realizer realizer(source, target, opts.realize_cap);
  auto keep = parallel_map<char>(candidates.size(), opts.jobs,
                                 [&](std::size_t i) -> char { return realizer(candidates[i]) ? 1 : 0; });
  std::vector<Behaviour> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (keep[i]) out.push_back(std::move(candidates[i]));
  }
  return out;
}

/// Random age member grown point by point; each new point relates to the
/// existing points (visited in random order) by a uniformly chosen consistent
/// option. Returns a smaller structure if growth gets stuck.
inline FinStructure random_age_member(const BoundedClass& cls, int size, std::mt19937_64& rng) {
  FinStructure s(cls.signature, 0);
  const auto& sig = *cls.signature;
  for (int n = 0; n < size; ++n) {
    bool grown = false;
    for (int attempt = 0; attempt < 50 && !grown; ++attempt) {
      FinStructure work(cls.signature, n + 1);
      for (std::size_t r = 0; r < sig.size(); ++r) {
        for (const auto& t : s.tuples(r)) work.set(r, t);
      }
      std::vector<int> old(static_cast<std::size_t>(n));
      std::iota(old.begin(), old.end(), 0);
      std::shuffle(old.begin(), old.end(), rng);
      std::vector<int> decided{n};
      bool stuck = false;
      for (std::size_t step = 0; step <= old.size() && !stuck; ++step) {
        if (step > 0) decided.push_back(old[step - 1]);
        std::vector<std::pair<std::size_t, Tuple>> free;
        std::vector<int> sorted = decided;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t r = 0; r < sig.size(); ++r) {
          for_each_tuple(static_cast<int>(sorted.size()), sig[r].arity, [&](const Tuple& local) {
            Tuple t(local.size());
            for (std::size_t i = 0; i < local.size(); ++i) t[i] = sorted[local[i]];
            if (std::find(t.begin(), t.end(), n) == t.end()) return;
            if (step > 0 && std::find(t.begin(), t.end(), old[step - 1]) == t.end()) return;
            free.emplace_back(r, t);
          });
        }
        auto assign = [&](std::uint64_t mask) {
          for (std::size_t b = 0; b < free.size(); ++b) work.set(free[b].first, free[b].second, ((mask >> b) & 1U) != 0);
        };
        std::vector<std::uint64_t> valid;
        if (free.size() <= 12) {
          for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
            assign(mask);
            if (in_age(cls, induced(work, sorted))) valid.push_back(mask);
          }
        } else {
          std::uniform_int_distribution<std::uint64_t> bits(0, (std::uint64_t{1} << free.size()) - 1);
          for (int tries = 0; tries < 64 && valid.empty(); ++tries) {
            std::uint64_t mask = bits(rng);
            assign(mask);
            if (in_age(cls, induced(work, sorted))) valid.push_back(mask);
          }
        }
        if (valid.empty()) {
          stuck = true;
          break;
        }
        std::uniform_int_distribution<std::size_t> pick(0, valid.size() - 1);
        assign(valid[pick(rng)]);
      }
      if (!stuck) {
        s = work;
        grown = true;
      }
    }
    if (!grown) break;
  }
  return s;
}

struct ProbeReport {
  bool applicable = true;
  int trials = 0;
  int max_size = 0;
  std::uint64_t seed = 0;
  int failures = 0;
  std::vector<std::string> details;
};

/// Randomized cross-check of the bounded realizability decision on larger
/// age members: images must lie in the target age and the images of
/// prefixes must be the corresponding induced substructures.
inline ProbeReport greedy_extension_probe(const Behaviour& xi, int max_size, int trials, std::uint64_t seed,
                                          int realize_cap = 0) {
  ProbeReport report;
  report.trials = trials;
  report.max_size = max_size;
  report.seed = seed;
  if (!is_realizable(xi, realize_cap)) {
    report.applicable = false;
    return report;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> sizes(1, std::max(1, max_size));
  for (int trial = 0; trial < trials; ++trial) {
    FinStructure s = random_age_member(xi.source().cls(), sizes(rng), rng);
    auto img = image_structure(xi, s);
    auto fail = [&](const std::string& why) {
      ++report.failures;
      report.details.push_back(why + " on " + to_literal(s));
    };
    if (!img) {
      fail("inconsistent image");
      continue;
    }
    if (!in_age(xi.target().cls(), *img)) {
      fail("image outside the target age");
      continue;
    }
    // Collapse classes of s, numbered by least element.
    const auto types = tuple_types(xi.source(), s);
    std::vector<int> block_of(static_cast<std::size_t>(s.size()), -1);
    {
      Tuple t(static_cast<std::size_t>(xi.level()));
      int next = 0;
      for (int i = 0; i < s.size(); ++i) {
        if (block_of[i] >= 0) continue;
        block_of[i] = next;
        for (int j = i + 1; j < s.size(); ++j) {
          std::fill(t.begin(), t.end(), j);
          t[0] = i;
          if (xi.target()[xi(types[s.index(t)])].same(0, 1)) block_of[j] = next;
        }
        ++next;
      }
    }
    for (int len = 1; len < s.size(); ++len) {
      std::vector<int> prefix(static_cast<std::size_t>(len));
      std::iota(prefix.begin(), prefix.end(), 0);
      auto part = image_structure(xi, induced(s, prefix));
      if (!part) {
        fail("inconsistent image of a prefix");
        break;
      }
      std::vector<int> blocks;
      for (int i = 0; i < len; ++i) {
        if (std::find(blocks.begin(), blocks.end(), block_of[i]) == blocks.end()) blocks.push_back(block_of[i]);
      }
      if (!(induced(*img, blocks) == *part)) {
        fail("prefix image is not an induced substructure of the image");
        break;
      }
    }
  }
  return report;
}

}  // namespace hbdec
