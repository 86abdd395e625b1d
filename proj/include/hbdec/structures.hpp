#pragma once

// Finite relational structures over an explicit signature.
//
// Encoding (used for canonical forms and golden files): the bit-encoding of
// a structure of size n is the concatenation, for every symbol in signature
// order, of one bit per tuple of {0,...,n-1}^arity, tuples in lexicographic
// order with the first coordinate most significant; the bit is 1 iff the
// tuple is in the relation. Structures are ordered by (size, encoding) and
// the canonical form is the relabelling with the lexicographically least
// encoding.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbdec/error.hpp"

namespace hbdec {

struct Symbol {
  std::string name;
  int arity = 1;

  bool operator==(const Symbol&) const = default;
};

class Signature {
 public:
  Signature() = default;

  explicit Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].arity < 1) {
        throw InputError("symbol '" + symbols_[i].name + "' must have positive arity");
      }
      if (symbols_[i].name.empty()) throw InputError("empty symbol name");
      for (std::size_t j = 0; j < i; ++j) {
        if (symbols_[j].name == symbols_[i].name) {
          throw InputError("duplicate symbol '" + symbols_[i].name + "'");
        }
      }
    }
  }

  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].name == name) return i;
    }
    return std::nullopt;
  }

  int max_arity() const {
    int m = 0;
    for (const auto& s : symbols_) m = std::max(m, s.arity);
    return m;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& s : symbols_) {
      if (!out.empty()) out += ' ';
      out += s.name + "/" + std::to_string(s.arity);
    }
    return out;
  }

  bool operator==(const Signature&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

inline SignaturePtr make_signature(std::vector<Symbol> symbols) {
  return std::make_shared<const Signature>(std::move(symbols));
}

using Tuple = std::vector<int>;

inline std::size_t int_pow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Calls fn(tuple) for every tuple of {0,...,n-1}^arity in lexicographic order.
template <typename Fn>
void for_each_tuple(int n, int arity, Fn&& fn) {
  if (n <= 0 && arity > 0) return;
  Tuple t(static_cast<std::size_t>(arity), 0);
  while (true) {
    fn(static_cast<const Tuple&>(t));
    int pos = arity - 1;
    while (pos >= 0 && t[pos] == n - 1) {
      t[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
    ++t[pos];
  }
}

class FinStructure {
 public:
  FinStructure() : sig_(std::make_shared<const Signature>()), size_(0) {}

  FinStructure(SignaturePtr sig, int size) : sig_(std::move(sig)), size_(size) {
    if (size_ < 0) throw InputError("structure size must be non-negative");
    tables_.reserve(sig_->size());
    for (const auto& s : sig_->symbols()) {
      tables_.emplace_back(int_pow(static_cast<std::size_t>(size_), s.arity), 0);
    }
  }

  const Signature& signature() const { return *sig_; }
  const SignaturePtr& signature_ptr() const { return sig_; }
  int size() const { return size_; }

  bool holds(std::size_t symbol, std::span<const int> t) const {
    return tables_[symbol][index(t)] != 0;
  }

  void set(std::size_t symbol, std::span<const int> t, bool value = true) {
    for (int v : t) {
      if (v < 0 || v >= size_) {
        throw InputError("tuple entry " + std::to_string(v) + " out of range for size " +
                         std::to_string(size_));
      }
    }
    if (static_cast<int>(t.size()) != (*sig_)[symbol].arity) {
      throw InputError("arity mismatch for symbol '" + (*sig_)[symbol].name + "'");
    }
    tables_[symbol][index(t)] = value ? 1 : 0;
  }

  /// Tuples of a relation in lexicographic order.
  std::vector<Tuple> tuples(std::size_t symbol) const {
    std::vector<Tuple> out;
    for_each_tuple(size_, (*sig_)[symbol].arity, [&](const Tuple& t) {
      if (holds(symbol, t)) out.push_back(t);
    });
    return out;
  }

  /// Raw table of a symbol, indexed by the lexicographic rank of the tuple.
  const std::vector<std::uint8_t>& table(std::size_t symbol) const { return tables_[symbol]; }

  std::size_t index(std::span<const int> t) const {
    std::size_t idx = 0;
    for (int v : t) idx = idx * static_cast<std::size_t>(size_) + static_cast<std::size_t>(v);
    return idx;
  }

  std::string encoding() const {
    std::string bits;
    for (const auto& tab : tables_) {
      for (auto b : tab) bits += b ? '1' : '0';
    }
    return bits;
  }

  friend bool operator==(const FinStructure& a, const FinStructure& b) {
    if (a.size_ != b.size_ || a.tables_ != b.tables_) return false;
    return a.sig_ == b.sig_ || *a.sig_ == *b.sig_;
  }

  /// Ordering by (size, encoding). Only meaningful within one signature.
  friend std::strong_ordering operator<=>(const FinStructure& a, const FinStructure& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    for (std::size_t s = 0; s < a.tables_.size() && s < b.tables_.size(); ++s) {
      const auto& x = a.tables_[s];
      const auto& y = b.tables_[s];
      if (auto c = std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
          c != 0) {
        return c;
      }
    }
    return a.tables_.size() <=> b.tables_.size();
  }

 private:
  SignaturePtr sig_;
  int size_;
  std::vector<std::vector<std::uint8_t>> tables_;
};

// ---------------------------------------------------------------------------
// Literal syntax: `size=<n>: R(i,j,...) S(k) ...`

inline std::string to_literal(const FinStructure& s) {
  std::string out = "size=" + std::to_string(s.size()) + ":";
  const auto& sig = s.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (const auto& t : s.tuples(r)) {
      out += ' ';
      out += sig[r].name;
      out += '(';
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(t[i]);
      }
      out += ')';
    }
  }
  return out;
}

inline FinStructure parse_literal(std::string_view text, const SignaturePtr& sig) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> void {
    throw InputError("structure literal '" + std::string(text) + "': " + what + " at offset " +
                     std::to_string(pos));
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_int = [&]() -> int {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected a number");
    if (pos - start > 6) fail("number too large");
    return std::stoi(std::string(text.substr(start, pos - start)));
  };
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  };

  skip_ws();
  if (text.substr(pos, 4) != "size") fail("expected 'size='");
  pos += 4;
  expect('=');
  int n = read_int();
  expect(':');
  FinStructure out(sig, n);
  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    if (start == pos) fail("expected an atom");
    std::string name(text.substr(start, pos - start));
    auto sym = sig->find(name);
    if (!sym) fail("unknown symbol '" + name + "'");
    expect('(');
    Tuple t;
    while (true) {
      t.push_back(read_int());
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    expect(')');
    if (static_cast<int>(t.size()) != (*sig)[*sym].arity) fail("arity mismatch for '" + name + "'");
    for (int v : t) {
      if (v >= n) fail("index " + std::to_string(v) + " out of range");
    }
    out.set(*sym, t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Basic operations

/// Substructure on the listed points, reindexed by position in `subset`.
inline FinStructure induced(const FinStructure& s, std::span<const int> subset) {
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= s.size()) {
      throw InputError("induced: index " + std::to_string(subset[i]) + " out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (subset[j] == subset[i]) throw InputError("induced: repeated index");
    }
  }
  const int m = static_cast<int>(subset.size());
  FinStructure out(s.signature_ptr(), m);
  const auto& sig = s.signature();
  Tuple image;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for_each_tuple(m, sig[r].arity, [&](const Tuple& t) {
      image.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = subset[t[i]];
      if (s.holds(r, image)) out.set(r, t);
    });
  }
  return out;
}

/// Relabelling: point i of `s` becomes point perm[i].
inline FinStructure permuted(const FinStructure& s, std::span<const int> perm) {
  FinStructure out(s.signature_ptr(), s.size());
  const auto& sig = s.signature();
  Tuple image;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for_each_tuple(s.size(), sig[r].arity, [&](const Tuple& t) {
      if (!s.holds(r, t)) return;
      image.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = perm[t[i]];
      out.set(r, image);
    });
  }
  return out;
}

namespace detail {

// Backtracking search for an embedding; `map[i]` is the image of point i.
inline bool extend_embedding(const FinStructure& p, const FinStructure& s, std::vector<int>& map,
                             std::vector<char>& used, int next) {
  if (next == p.size()) return true;
  const auto& sig = p.signature();
  Tuple image;
  for (int cand = 0; cand < s.size(); ++cand) {
    if (used[cand]) continue;
    map[next] = cand;
    bool ok = true;
    for (std::size_t r = 0; r < sig.size() && ok; ++r) {
      for_each_tuple(next + 1, sig[r].arity, [&](const Tuple& t) {
        if (!ok) return;
        if (std::find(t.begin(), t.end(), next) == t.end()) return;
        image.resize(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) image[i] = map[t[i]];
        if (p.holds(r, t) != s.holds(r, image)) ok = false;
      });
    }
    if (!ok) continue;
    used[cand] = 1;
    if (extend_embedding(p, s, map, used, next + 1)) return true;
    used[cand] = 0;
  }
  return false;
}

}  // namespace detail

/// True iff there is an injective map preserving and reflecting every relation.
inline bool embeds(const FinStructure& p, const FinStructure& s, std::vector<int>* witness = nullptr) {
  if (!(p.signature() == s.signature())) throw InputError("embeds: signature mismatch");
  if (p.size() > s.size()) return false;
  std::vector<int> map(static_cast<std::size_t>(p.size()), -1);
  std::vector<char> used(static_cast<std::size_t>(s.size()), 0);
  if (!detail::extend_embedding(p, s, map, used, 0)) return false;
  if (witness) *witness = map;
  return true;
}

/// The relabelling of `s` with least encoding (exhaustive over all permutations).
inline FinStructure canonical_form(const FinStructure& s) {
  const int n = s.size();
  if (n <= 1) return s;
  const auto& sig = s.signature();
  // sigma maps new labels to old labels; the candidate bit at new tuple u is s[sigma(u)].
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<int> best = sigma;
  Tuple image;
  auto compare = [&](const std::vector<int>& a, const std::vector<int>& b) {
    // <0 if candidate under a is smaller than under b.
    int result = 0;
    for (std::size_t r = 0; r < sig.size() && result == 0; ++r) {
      for_each_tuple(n, sig[r].arity, [&](const Tuple& u) {
        if (result != 0) return;
        image.resize(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) image[i] = a[u[i]];
        bool x = s.holds(r, image);
        for (std::size_t i = 0; i < u.size(); ++i) image[i] = b[u[i]];
        bool y = s.holds(r, image);
        if (x != y) result = x ? 1 : -1;
      });
    }
    return result;
  };
  while (std::next_permutation(sigma.begin(), sigma.end())) {
    if (compare(sigma, best) < 0) best = sigma;
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[best[i]] = i;
  return permuted(s, perm);
}

inline bool isomorphic(const FinStructure& a, const FinStructure& b) {
  return a.size() == b.size() && embeds(a, b);
}

/// Downward-closed membership predicate used to prune enumerations.
using StructurePredicate = std::function<bool(const FinStructure&)>;

/// Calls fn(ext) for every structure on size(s)+1 points whose restriction to
/// the first size(s) points is s and that passes `keep` (which must be
/// downward closed; it is applied to partial restrictions while branching).
template <typename Fn>
void for_each_one_point_extension(const FinStructure& s, const StructurePredicate& keep, Fn&& fn) {
  const int n = s.size();
  const int fresh = n;
  const auto& sig = s.signature();
  FinStructure work(s.signature_ptr(), n + 1);
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (const auto& t : s.tuples(r)) work.set(r, t);
  }
  // Step j (-1 for "fresh point only") decides tuples containing the fresh
  // point whose largest old entry is j.
  std::vector<std::vector<std::pair<std::size_t, Tuple>>> steps(static_cast<std::size_t>(n + 1));
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for_each_tuple(n + 1, sig[r].arity, [&](const Tuple& t) {
      if (std::find(t.begin(), t.end(), fresh) == t.end()) return;
      int top = -1;
      for (int v : t) {
        if (v != fresh) top = std::max(top, v);
      }
      steps[static_cast<std::size_t>(top + 1)].emplace_back(r, t);
    });
  }
  std::vector<int> domain;
  std::function<void(int)> rec = [&](int step) {
    if (step == n + 1) {
      fn(static_cast<const FinStructure&>(work));
      return;
    }
    const auto& free = steps[static_cast<std::size_t>(step)];
    if (free.size() > 24) throw InputError("one-point extension step exceeds 24 free tuples");
    domain.clear();
    for (int i = 0; i < step; ++i) domain.push_back(i);
    domain.push_back(fresh);
    std::vector<int> dom = domain;
    const std::uint64_t limit = std::uint64_t{1} << free.size();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      for (std::size_t b = 0; b < free.size(); ++b) {
        work.set(free[b].first, free[b].second, ((mask >> b) & 1U) != 0);
      }
      if (keep && !keep(induced(work, dom))) continue;
      rec(step + 1);
    }
    for (const auto& [r, t] : free) work.set(r, t, false);
  };
  rec(0);
}

/// Canonical representatives of all isomorphism classes of each size 0..n
/// that pass `keep`, sorted by canonical order within each size.
inline std::vector<std::vector<FinStructure>> enumerate_structures_upto(
    const SignaturePtr& sig, int n, const StructurePredicate& keep = {}) {
  std::vector<std::vector<FinStructure>> levels;
  FinStructure empty(sig, 0);
  levels.push_back({});
  if (!keep || keep(empty)) levels[0].push_back(empty);
  for (int size = 1; size <= n; ++size) {
    std::set<FinStructure> found;
    for (const auto& base : levels.back()) {
      for_each_one_point_extension(base, keep, [&](const FinStructure& ext) {
        found.insert(canonical_form(ext));
      });
    }
    levels.emplace_back(found.begin(), found.end());
  }
  return levels;
}

/// One canonical representative per isomorphism class of size n, in canonical order.
inline std::vector<FinStructure> enumerate_structures(const SignaturePtr& sig, int n,
                                                      const StructurePredicate& keep = {}) {
  if (n < 0) throw InputError("enumerate_structures: negative size");
  return enumerate_structures_upto(sig, n, keep).back();
}

}  // namespace hbdec
