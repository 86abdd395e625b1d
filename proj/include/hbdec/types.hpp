#pragma once

// Complete quantifier-free k-types: an equality pattern on k positions plus
// the structure induced on the blocks. For a homogeneous base structure these
// are exactly the orbits of k-tuples.
//
// Serialization: `[p0,p1,...|<structure literal>]` where p is the block
// index of each position (blocks numbered by least position) and the literal
// is the quotient with block i as point i.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hbdec/ages.hpp"

namespace hbdec {

struct KType {
  std::vector<int> partition;
  FinStructure quotient;

  int k() const { return static_cast<int>(partition.size()); }
  int blocks() const { return quotient.size(); }
  bool injective() const { return blocks() == k(); }

  /// Positions i and j hold the same element.
  bool same(int i, int j) const { return partition[i] == partition[j]; }

  friend bool operator==(const KType&, const KType&) = default;
  friend std::strong_ordering operator<=>(const KType& a, const KType& b) {
    if (auto c = a.partition <=> b.partition; c != 0) return c;
    return a.quotient <=> b.quotient;
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < partition.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(partition[i]);
    }
    return out + "|" + to_literal(quotient) + "]";
  }
};

/// Restricted-growth normalization of an equality pattern.
inline std::vector<int> normalize_partition(std::span<const int> labels) {
  std::vector<int> out;
  std::vector<std::pair<int, int>> seen;
  out.reserve(labels.size());
  for (int l : labels) {
    int id = -1;
    for (const auto& [from, to] : seen) {
      if (from == l) id = to;
    }
    if (id < 0) {
      id = static_cast<int>(seen.size());
      seen.emplace_back(l, id);
    }
    out.push_back(id);
  }
  return out;
}

/// The type of tuple (t_sigma(0), ..., t_sigma(j-1)) for t of type p.
inline KType restrict_type(const KType& p, std::span<const int> sigma) {
  std::vector<int> labels;
  labels.reserve(sigma.size());
  for (int s : sigma) {
    if (s < 0 || s >= p.k()) throw InputError("restrict_type: map out of range");
    labels.push_back(p.partition[s]);
  }
  KType out;
  out.partition = normalize_partition(labels);
  std::vector<int> blocks;
  for (int l : labels) {
    if (std::find(blocks.begin(), blocks.end(), l) == blocks.end()) blocks.push_back(l);
  }
  out.quotient = induced(p.quotient, blocks);
  return out;
}

/// Type of a tuple in a structure, without an age check.
inline KType type_of_unchecked(const FinStructure& s, std::span<const int> tuple) {
  KType out;
  out.partition = normalize_partition(tuple);
  std::vector<int> distinct;
  for (int v : tuple) {
    if (v < 0 || v >= s.size()) throw InputError("type_of: tuple entry out of range");
    if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) distinct.push_back(v);
  }
  out.quotient = induced(s, distinct);
  return out;
}

inline KType type_of(const BoundedClass& k, const FinStructure& s, std::span<const int> tuple) {
  if (!in_age(k, s)) throw InputError("type_of: structure is not in the age of " + k.name);
  return type_of_unchecked(s, tuple);
}

/// All restricted-growth strings of length k in lexicographic order.
inline std::vector<std::vector<int>> set_partitions(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int top) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int b = 0; b <= top + 1; ++b) {
      cur.push_back(b);
      rec(std::max(top, b));
      cur.pop_back();
    }
  };
  rec(-1);
  return out;
}

/// Every k-type of the class, sorted (by partition, then quotient encoding).
inline std::vector<KType> enumerate_types(const BoundedClass& cls, int k) {
  if (k < 1) throw InputError("enumerate_types: k must be positive");
  std::vector<std::vector<FinStructure>> labelled(static_cast<std::size_t>(k + 1));
  for (int b = 1; b <= k; ++b) labelled[b] = labelled_age_members(cls, b);
  std::vector<KType> out;
  for (const auto& part : set_partitions(k)) {
    int blocks = *std::max_element(part.begin(), part.end()) + 1;
    for (const auto& q : labelled[blocks]) out.push_back(KType{part, q});
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline KType parse_type(std::string_view text, const SignaturePtr& sig) {
  auto fail = [&](const std::string& what) {
    throw InputError("type literal '" + std::string(text) + "': " + what);
  };
  std::size_t a = text.find('[');
  std::size_t bar = text.find('|');
  std::size_t b = text.rfind(']');
  if (a == std::string_view::npos || bar == std::string_view::npos || b == std::string_view::npos ||
      !(a < bar && bar < b)) {
    fail("expected [partition|structure]");
  }
  KType t;
  std::string_view part = text.substr(a + 1, bar - a - 1);
  std::string num;
  auto flush = [&] {
    if (num.empty()) fail("empty partition entry");
    if (num.size() > 4) fail("partition entry too large");
    t.partition.push_back(std::stoi(num));
    num.clear();
  };
  for (char c : part) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == ',') {
      flush();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      num += c;
    } else {
      fail("bad partition character");
    }
  }
  flush();
  if (normalize_partition(t.partition) != t.partition) fail("partition is not in block order");
  t.quotient = parse_literal(text.substr(bar + 1, b - bar - 1), sig);
  int blocks = *std::max_element(t.partition.begin(), t.partition.end()) + 1;
  if (t.quotient.size() != blocks) fail("quotient size differs from the number of blocks");
  return t;
}

/// Maps {0..k-1} -> {0..k-1} indexed by their base-k value (first entry most significant).
inline std::vector<std::vector<int>> all_self_maps(int k) {
  std::vector<std::vector<int>> out;
  for_each_tuple(k, k, [&](const Tuple& t) { out.push_back(t); });
  return out;
}

/// The k-types of a class with index lookup and a precomputed table of
/// restrictions along every self-map of {0..k-1}.
class TypeSpace {
 public:
  TypeSpace(BoundedClass cls, int k, bool with_restrictions = true)
      : cls_(std::move(cls)), k_(k), types_(enumerate_types(cls_, k)) {
    for (std::size_t i = 0; i < types_.size(); ++i) index_.emplace(types_[i], static_cast<int>(i));
    if (with_restrictions) {
      maps_ = all_self_maps(k);
      restrict_.assign(types_.size(), std::vector<int>(maps_.size(), -1));
      for (std::size_t p = 0; p < types_.size(); ++p) {
        for (std::size_t m = 0; m < maps_.size(); ++m) {
          restrict_[p][m] = index_of(restrict_type(types_[p], maps_[m]));
        }
      }
    }
  }

  const BoundedClass& cls() const { return cls_; }
  int level() const { return k_; }
  std::size_t size() const { return types_.size(); }
  const std::vector<KType>& types() const { return types_; }
  const KType& operator[](std::size_t i) const { return types_[i]; }

  std::optional<int> find(const KType& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int index_of(const KType& t) const {
    auto i = find(t);
    if (!i) throw InputError("type " + t.to_string() + " is not a type of class " + cls_.name);
    return *i;
  }

  const std::vector<std::vector<int>>& self_maps() const { return maps_; }
  int restriction(int type, std::size_t map) const { return restrict_[type][map]; }

  /// Index of the k-type obtained by padding an m-type (m <= k) with copies of its last position.
  int pad(const KType& t) const {
    if (t.k() > k_ || t.k() < 1) throw InputError("pad: arity exceeds the level");
    std::vector<int> sigma(static_cast<std::size_t>(k_));
    for (int i = 0; i < k_; ++i) sigma[i] = std::min(i, t.k() - 1);
    return index_of(restrict_type(t, sigma));
  }

  /// Restriction of a k-type to its first m positions.
  static KType prefix(const KType& t, int m) {
    std::vector<int> sigma(static_cast<std::size_t>(m));
    std::iota(sigma.begin(), sigma.end(), 0);
    return restrict_type(t, sigma);
  }

  /// Same class presentation and level.
  bool same_space(const TypeSpace& o) const {
    return this == &o || (k_ == o.k_ && cls_.same_age_presentation(o.cls_));
  }

 private:
  BoundedClass cls_;
  int k_;
  std::vector<KType> types_;
  std::map<KType, int> index_;
  std::vector<std::vector<int>> maps_;
  std::vector<std::vector<int>> restrict_;
};

using TypeSpacePtr = std::shared_ptr<const TypeSpace>;

inline TypeSpacePtr make_type_space(const BoundedClass& cls, int k) {
  return std::make_shared<const TypeSpace>(cls, k);
}

/// Number of 1-types; 1 means the base structure is transitive.
inline std::size_t count_one_types(const BoundedClass& cls) { return enumerate_types(cls, 1).size(); }

}  // namespace hbdec
