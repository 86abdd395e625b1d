#pragma once

// Brute-force references shared by the unit tests and the acceptance run.

#include <set>
#include <string>
#include <vector>

#include "hbdec/certificate.hpp"
#include "hbdec/verify.hpp"

namespace oracles {

using TableSet = std::set<hbdec::verify::Table>;

inline hbdec::verify::VClass vclass(const hbdec::BoundedClass& k) {
  return hbdec::verify::read_structures(hbdec::serialize_class(k)).classes.at(k.name);
}

// Every total table between the k-types, kept when the independent checker
// finds a consistent image in the target age for each small source member.
inline TableSet behaviours(const hbdec::BoundedClass& a, const hbdec::BoundedClass& b, int k) {
  namespace v = hbdec::verify;
  auto va = vclass(a);
  auto vb = vclass(b);
  auto src = v::types_of(va, k);
  auto tgt = v::types_of(vb, k);
  std::vector<std::string> sk;
  std::vector<std::string> tk;
  for (const auto& [key, _] : src) sk.push_back(key);
  for (const auto& [key, _] : tgt) tk.push_back(key);
  const int cap = v::detail::realize_bound(k, vb);
  TableSet out;
  std::vector<std::size_t> digits(sk.size(), 0);
  while (true) {
    v::Table t;
    for (std::size_t i = 0; i < sk.size(); ++i) t[sk[i]] = tk[digits[i]];
    std::string why;
    if (v::detail::check_realizable(t, k, va, vb, tgt, cap, &why)) out.insert(t);
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == tk.size()) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return out;
}

inline TableSet engine_behaviours(const hbdec::BoundedClass& a, const hbdec::BoundedClass& b, int k) {
  TableSet out;
  for (const auto& xi : hbdec::enumerate_behaviours(hbdec::make_type_space(a, k), hbdec::make_type_space(b, k))) {
    out.insert(hbdec::verify::read_table(xi.serialize(), a.signature, b.signature));
  }
  return out;
}

// Componentwise minimum on pairs of a linear order (binary symbol 0), read off each joint 4-type.
inline hbdec::PolymorphismBehaviour min_polymorphism(const hbdec::CorePresentation& core) {
  hbdec::PolymorphismBehaviour w;
  w.arity = 2;
  w.values = hbdec::make_type_space(core.base_out, 2);
  w.joint = hbdec::make_type_space(core.base_out, 4);
  for (std::size_t p = 0; p < w.joint->size(); ++p) {
    const hbdec::KType& t = (*w.joint)[p];
    const hbdec::FinStructure& q = t.quotient;
    auto lesser = [&](int a, int b) { return q.holds(0, std::vector<int>{b, a}) ? b : a; };
    std::vector<int> pick{lesser(t.partition[0], t.partition[2]), lesser(t.partition[1], t.partition[3])};
    w.table.push_back(w.values->index_of(hbdec::type_of(core.base_out, q, pick)));
  }
  return w;
}

}  // namespace oracles
