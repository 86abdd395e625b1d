#pragma once

// Independent certificate checker. It reads certificate directories written
// by certificate.hpp and re-checks them from scratch: its own file reader,
// its own type computation and its own image construction. Only the finite
// structure layer is shared with the search code.

#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hbdec/structures.hpp"

namespace hbdec::verify {

struct Result {
  bool ok = true;
  std::vector<std::string> checks;  // one line per passed check
  std::string failure;

  void pass(std::string what) { checks.push_back(std::move(what)); }
  Result& fail(std::string why) {
    ok = false;
    failure = std::move(why);
    return *this;
  }
};

/// A type as its partition and quotient, keyed by its printed form.
struct VType {
  std::vector<int> partition;
  FinStructure quotient;
  std::string key;
};

struct VClass {
  std::string name;
  SignaturePtr sig;
  std::vector<FinStructure> bounds;

  bool member(const FinStructure& s) const {
    for (const auto& b : bounds) {
      if (embeds(b, s)) return false;
    }
    return true;
  }
  int max_bound() const {
    int m = 0;
    for (const auto& b : bounds) m = std::max(m, b.size());
    return m;
  }
};

struct VRel {
  std::string name;
  int arity = 0;
  std::set<std::string> members;
};

struct VReduct {
  std::string name;
  std::string over;
  std::vector<VRel> rels;

  const VRel* find(const std::string& n) const {
    for (const auto& r : rels) {
      if (r.name == n) return &r;
    }
    return nullptr;
  }
};

struct VFile {
  std::map<std::string, VClass> classes;
  std::map<std::string, VReduct> reducts;
};

namespace detail {

inline std::string render(const std::vector<int>& partition, const FinStructure& quotient) {
  std::string out = "[";
  for (std::size_t i = 0; i < partition.size(); ++i) {
    out += (i ? "," : "") + std::to_string(partition[i]);
  }
  return out + "|" + to_literal(quotient) + "]";
}

/// Type of a tuple: blocks by first occurrence, quotient induced on first occurrences.
inline std::string key_of(const FinStructure& s, const std::vector<int>& t) {
  std::vector<int> reps;
  std::vector<int> part;
  for (int v : t) {
    auto it = std::find(reps.begin(), reps.end(), v);
    part.push_back(static_cast<int>(it - reps.begin()));
    if (it == reps.end()) reps.push_back(v);
  }
  return render(part, induced(s, reps));
}

inline VType parse_vtype(const std::string& text, const SignaturePtr& sig) {
  auto open = text.find('[');
  auto bar = text.find('|');
  auto close = text.rfind(']');
  if (open != 0 || bar == std::string::npos || close != text.size() - 1 || bar > close) {
    throw InputError("malformed type '" + text + "'");
  }
  std::vector<int> part;
  std::stringstream ss(text.substr(1, bar - 1));
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty() || item.size() > 3 || !std::all_of(item.begin(), item.end(), ::isdigit)) {
      throw InputError("malformed partition in '" + text + "'");
    }
    part.push_back(std::stoi(item));
  }
  int next = 0;
  for (int p : part) {
    if (p > next) throw InputError("partition not in first-occurrence order in '" + text + "'");
    if (p == next) ++next;
  }
  FinStructure q = parse_literal(text.substr(bar + 1, close - bar - 1), sig);
  if (q.size() != next) throw InputError("quotient size mismatch in '" + text + "'");
  std::string key = render(part, q);
  return VType{std::move(part), std::move(q), std::move(key)};
}

inline std::string strip(std::string s) {
  if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
  s.erase(0, s.find_first_not_of(" \t\r"));
  auto e = s.find_last_not_of(" \t\r");
  s.erase(e == std::string::npos ? 0 : e + 1);
  return s;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::pair<std::string, int> name_arity(const std::string& w) {
  auto slash = w.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == w.size()) throw InputError("expected Name/arity: " + w);
  return {w.substr(0, slash), std::stoi(w.substr(slash + 1))};
}

inline std::vector<std::string> split_orbits(const std::string& body) {
  auto open = body.find('[');
  auto close = body.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close < open) throw InputError("bad orbit list");
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (std::size_t i = open + 1; i < close; ++i) {
    char c = body[i];
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!strip(cur).empty()) out.push_back(strip(cur));
  return out;
}

}  // namespace detail

/// Reads class stanzas and orbit-literal reduct stanzas.
inline VFile read_structures(const std::string& text) {
  VFile f;
  std::istringstream in(text);
  std::string raw;
  VClass* cls = nullptr;
  VReduct* red = nullptr;
  std::vector<Symbol> symbols;
  int line = 0;
  auto where = [&] { return "structures line " + std::to_string(line) + ": "; };
  while (std::getline(in, raw)) {
    ++line;
    std::string l = detail::strip(raw);
    if (l.empty()) continue;
    auto w = detail::split_ws(l);
    try {
      if (!cls && !red) {
        if (w[0] == "class" && w.size() == 2) {
          cls = &f.classes[w[1]];
          cls->name = w[1];
          cls->sig = make_signature({});
        } else if (w[0] == "reduct" && w.size() == 4 && w[2] == "over") {
          if (!f.classes.count(w[3])) throw InputError("unknown class " + w[3]);
          red = &f.reducts[w[1]];
          red->name = w[1];
          red->over = w[3];
        } else {
          throw InputError("expected a class or reduct header");
        }
      } else if (w[0] == "end") {
        cls = nullptr;
        red = nullptr;
      } else if (cls) {
        if (w[0] == "sig") {
          symbols.clear();
          for (std::size_t i = 1; i < w.size(); ++i) {
            auto [n, a] = detail::name_arity(w[i]);
            symbols.push_back(Symbol{n, a});
          }
          cls->sig = make_signature(symbols);
        } else if (w[0] == "bound") {
          cls->bounds.push_back(parse_literal(l.substr(5), cls->sig));
        } else if (w[0] != "assert") {
          throw InputError("unexpected '" + w[0] + "'");
        }
      } else {
        auto def = l.find(":=");
        if (w[0] != "rel" || def == std::string::npos) throw InputError("expected rel <R>/<m> := orbits [...]");
        auto [n, a] = detail::name_arity(w[1]);
        std::string body = detail::strip(l.substr(def + 2));
        if (body.rfind("orbits", 0) != 0) throw InputError("relations must be given as orbit literals");
        VRel r{n, a, {}};
        for (const auto& item : detail::split_orbits(body)) {
          VType t = detail::parse_vtype(item, f.classes.at(red->over).sig);
          if (static_cast<int>(t.partition.size()) != a) throw InputError("orbit arity mismatch in " + n);
          r.members.insert(t.key);
        }
        red->rels.push_back(std::move(r));
      }
    } catch (const InputError& e) {
      throw InputError(where() + e.what());
    } catch (const std::exception& e) {
      throw InputError(where() + e.what());
    }
  }
  if (cls || red) throw InputError("structures: missing 'end'");
  return f;
}

/// All k-types of the class, by key.
inline std::map<std::string, VType> types_of(const VClass& c, int k) {
  std::map<std::string, VType> out;
  auto levels = enumerate_structures_upto(c.sig, k, [&](const FinStructure& s) { return c.member(s); });
  for (int size = 1; size <= k; ++size) {
    for (const auto& s : levels[size]) {
      for_each_tuple(size, k, [&](const Tuple& t) {
        std::string key = detail::key_of(s, t);
        if (!out.count(key)) out.emplace(key, detail::parse_vtype(key, c.sig));
      });
    }
  }
  return out;
}

/// Table parsed from `<type> -> <type>` lines, keyed by source key.
using Table = std::map<std::string, std::string>;

inline Table read_table(const std::string& text, const SignaturePtr& from, const SignaturePtr& to) {
  Table t;
  std::istringstream in(text);
  for (std::string raw; std::getline(in, raw);) {
    std::string l = detail::strip(raw);
    if (l.empty()) continue;
    auto arrow = l.find(" -> ");
    if (arrow == std::string::npos) throw InputError("table line without ' -> ': " + l);
    auto a = detail::parse_vtype(detail::strip(l.substr(0, arrow)), from);
    auto b = detail::parse_vtype(detail::strip(l.substr(arrow + 4)), to);
    if (!t.emplace(a.key, b.key).second) throw InputError("duplicate table entry " + a.key);
  }
  return t;
}

/// The image of a finite structure under a table of k-types, or the reason it is inconsistent.
/// `lookup` maps every k-tuple of points to a target type.
template <typename Lookup>
std::optional<FinStructure> build_image(int n, int k, const SignaturePtr& tsig, Lookup&& lookup, std::string* why) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<std::pair<Tuple, const VType*>> rows;
  for_each_tuple(n, k, [&](const Tuple& t) { rows.emplace_back(t, &lookup(t)); });
  for (const auto& [t, ty] : rows) {
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        if (ty->partition[a] == ty->partition[b]) parent[find(t[a])] = find(t[b]);
      }
    }
  }
  std::vector<int> cls(static_cast<std::size_t>(n), -1);
  int q = 0;
  std::map<int, int> root_class;
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = root_class.emplace(find(i), q);
    if (fresh) ++q;
    cls[i] = it->second;
  }
  FinStructure img(tsig, q);
  for (const auto& [t, ty] : rows) {
    std::vector<int> block_point(ty->quotient.size(), -1);
    for (int a = 0; a < k; ++a) block_point[ty->partition[a]] = cls[t[a]];
    for (std::size_t r = 0; r < tsig->size(); ++r) {
      for (const auto& u : ty->quotient.tuples(r)) {
        Tuple mapped;
        for (int b : u) mapped.push_back(block_point[b]);
        img.set(r, mapped);
      }
    }
  }
  for (const auto& [t, ty] : rows) {
    Tuple mapped;
    for (int v : t) mapped.push_back(cls[v]);
    if (detail::key_of(img, mapped) != ty->key) {
      if (why) *why = "image of tuple has type " + detail::key_of(img, mapped) + ", table says " + ty->key;
      return std::nullopt;
    }
  }
  return img;
}

namespace detail {

inline int realize_bound(int k, const VClass& target) {
  int arity = 0;
  for (std::size_t r = 0; r < target.sig->size(); ++r) arity = std::max(arity, (*target.sig)[r].arity);
  return std::max({k + 1, target.max_bound(), arity});
}

/// Table lists exactly the source types and only target types.
inline bool check_total(const Table& t, const std::map<std::string, VType>& src,
                        const std::map<std::string, VType>& tgt, std::string* why) {
  for (const auto& [key, _] : src) {
    if (!t.count(key)) {
      *why = "table misses source type " + key;
      return false;
    }
  }
  for (const auto& [a, b] : t) {
    if (!src.count(a)) {
      *why = "table lists non-type " + a;
      return false;
    }
    if (!tgt.count(b)) {
      *why = "table value " + b + " is not a target type";
      return false;
    }
  }
  return true;
}

/// Every age member of size <= cap has a consistent image in the target age.
inline bool check_realizable(const Table& t, int k, const VClass& src, const VClass& tgt,
                             const std::map<std::string, VType>& tgt_types, int cap, std::string* why) {
  auto levels = enumerate_structures_upto(src.sig, cap, [&](const FinStructure& s) { return src.member(s); });
  for (int size = 1; size <= cap; ++size) {
    for (const auto& s : levels[size]) {
      std::string reason;
      auto img = build_image(size, k, tgt.sig, [&](const Tuple& u) -> const VType& {
        return tgt_types.at(t.at(key_of(s, u)));
      }, &reason);
      if (!img) {
        *why = "no consistent image of " + to_literal(s) + ": " + reason;
        return false;
      }
      if (!tgt.member(*img)) {
        *why = "image of " + to_literal(s) + " is " + to_literal(*img) + ", outside the target age";
        return false;
      }
    }
  }
  return true;
}

/// An m-type (m <= k) padded to level k by repeating its last position.
inline std::string pad_key(const VType& t, int k) {
  std::vector<int> tuple = t.partition;
  while (static_cast<int>(tuple.size()) < k) tuple.push_back(tuple.back());
  return key_of(t.quotient, tuple);
}

/// The type of the first m positions.
inline std::string prefix_key(const VType& t, int m) {
  std::vector<int> tuple(t.partition.begin(), t.partition.begin() + m);
  return key_of(t.quotient, tuple);
}

inline std::set<std::string> relation_image(const Table& t, const VRel& r, const SignaturePtr& sig,
                                            const std::map<std::string, VType>& tgt_types, int k) {
  std::set<std::string> out;
  for (const auto& m : r.members) {
    VType ty = parse_vtype(m, sig);
    out.insert(prefix_key(tgt_types.at(t.at(pad_key(ty, k))), r.arity));
  }
  return out;
}

inline std::map<std::string, std::string> read_keyvals(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot read " + p.string());
  std::map<std::string, std::string> kv;
  for (std::string raw; std::getline(in, raw);) {
    std::string l = strip(raw);
    if (l.empty()) continue;
    auto sp = l.find(' ');
    kv[l.substr(0, sp)] = sp == std::string::npos ? "" : strip(l.substr(sp + 1));
  }
  return kv;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const VClass& need_class(const VFile& f, const std::string& n) {
  auto it = f.classes.find(n);
  if (it == f.classes.end()) throw InputError("certificate lacks class " + n);
  return it->second;
}

inline const VReduct& need_reduct(const VFile& f, const std::string& n) {
  auto it = f.reducts.find(n);
  if (it == f.reducts.end()) throw InputError("certificate lacks reduct " + n);
  return it->second;
}

inline int need_int(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw InputError("certificate.txt lacks '" + key + "'");
  return std::stoi(it->second);
}

inline bool relations_are_types(const VReduct& r, const VClass& c, int k, std::string* why) {
  for (const auto& rel : r.rels) {
    if (rel.arity < 1 || rel.arity > k) {
      *why = "relation " + rel.name + " has arity outside 1.." + std::to_string(k);
      return false;
    }
    auto types = types_of(c, rel.arity);
    for (const auto& m : rel.members) {
      if (!types.count(m)) {
        *why = "relation " + rel.name + " lists non-type " + m;
        return false;
      }
    }
  }
  return true;
}

}  // namespace detail

/// kind bidef: relation bijection, mutually inverse tables, realizability, relation transport.
inline Result check_bidef(const std::filesystem::path& dir) {
  Result res;
  auto kv = detail::read_keyvals(dir / "certificate.txt");
  const int k = detail::need_int(kv, "level");
  VFile f = read_structures(detail::slurp(dir / "structures.cls"));
  const VClass& a = detail::need_class(f, "source");
  const VClass& b = detail::need_class(f, "target");
  const VReduct& ra = detail::need_reduct(f, "source_expanded");
  const VReduct& rb = detail::need_reduct(f, "target_expanded");
  if (ra.over != "source" || rb.over != "target") return res.fail("expanded reducts over the wrong classes");
  std::string why;
  if (!detail::relations_are_types(ra, a, k, &why) || !detail::relations_are_types(rb, b, k, &why)) return res.fail(why);
  res.pass("relations are unions of types");

  // tau
  std::map<std::string, std::string> tau;
  std::set<std::string> hit;
  std::istringstream m(detail::slurp(dir / "matching.txt"));
  for (std::string raw; std::getline(m, raw);) {
    std::string l = detail::strip(raw);
    if (l.empty()) continue;
    auto arrow = l.find(" -> ");
    if (arrow == std::string::npos) return res.fail("malformed matching line: " + l);
    std::string x = detail::strip(l.substr(0, arrow));
    std::string y = detail::strip(l.substr(arrow + 4));
    const VRel* rx = ra.find(x);
    const VRel* ry = rb.find(y);
    if (!rx || !ry) return res.fail("matching names an unknown relation: " + l);
    if (rx->arity != ry->arity) return res.fail("matching changes arity: " + l);
    if (!tau.emplace(x, y).second || !hit.insert(y).second) return res.fail("matching is not injective: " + l);
  }
  if (tau.size() != ra.rels.size() || hit.size() != rb.rels.size()) return res.fail("matching is not a bijection");
  res.pass("matching is an arity-preserving bijection");

  auto ta = types_of(a, k);
  auto tb = types_of(b, k);
  Table xi = read_table(detail::slurp(dir / "xi.txt"), a.sig, b.sig);
  Table eta = read_table(detail::slurp(dir / "eta.txt"), b.sig, a.sig);
  if (!detail::check_total(xi, ta, tb, &why) || !detail::check_total(eta, tb, ta, &why)) return res.fail(why);
  res.pass("xi and eta are total on " + std::to_string(k) + "-types");
  for (const auto& [p, q] : xi) {
    if (eta.at(q) != p) return res.fail("eta(xi(" + p + ")) != " + p);
  }
  for (const auto& [p, q] : eta) {
    if (xi.at(q) != p) return res.fail("xi(eta(" + p + ")) != " + p);
  }
  res.pass("compositions are identities");
  const int na = detail::realize_bound(k, b);
  const int nb = detail::realize_bound(k, a);
  if (!detail::check_realizable(xi, k, a, b, tb, na, &why)) return res.fail("xi: " + why);
  if (!detail::check_realizable(eta, k, b, a, ta, nb, &why)) return res.fail("eta: " + why);
  res.pass("xi realizable up to size " + std::to_string(na) + ", eta up to size " + std::to_string(nb));
  for (const auto& [x, y] : tau) {
    const VRel& rx = *ra.find(x);
    const VRel& ry = *rb.find(y);
    if (detail::relation_image(xi, rx, a.sig, tb, k) != ry.members) return res.fail("xi does not carry " + x + " onto " + y);
    if (detail::relation_image(eta, ry, b.sig, ta, k) != rx.members) return res.fail("eta does not carry " + y + " onto " + x);
  }
  res.pass("relations are carried onto their matches");
  return res;
}

/// kind pp: an m-ary canonical polymorphism of the core that preserves its
/// relations and violates the query relation.
inline Result check_pp(const std::filesystem::path& dir) {
  Result res;
  auto kv = detail::read_keyvals(dir / "certificate.txt");
  const int k = detail::need_int(kv, "level");
  const int m = detail::need_int(kv, "arity");
  if (m < 1 || k < 1 || m * k > 12) return res.fail("arity/level out of range");
  VFile f = read_structures(detail::slurp(dir / "structures.cls"));
  const VClass& c = detail::need_class(f, "core");
  const VReduct& decl = detail::need_reduct(f, "core_reduct");
  const VReduct& query = detail::need_reduct(f, "query");
  if (query.rels.size() != 1) return res.fail("query reduct must hold exactly one relation");
  std::string why;
  if (!detail::relations_are_types(decl, c, k, &why) || !detail::relations_are_types(query, c, k, &why)) return res.fail(why);

  auto values = types_of(c, k);
  auto joint = types_of(c, m * k);
  Table table = read_table(detail::slurp(dir / "polymorphism.txt"), c.sig, c.sig);
  if (!detail::check_total(table, joint, values, &why)) return res.fail(why);
  res.pass("table is total on " + std::to_string(m * k) + "-types");

  // Argument types of every entry.
  auto argument = [&](const VType& j, int a) {
    std::vector<int> t(j.partition.begin() + a * k, j.partition.begin() + (a + 1) * k);
    return values.at(detail::key_of(j.quotient, t));
  };
  auto in_rel = [&](const VRel& r, const VType& v) { return r.members.count(detail::prefix_key(v, r.arity)) > 0; };
  bool violated = false;
  for (const auto& [jk, vk] : table) {
    const VType& j = joint.at(jk);
    const VType& val = values.at(vk);
    for (const auto& r : decl.rels) {
      bool all = true;
      for (int a = 0; a < m && all; ++a) all = in_rel(r, argument(j, a));
      if (all && !in_rel(r, val)) return res.fail("relation " + r.name + " is not preserved at " + jk);
    }
    const VRel& q = query.rels[0];
    bool all = true;
    for (int a = 0; a < m && all; ++a) all = in_rel(q, argument(j, a));
    if (all && !in_rel(q, val)) violated = true;
  }
  res.pass("declared relations are preserved");
  if (!violated) return res.fail("the query relation is preserved");
  res.pass("the query relation is violated");

  // Realizability on every set of s <= N distinct points of the m-th power.
  const int cap = detail::realize_bound(k, c);
  auto levels = enumerate_structures_upto(c.sig, m * cap, [&](const FinStructure& s) { return c.member(s); });
  for (int s = 1; s <= cap; ++s) {
    std::set<std::string> seen;
    for (int size = 1; size <= m * s; ++size) {
      for (const auto& st : levels[size]) {
        for_each_tuple(size, m * s, [&](const Tuple& t) {
          if (!why.empty()) return;
          std::vector<char> cover(static_cast<std::size_t>(size), 0);
          for (int v : t) cover[v] = 1;
          if (std::find(cover.begin(), cover.end(), 0) != cover.end()) return;
          for (int i = 0; i < s; ++i) {
            for (int i2 = i + 1; i2 < s; ++i2) {
              bool differ = false;
              for (int a = 0; a < m; ++a) differ = differ || t[a * s + i] != t[a * s + i2];
              if (!differ) return;
            }
          }
          std::string key = detail::key_of(st, t);
          if (!seen.insert(key).second) return;
          std::string reason;
          auto img = build_image(s, k, c.sig, [&](const Tuple& u) -> const VType& {
            Tuple jt;
            for (int a = 0; a < m; ++a) {
              for (int i = 0; i < k; ++i) jt.push_back(t[a * s + u[i]]);
            }
            return values.at(table.at(detail::key_of(st, jt)));
          }, &reason);
          if (!img) {
            why = "configuration " + key + ": " + reason;
          } else if (!c.member(*img)) {
            why = "configuration " + key + " has image " + to_literal(*img) + " outside the age";
          }
        });
        if (!why.empty()) return res.fail(why);
      }
    }
  }
  res.pass("realizable on configurations of up to " + std::to_string(cap) + " points");
  return res;
}

/// kind core: a range-rigid relation-preserving realizable endo-behaviour
/// whose range is exactly the types of the presented core class.
inline Result check_core(const std::filesystem::path& dir) {
  Result res;
  auto kv = detail::read_keyvals(dir / "certificate.txt");
  const int k = detail::need_int(kv, "level");
  VFile f = read_structures(detail::slurp(dir / "structures.cls"));
  const VClass& in = detail::need_class(f, "input");
  const VClass& core = detail::need_class(f, "core");
  const VReduct& rin = detail::need_reduct(f, "input_reduct");
  const VReduct& rcore = detail::need_reduct(f, "core_reduct");
  std::string why;
  if (!detail::relations_are_types(rin, in, k, &why) || !detail::relations_are_types(rcore, core, k, &why)) return res.fail(why);
  auto tin = types_of(in, k);
  auto tcore = types_of(core, k);
  Table w = read_table(detail::slurp(dir / "witness.txt"), in.sig, in.sig);
  if (!detail::check_total(w, tin, tin, &why)) return res.fail(why);
  for (const auto& [p, q] : w) {
    if (w.at(q) != q) return res.fail("witness is not range-rigid at " + p);
  }
  res.pass("witness is total and range-rigid");
  std::set<std::string> range;
  for (const auto& [p, q] : w) range.insert(q);
  std::set<std::string> core_types;
  for (const auto& [key, _] : tcore) core_types.insert(key);
  if (range != core_types) return res.fail("the core class types differ from the witness range");
  res.pass("core class types equal the witness range");
  const int cap = detail::realize_bound(k, in);
  if (!detail::check_realizable(w, k, in, in, tin, cap, &why)) return res.fail(why);
  res.pass("witness realizable up to size " + std::to_string(cap));
  if (rin.rels.size() != rcore.rels.size()) return res.fail("core reduct has a different relation list");
  for (const auto& r : rin.rels) {
    auto img = detail::relation_image(w, r, in.sig, tin, k);
    if (!std::includes(r.members.begin(), r.members.end(), img.begin(), img.end())) {
      return res.fail("witness does not preserve " + r.name);
    }
    const VRel* rc = rcore.find(r.name);
    if (!rc || rc->arity != r.arity) return res.fail("core reduct lacks " + r.name);
    auto types = types_of(core, r.arity);
    std::set<std::string> expect;
    for (const auto& t : r.members) {
      if (types.count(t)) expect.insert(t);
    }
    if (expect != rc->members) return res.fail("core relation " + r.name + " is not the restriction of the input's");
  }
  res.pass("relations preserved and restricted to the core");
  return res;
}

inline Result check_directory(const std::filesystem::path& dir) {
  try {
    auto kv = detail::read_keyvals(dir / "certificate.txt");
    const std::string kind = kv.count("kind") ? kv.at("kind") : "";
    if (kind == "bidef") return check_bidef(dir);
    if (kind == "pp") return check_pp(dir);
    if (kind == "core") return check_core(dir);
    return Result{}.fail("unknown certificate kind '" + kind + "'");
  } catch (const std::exception& e) {
    return Result{}.fail(e.what());
  }
}

}  // namespace hbdec::verify
