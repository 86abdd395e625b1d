#pragma once

// Line-oriented class/reduct files.
//
//   class <name>
//     sig <Name>/<arity> ...
//     bound size=<n>: <atoms>
//     assert homogeneous [ramsey]
//   end
//   reduct <name> over <class>
//     rel <R>/<m> := <formula>
//     rel <R>/<m> := orbits [ <type>, ... ]
//   end
//
// `#` starts a comment. Serialization is canonical and re-parses to equal objects.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hbdec/reducts.hpp"

namespace hbdec {

struct Document {
  std::vector<BoundedClass> classes;
  std::vector<Reduct> reducts;

  const BoundedClass* find_class(std::string_view name) const {
    for (const auto& c : classes) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  const Reduct* find_reduct(std::string_view name) const {
    for (const auto& r : reducts) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  const Reduct& reduct(std::string_view name) const {
    if (auto* r = find_reduct(name)) return *r;
    throw InputError("unknown reduct '" + std::string(name) + "'");
  }

  const BoundedClass& cls(std::string_view name) const {
    if (auto* c = find_class(name)) return *c;
    throw InputError("unknown class '" + std::string(name) + "'");
  }
};

namespace detail {

struct Line {
  int number = 0;
  int indent = 0;  // column of the first token, 1-based
  std::string text;
};

inline std::vector<Line> logical_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string raw(text.substr(pos, end - pos));
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.pop_back();
    std::size_t first = 0;
    while (first < raw.size() && std::isspace(static_cast<unsigned char>(raw[first]))) ++first;
    if (first < raw.size()) out.push_back(Line{number, static_cast<int>(first) + 1, raw.substr(first)});
    pos = end + 1;
  }
  return out;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

inline std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// `Name/arity`
inline std::pair<std::string, int> name_arity(const std::string& w, const Line& l) {
  auto slash = w.find('/');
  if (slash == std::string::npos || !is_identifier(w.substr(0, slash))) {
    throw ParseError("expected <Name>/<arity>, got '" + w + "'", l.number, l.indent);
  }
  std::string digits = w.substr(slash + 1);
  if (digits.empty() || digits.size() > 2 || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    throw ParseError("bad arity in '" + w + "'", l.number, l.indent);
  }
  return {w.substr(0, slash), std::stoi(digits)};
}

// Splits `[ a, b ]` at top-level commas.
inline std::vector<std::string> orbit_items(std::string_view body, const Line& l, int col) {
  std::size_t open = body.find('[');
  std::size_t close = body.rfind(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ParseError("expected orbits [ <type>, ... ]", l.number, col);
  }
  for (std::size_t i = 0; i < open; ++i) {
    if (!std::isspace(static_cast<unsigned char>(body[i]))) throw ParseError("unexpected text before '['", l.number, col);
  }
  std::vector<std::string> items;
  std::string cur;
  int depth = 0;
  for (std::size_t i = open + 1; i < close; ++i) {
    char c = body[i];
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (depth < 0) throw ParseError("unbalanced brackets in orbit list", l.number, col + static_cast<int>(i));
    if (c == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) throw ParseError("unbalanced brackets in orbit list", l.number, col);
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
  };
  cur = trim(cur);
  if (!cur.empty() || !items.empty()) items.push_back(cur);
  for (auto& it : items) {
    it = trim(it);
    if (it.empty()) throw ParseError("empty entry in orbit list", l.number, col);
  }
  return items;
}

}  // namespace detail

/// Parses one file. Reducts may refer to classes of `context` (earlier files)
/// or of the same file declared above them.
inline Document parse_document(std::string_view text, const Document& context = {}) {
  Document doc;
  auto lines = detail::logical_lines(text);
  auto lookup_class = [&](const std::string& name) -> const BoundedClass* {
    if (auto* c = doc.find_class(name)) return c;
    return context.find_class(name);
  };
  auto taken = [&](const std::string& name) {
    return doc.find_class(name) || doc.find_reduct(name) || context.find_class(name) || context.find_reduct(name);
  };
  std::size_t i = 0;
  while (i < lines.size()) {
    const auto& head = lines[i];
    auto w = detail::words(head.text);
    if (w[0] == "class") {
      if (w.size() != 2 || !detail::is_identifier(w[1])) throw ParseError("expected: class <name>", head.number, head.indent);
      if (taken(w[1])) throw ParseError("duplicate name '" + w[1] + "'", head.number, head.indent);
      std::vector<Symbol> symbols;
      bool have_sig = false;
      bool hom = false;
      bool ramsey = false;
      std::vector<std::pair<std::string, detail::Line>> raw_bounds;
      ++i;
      for (;; ++i) {
        if (i >= lines.size()) throw ParseError("class " + w[1] + " is missing 'end'", head.number, head.indent);
        const auto& l = lines[i];
        auto lw = detail::words(l.text);
        if (lw[0] == "end") {
          if (lw.size() != 1) throw ParseError("unexpected text after 'end'", l.number, l.indent);
          break;
        }
        if (lw[0] == "sig") {
          if (have_sig) throw ParseError("duplicate sig line", l.number, l.indent);
          if (!raw_bounds.empty()) throw ParseError("sig must precede bounds", l.number, l.indent);
          have_sig = true;
          for (std::size_t j = 1; j < lw.size(); ++j) {
            auto [name, arity] = detail::name_arity(lw[j], l);
            symbols.push_back(Symbol{name, arity});
          }
        } else if (lw[0] == "bound") {
          raw_bounds.emplace_back(l.text.substr(5), l);
        } else if (lw[0] == "assert") {
          if (lw.size() < 2 || lw[1] != "homogeneous" || lw.size() > 3 || (lw.size() == 3 && lw[2] != "ramsey")) {
            throw ParseError("expected: assert homogeneous [ramsey]", l.number, l.indent);
          }
          hom = true;
          ramsey = ramsey || lw.size() == 3;
        } else {
          throw ParseError("unexpected '" + lw[0] + "' in class body", l.number, l.indent);
        }
      }
      SignaturePtr sig;
      try {
        sig = make_signature(symbols);
      } catch (const InputError& e) {
        throw ParseError(e.what(), head.number, head.indent);
      }
      std::vector<FinStructure> bounds;
      for (const auto& [body, l] : raw_bounds) {
        try {
          bounds.push_back(parse_literal(body, sig));
        } catch (const InputError& e) {
          throw ParseError(e.what(), l.number, l.indent + 6);
        }
      }
      try {
        doc.classes.push_back(BoundedClass::make(w[1], sig, bounds, hom, ramsey));
      } catch (const InputError& e) {
        throw ParseError(e.what(), head.number, head.indent);
      }
      ++i;
    } else if (w[0] == "reduct") {
      if (w.size() != 4 || w[2] != "over" || !detail::is_identifier(w[1])) {
        throw ParseError("expected: reduct <name> over <class>", head.number, head.indent);
      }
      if (taken(w[1])) throw ParseError("duplicate name '" + w[1] + "'", head.number, head.indent);
      const BoundedClass* base = lookup_class(w[3]);
      if (!base) throw ParseError("unknown class '" + w[3] + "'", head.number, head.indent);
      std::vector<RelationDef> rels;
      ++i;
      for (;; ++i) {
        if (i >= lines.size()) throw ParseError("reduct " + w[1] + " is missing 'end'", head.number, head.indent);
        const auto& l = lines[i];
        auto lw = detail::words(l.text);
        if (lw[0] == "end") {
          if (lw.size() != 1) throw ParseError("unexpected text after 'end'", l.number, l.indent);
          break;
        }
        if (lw[0] != "rel" || lw.size() < 3 || l.text.find(":=") == std::string::npos) {
          throw ParseError("expected: rel <R>/<m> := <definition>", l.number, l.indent);
        }
        auto [name, arity] = detail::name_arity(lw[1], l);
        if (arity < 1) throw ParseError("relation arity must be positive", l.number, l.indent);
        std::size_t def = l.text.find(":=") + 2;
        while (def < l.text.size() && l.text[def] == ' ') ++def;
        const int col = l.indent + static_cast<int>(def);
        std::string body = l.text.substr(def);
        RelationDef r{name, arity, std::nullopt, {}};
        if (body.rfind("orbits", 0) == 0) {
          std::vector<KType> members;
          for (const auto& item : detail::orbit_items(std::string_view(body).substr(6), l, col + 6)) {
            try {
              members.push_back(parse_type(item, base->signature));
            } catch (const InputError& e) {
              throw ParseError(e.what(), l.number, col);
            }
          }
          try {
            r.orbits = make_orbit_union(arity, std::move(members));
          } catch (const InputError& e) {
            throw ParseError(e.what(), l.number, col);
          }
        } else {
          r.formula = parse_formula(body, *base->signature, arity, l.number, col);
        }
        rels.push_back(std::move(r));
      }
      try {
        doc.reducts.push_back(make_reduct(w[1], *base, std::move(rels)));
      } catch (const InputError& e) {
        throw ParseError(e.what(), head.number, head.indent);
      }
      ++i;
    } else {
      throw ParseError("expected 'class' or 'reduct', got '" + w[0] + "'", head.number, head.indent);
    }
  }
  return doc;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

/// Loads files in order; a path given twice (same canonical path) is read once.
inline Document load_documents(const std::vector<std::filesystem::path>& paths) {
  Document all;
  std::vector<std::filesystem::path> seen;
  for (const auto& p : paths) {
    std::error_code ec;
    auto canon = std::filesystem::weakly_canonical(p, ec);
    if (ec) canon = p;
    if (std::find(seen.begin(), seen.end(), canon) != seen.end()) continue;
    seen.push_back(canon);
    Document d;
    try {
      d = parse_document(read_file(p), all);
    } catch (const ParseError& e) {
      throw InputError(p.string() + ": " + e.what());
    }
    for (auto& c : d.classes) all.classes.push_back(std::move(c));
    for (auto& r : d.reducts) all.reducts.push_back(std::move(r));
  }
  return all;
}

inline std::string serialize_class(const BoundedClass& k) {
  std::string out = "class " + k.name + "\n  sig";
  for (std::size_t r = 0; r < k.signature->size(); ++r) {
    out += " " + (*k.signature)[r].name + "/" + std::to_string((*k.signature)[r].arity);
  }
  out += "\n";
  for (const auto& b : k.bounds) out += "  bound " + to_literal(b) + "\n";
  if (k.homogeneous_asserted) out += k.ramsey_asserted ? "  assert homogeneous ramsey\n" : "  assert homogeneous\n";
  return out + "end\n";
}

inline std::string serialize_reduct(const Reduct& c) {
  std::string out = "reduct " + c.name + " over " + c.base.name + "\n";
  for (const auto& r : c.relations) {
    out += "  rel " + r.name + "/" + std::to_string(r.arity) + " := ";
    out += r.formula ? r.formula->to_string(*c.base.signature) : r.orbits.to_string();
    out += "\n";
  }
  return out + "end\n";
}

/// Class followed by the reduct over it.
inline std::string serialize_pair(const Reduct& c) { return serialize_class(c.base) + "\n" + serialize_reduct(c); }

/// Inverse of Behaviour::serialize over the given spaces; every source type exactly once.
inline Behaviour parse_behaviour(std::string_view text, const TypeSpacePtr& source, const TypeSpacePtr& target) {
  std::vector<int> table(source->size(), -1);
  for (const auto& l : detail::logical_lines(text)) {
    auto arrow = l.text.find(" -> ");
    if (arrow == std::string::npos) throw ParseError("expected '<type> -> <type>'", l.number, l.indent);
    std::optional<int> p;
    std::optional<int> q;
    try {
      p = source->find(parse_type(l.text.substr(0, arrow), source->cls().signature));
      q = target->find(parse_type(l.text.substr(arrow + 4), target->cls().signature));
    } catch (const InputError& e) {
      throw ParseError(e.what(), l.number, l.indent);
    }
    if (!p) throw ParseError("not a source type", l.number, l.indent);
    if (!q) throw ParseError("not a target type", l.number, l.indent + static_cast<int>(arrow) + 4);
    if (table[*p] != -1) throw ParseError("source type listed twice", l.number, l.indent);
    table[*p] = *q;
  }
  for (int v : table) {
    if (v == -1) throw InputError("behaviour table is not total");
  }
  return Behaviour(source, target, std::move(table));
}

}  // namespace hbdec
