#pragma once

// Quantifier-free formulas over a relational signature with free variables
// x0, ..., x{m-1}.
//
// Concrete syntax: `R(x0,x1)`, `x0=x1`, `!phi`, `phi & psi`, `phi | psi`,
// parentheses, and the constants `true` / `false`. `!` binds tightest, then
// `&`, then `|`.

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hbdec/error.hpp"
#include "hbdec/structures.hpp"

namespace hbdec {

class QfFormula {
 public:
  enum class Kind { True, False, Atom, Eq, Not, And, Or };

  static QfFormula constant(bool value) { return QfFormula(make(value ? Kind::True : Kind::False)); }

  static QfFormula atom(std::size_t symbol, std::vector<int> vars) {
    auto n = make(Kind::Atom);
    n->symbol = symbol;
    n->vars = std::move(vars);
    return QfFormula(std::move(n));
  }

  static QfFormula equals(int a, int b) {
    auto n = make(Kind::Eq);
    n->vars = {a, b};
    return QfFormula(std::move(n));
  }

  static QfFormula negation(QfFormula f) {
    auto n = make(Kind::Not);
    n->kids.push_back(std::move(f));
    return QfFormula(std::move(n));
  }

  static QfFormula conjunction(QfFormula a, QfFormula b) { return binary(Kind::And, std::move(a), std::move(b)); }
  static QfFormula disjunction(QfFormula a, QfFormula b) { return binary(Kind::Or, std::move(a), std::move(b)); }

  Kind kind() const { return node_->kind; }
  std::size_t symbol() const { return node_->symbol; }
  const std::vector<int>& vars() const { return node_->vars; }
  const std::vector<QfFormula>& children() const { return node_->kids; }

  /// Largest variable index + 1 (0 for closed formulas).
  int variable_bound() const {
    int m = 0;
    for (int v : node_->vars) m = std::max(m, v + 1);
    for (const auto& k : node_->kids) m = std::max(m, k.variable_bound());
    return m;
  }

  /// Satisfaction of the formula in `s` under x_i := tuple[i]; entries may repeat.
  bool eval(const FinStructure& s, std::span<const int> tuple) const {
    switch (node_->kind) {
      case Kind::True:
        return true;
      case Kind::False:
        return false;
      case Kind::Atom: {
        Tuple t;
        t.reserve(node_->vars.size());
        for (int v : node_->vars) t.push_back(tuple[v]);
        return s.holds(node_->symbol, t);
      }
      case Kind::Eq:
        return tuple[node_->vars[0]] == tuple[node_->vars[1]];
      case Kind::Not:
        return !node_->kids[0].eval(s, tuple);
      case Kind::And:
        return node_->kids[0].eval(s, tuple) && node_->kids[1].eval(s, tuple);
      case Kind::Or:
        return node_->kids[0].eval(s, tuple) || node_->kids[1].eval(s, tuple);
    }
    return false;
  }

  std::string to_string(const Signature& sig) const { return print(sig, 0); }

 private:
  struct Node {
    Kind kind;
    std::size_t symbol = 0;
    std::vector<int> vars;
    std::vector<QfFormula> kids;
  };

  explicit QfFormula(std::shared_ptr<Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<Node> make(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
  }

  static QfFormula binary(Kind k, QfFormula a, QfFormula b) {
    auto n = make(k);
    n->kids.push_back(std::move(a));
    n->kids.push_back(std::move(b));
    return QfFormula(std::move(n));
  }

  static int precedence(Kind k) {
    switch (k) {
      case Kind::Or:
        return 1;
      case Kind::And:
        return 2;
      default:
        return 3;
    }
  }

  std::string print(const Signature& sig, int context) const {
    std::string out;
    switch (node_->kind) {
      case Kind::True:
        return "true";
      case Kind::False:
        return "false";
      case Kind::Atom:
        out = sig[node_->symbol].name + "(";
        for (std::size_t i = 0; i < node_->vars.size(); ++i) {
          if (i) out += ',';
          out += "x" + std::to_string(node_->vars[i]);
        }
        return out + ")";
      case Kind::Eq:
        return "x" + std::to_string(node_->vars[0]) + "=x" + std::to_string(node_->vars[1]);
      case Kind::Not:
        if (node_->kids[0].node_->kind == Kind::Eq) return "!(" + node_->kids[0].print(sig, 0) + ")";
        return "!" + node_->kids[0].print(sig, 3);
      case Kind::And:
      case Kind::Or: {
        int p = precedence(node_->kind);
        // Left-associative: the right operand of equal precedence is parenthesized.
        out = node_->kids[0].print(sig, p) + (node_->kind == Kind::And ? " & " : " | ") +
              node_->kids[1].print(sig, p + 1);
        return p < context ? "(" + out + ")" : out;
      }
    }
    return out;
  }

  std::shared_ptr<Node> node_;
};

namespace detail {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Signature& sig, int arity, int line, int column)
      : text_(text), sig_(sig), arity_(arity), line_(line), column_(column) {}

  QfFormula parse() {
    QfFormula f = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("formula: " + what, line_, column_ + static_cast<int>(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  int variable() {
    std::size_t at = pos_;
    std::string id = identifier();
    if (id.size() < 2 || id[0] != 'x' ||
        !std::all_of(id.begin() + 1, id.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      pos_ = at;
      fail("expected a variable x<i>");
    }
    if (id.size() > 6) fail("variable index too large");
    int v = std::stoi(id.substr(1));
    if (v >= arity_) {
      pos_ = at;
      fail("variable " + id + " exceeds relation arity " + std::to_string(arity_));
    }
    return v;
  }

  QfFormula parse_or() {
    QfFormula f = parse_and();
    while (accept('|')) f = QfFormula::disjunction(std::move(f), parse_and());
    return f;
  }

  QfFormula parse_and() {
    QfFormula f = parse_unary();
    while (accept('&')) f = QfFormula::conjunction(std::move(f), parse_unary());
    return f;
  }

  QfFormula parse_unary() {
    if (accept('!')) return QfFormula::negation(parse_unary());
    if (accept('(')) {
      QfFormula f = parse_or();
      if (!accept(')')) fail("expected ')'");
      return f;
    }
    skip_ws();
    std::size_t at = pos_;
    std::string id = identifier();
    if (id == "true") return QfFormula::constant(true);
    if (id == "false") return QfFormula::constant(false);
    if (accept('(')) {
      auto sym = sig_.find(id);
      if (!sym) {
        pos_ = at;
        fail("unknown relation symbol '" + id + "'");
      }
      std::vector<int> vars;
      do {
        vars.push_back(variable());
      } while (accept(','));
      if (!accept(')')) fail("expected ')'");
      if (static_cast<int>(vars.size()) != sig_[*sym].arity) {
        pos_ = at;
        fail("symbol '" + id + "' expects " + std::to_string(sig_[*sym].arity) + " arguments");
      }
      return QfFormula::atom(*sym, std::move(vars));
    }
    pos_ = at;
    int a = variable();
    if (!accept('=')) fail("expected '=' or an atom");
    int b = variable();
    return QfFormula::equals(a, b);
  }

  std::string_view text_;
  const Signature& sig_;
  int arity_;
  int line_;
  int column_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a formula with free variables x0..x{arity-1}; line/column locate
/// the text in its source file for error messages.
inline QfFormula parse_formula(std::string_view text, const Signature& sig, int arity, int line = 1,
                               int column = 1) {
  return detail::FormulaParser(text, sig, arity, line, column).parse();
}

/// Checked evaluation: tuple length must equal the declared arity.
inline bool eval_qf(const QfFormula& phi, int arity, const FinStructure& s, std::span<const int> tuple) {
  if (static_cast<int>(tuple.size()) != arity || phi.variable_bound() > arity) {
    throw InputError("eval_qf: tuple length does not match the formula arity");
  }
  for (int v : tuple) {
    if (v < 0 || v >= s.size()) throw InputError("eval_qf: tuple entry out of range");
  }
  return phi.eval(s, tuple);
}

}  // namespace hbdec
