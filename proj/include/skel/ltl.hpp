#pragma once

// LTL formulas over a partitioned set of atomic propositions.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "skel/error.hpp"

namespace skel {

enum class PropKind { input, output };

struct PropId {
  std::string name;
  PropKind kind;
  friend bool operator==(const PropId&, const PropId&) = default;
};

/// Input/output partition of the atomic propositions.
///
/// Propositions are indexed in "AP order": inputs first, then outputs. A
/// concrete letter over 2^AP is a bitmask in that order.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<std::string> inputs, std::vector<std::string> outputs)
      : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    std::unordered_set<std::string> seen;
    for (const auto& n : all_names()) {
      if (!valid_identifier(n)) throw Error("invalid proposition name '" + n + "'");
      if (!seen.insert(n).second) throw Error("proposition '" + n + "' declared twice");
    }
    if (size() > 16) throw ResourceLimit("more than 16 atomic propositions");
  }

  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  int num_inputs() const { return static_cast<int>(inputs_.size()); }
  int num_outputs() const { return static_cast<int>(outputs_.size()); }
  int size() const { return num_inputs() + num_outputs(); }

  std::optional<int> index_of(std::string_view name) const {
    for (int i = 0; i < num_inputs(); ++i)
      if (inputs_[i] == name) return i;
    for (int j = 0; j < num_outputs(); ++j)
      if (outputs_[j] == name) return num_inputs() + j;
    return std::nullopt;
  }

  std::optional<int> output_index(std::string_view name) const {
    for (int j = 0; j < num_outputs(); ++j)
      if (outputs_[j] == name) return j;
    return std::nullopt;
  }

  std::optional<int> input_index(std::string_view name) const {
    for (int j = 0; j < num_inputs(); ++j)
      if (inputs_[j] == name) return j;
    return std::nullopt;
  }

  const std::string& name(int ap_index) const {
    return ap_index < num_inputs() ? inputs_[ap_index] : outputs_[ap_index - num_inputs()];
  }

  PropId prop(int ap_index) const {
    return {name(ap_index), ap_index < num_inputs() ? PropKind::input : PropKind::output};
  }

  bool is_input(int ap_index) const { return ap_index < num_inputs(); }

  std::vector<std::string> all_names() const {
    auto v = inputs_;
    v.insert(v.end(), outputs_.begin(), outputs_.end());
    return v;
  }

  static bool valid_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return !is_keyword(s);
  }

  static bool is_keyword(std::string_view s) {
    return s == "X" || s == "F" || s == "G" || s == "U" || s == "R" || s == "true" || s == "false";
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

enum class Op { atom, tt, ff, not_, and_, or_, implies, next, until, release, eventually, globally };

/// Immutable LTL formula (shared AST node).
class Formula {
  struct Node {
    Op op;
    int atom = -1;  // AP index for Op::atom
    std::shared_ptr<const Node> lhs, rhs;
  };

 public:
  Formula() : node_(make(Op::tt, -1, nullptr, nullptr)) {}

  static Formula atom(int ap_index) { return Formula(make(Op::atom, ap_index, nullptr, nullptr)); }
  static Formula tt() { return Formula(make(Op::tt, -1, nullptr, nullptr)); }
  static Formula ff() { return Formula(make(Op::ff, -1, nullptr, nullptr)); }
  static Formula unary(Op op, const Formula& f) { return Formula(make(op, -1, f.node_, nullptr)); }
  static Formula binary(Op op, const Formula& a, const Formula& b) {
    return Formula(make(op, -1, a.node_, b.node_));
  }

  Op op() const { return node_->op; }
  int atom_index() const { return node_->atom; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  bool is_unary() const { return node_->lhs && !node_->rhs; }
  bool is_binary() const { return node_->rhs != nullptr; }

  std::size_t size() const {
    std::size_t n = 1;
    if (node_->lhs) n += lhs().size();
    if (node_->rhs) n += rhs().size();
    return n;
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op() || a.atom_index() != b.atom_index()) return false;
    if (bool(a.node_->lhs) != bool(b.node_->lhs) || bool(a.node_->rhs) != bool(b.node_->rhs))
      return false;
    if (a.node_->lhs && !(a.lhs() == b.lhs())) return false;
    if (a.node_->rhs && !(a.rhs() == b.rhs())) return false;
    return true;
  }

  const void* identity() const { return node_.get(); }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<const Node> make(Op op, int atom, std::shared_ptr<const Node> l,
                                          std::shared_ptr<const Node> r) {
    return std::make_shared<const Node>(Node{op, atom, std::move(l), std::move(r)});
  }

  std::shared_ptr<const Node> node_;
};

inline Formula operator!(const Formula& f) { return Formula::unary(Op::not_, f); }
inline Formula operator&&(const Formula& a, const Formula& b) { return Formula::binary(Op::and_, a, b); }
inline Formula operator||(const Formula& a, const Formula& b) { return Formula::binary(Op::or_, a, b); }
inline Formula X(const Formula& f) { return Formula::unary(Op::next, f); }
inline Formula F(const Formula& f) { return Formula::unary(Op::eventually, f); }
inline Formula G(const Formula& f) { return Formula::unary(Op::globally, f); }
inline Formula U(const Formula& a, const Formula& b) { return Formula::binary(Op::until, a, b); }
inline Formula R(const Formula& a, const Formula& b) { return Formula::binary(Op::release, a, b); }
inline Formula implies(const Formula& a, const Formula& b) {
  return Formula::binary(Op::implies, a, b);
}

/// A formula together with the partition its atoms refer to.
struct Spec {
  Partition partition;
  Formula formula;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print(const Formula& f, const Partition& p, std::string& out) {
  switch (f.op()) {
    case Op::atom: out += p.name(f.atom_index()); return;
    case Op::tt: out += "true"; return;
    case Op::ff: out += "false"; return;
    case Op::not_: out += "!"; break;
    case Op::next: out += "X "; break;
    case Op::eventually: out += "F "; break;
    case Op::globally: out += "G "; break;
    default: {
      const char* sym = f.op() == Op::and_ ? " & "
                        : f.op() == Op::or_ ? " | "
                        : f.op() == Op::implies ? " -> "
                        : f.op() == Op::until ? " U "
                                              : " R ";
      out += "(";
      print(f.lhs(), p, out);
      out += sym;
      print(f.rhs(), p, out);
      out += ")";
      return;
    }
  }
  print(f.lhs(), p, out);
}

}  // namespace detail

/// Fully parenthesized concrete syntax; parse(to_string(f)) == f.
inline std::string to_string(const Formula& f, const Partition& p) {
  std::string s;
  detail::print(f, p, s);
  return s;
}

// ---------------------------------------------------------------------------
// Parsing
//
//   formula := impl ; impl := or ("->" impl)? ; or := and ("|" and)* ;
//   and := until ("&" until)* ; until := unary (("U"|"R") until)? ;
//   unary := ("!"|"X"|"F"|"G") unary | atom | "true" | "false" | "(" formula ")"

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, const Partition& part) : text_(text), part_(part) {}

  Formula parse() {
    Formula f = parse_impl();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "end of formula");
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) != tok) return false;
    // Keyword operators must not be a prefix of a longer identifier.
    if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
      std::size_t end = pos_ + tok.size();
      if (end < text_.size() &&
          (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        return false;
    }
    pos_ += tok.size();
    return true;
  }

  Formula parse_impl() {
    Formula lhs = parse_or();
    if (accept("->")) return implies(lhs, parse_impl());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = f || parse_and();
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until();
    while (accept("&")) f = f && parse_until();
    return f;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (accept("U")) return U(lhs, parse_until());
    if (accept("R")) return R(lhs, parse_until());
    return lhs;
  }

  Formula parse_unary() {
    if (accept("!")) return !parse_unary();
    if (accept("X")) return X(parse_unary());
    if (accept("F")) return F(parse_unary());
    if (accept("G")) return G(parse_unary());
    if (accept("true")) return Formula::tt();
    if (accept("false")) return Formula::ff();
    if (accept("(")) {
      Formula f = parse_impl();
      if (!accept(")")) throw SyntaxError(pos_, "')'");
      return f;
    }
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start]))) {
      pos_ = start;
      throw SyntaxError(start, "atom, unary operator, constant or '('");
    }
    std::string name(text_.substr(start, pos_ - start));
    auto idx = part_.index_of(name);
    if (!idx) throw UnknownAtom(name);
    return Formula::atom(*idx);
  }

  std::string_view text_;
  const Partition& part_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse(std::string_view text, const Partition& part) {
  return detail::Parser(text, part).parse();
}

inline Formula parse(std::string_view text, const std::vector<std::string>& inputs,
                     const std::vector<std::string>& outputs) {
  return parse(text, Partition(inputs, outputs));
}

// ---------------------------------------------------------------------------
// Negation normal form: negations on atoms only; constructors limited to
// atom, !atom, true, false, &, |, X, U, R.

namespace detail {

inline Formula nnf(const Formula& f, bool neg) {
  switch (f.op()) {
    case Op::atom: return neg ? !f : f;
    case Op::tt: return neg ? Formula::ff() : Formula::tt();
    case Op::ff: return neg ? Formula::tt() : Formula::ff();
    case Op::not_: return nnf(f.lhs(), !neg);
    case Op::and_:
      return neg ? nnf(f.lhs(), true) || nnf(f.rhs(), true)
                 : nnf(f.lhs(), false) && nnf(f.rhs(), false);
    case Op::or_:
      return neg ? nnf(f.lhs(), true) && nnf(f.rhs(), true)
                 : nnf(f.lhs(), false) || nnf(f.rhs(), false);
    case Op::implies:
      return neg ? nnf(f.lhs(), false) && nnf(f.rhs(), true)
                 : nnf(f.lhs(), true) || nnf(f.rhs(), false);
    case Op::next: return X(nnf(f.lhs(), neg));
    case Op::until:
      return neg ? R(nnf(f.lhs(), true), nnf(f.rhs(), true))
                 : U(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::release:
      return neg ? U(nnf(f.lhs(), true), nnf(f.rhs(), true))
                 : R(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::eventually:
      return neg ? R(Formula::ff(), nnf(f.lhs(), true)) : U(Formula::tt(), nnf(f.lhs(), false));
    case Op::globally:
      return neg ? U(Formula::tt(), nnf(f.lhs(), true)) : R(Formula::ff(), nnf(f.lhs(), false));
  }
  return f;
}

}  // namespace detail

inline Formula to_nnf(const Formula& f) { return detail::nnf(f, false); }

inline bool is_nnf(const Formula& f) {
  switch (f.op()) {
    case Op::atom:
    case Op::tt:
    case Op::ff: return true;
    case Op::not_: return f.lhs().op() == Op::atom;
    case Op::and_:
    case Op::or_:
    case Op::until:
    case Op::release: return is_nnf(f.lhs()) && is_nnf(f.rhs());
    case Op::next: return is_nnf(f.lhs());
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Spec files:
//
//   # comment
//   inputs: r1, r2
//   outputs: g1, g2
//   formula: G (!g1 | !g2)

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_names(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace detail

/// Parses spec-file text. Optional overrides replace the declared partition.
inline Spec parse_spec(std::string_view text,
                       const std::optional<std::vector<std::string>>& inputs_override = {},
                       const std::optional<std::vector<std::string>>& outputs_override = {}) {
  std::optional<std::vector<std::string>> ins, outs;
  std::optional<std::pair<std::string, std::size_t>> formula_text;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    if (detail::trim(line).empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw SyntaxError(0, "'inputs:', 'outputs:' or 'formula:'", lineno);
    std::string key = detail::trim(line.substr(0, colon));
    std::string value = line.substr(colon + 1);
    if (key == "inputs" || key == "outputs") {
      auto names = detail::split_names(value);
      for (const auto& n : names)
        if (!Partition::valid_identifier(n))
          throw SyntaxError(colon + 1, "comma-separated proposition names", lineno);
      (key == "inputs" ? ins : outs) = std::move(names);
    } else if (key == "formula") {
      formula_text = {value, lineno};
    } else {
      throw SyntaxError(0, "'inputs:', 'outputs:' or 'formula:'", lineno);
    }
  }
  if (inputs_override) ins = inputs_override;
  if (outputs_override) outs = outputs_override;
  if (!formula_text) throw SyntaxError(0, "'formula:' line", lineno + 1);
  Partition part(ins.value_or(std::vector<std::string>{}), outs.value_or(std::vector<std::string>{}));
  try {
    return {part, parse(formula_text->first, part)};
  } catch (const SyntaxError& e) {
    // Column relative to the full line ("formula:" prefix included).
    throw SyntaxError(e.position() + std::string("formula:").size(), e.expected(),
                      formula_text->second);
  }
}

inline Spec load_spec(const std::string& path,
                      const std::optional<std::vector<std::string>>& inputs_override = {},
                      const std::optional<std::vector<std::string>>& outputs_override = {}) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_spec(ss.str(), inputs_override, outputs_override);
}

}  // namespace skel
