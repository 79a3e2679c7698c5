#pragma once

// Three-valued open letters, words and lassos over 3^O x 2^I.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skel/error.hpp"
#include "skel/ltl.hpp"

namespace skel {

enum class Tv3 : std::uint8_t { bot = 0, top = 1, open = 2 };

/// The information order: bot and top are below open.
constexpr bool leq(Tv3 a, Tv3 b) { return a == b || b == Tv3::open; }

constexpr Tv3 from_bool(bool b) { return b ? Tv3::top : Tv3::bot; }

inline char to_char(Tv3 v) { return v == Tv3::top ? '1' : v == Tv3::bot ? '0' : '?'; }

/// Input valuation over I, bit j set iff input j is true.
using InputValuation = std::uint32_t;

/// Open letter: two-valued inputs, three-valued outputs.
struct OpenLetter {
  std::vector<bool> inputs;
  std::vector<Tv3> outputs;

  friend bool operator==(const OpenLetter&, const OpenLetter&) = default;

  InputValuation input_valuation() const {
    InputValuation m = 0;
    for (std::size_t j = 0; j < inputs.size(); ++j)
      if (inputs[j]) m |= InputValuation{1} << j;
    return m;
  }

  bool is_concrete() const {
    for (auto v : outputs)
      if (v == Tv3::open) return false;
    return true;
  }
};

using OpenWord = std::vector<OpenLetter>;

// ---------------------------------------------------------------------------
// Letter indexing
//
// Open letters are numbered input_mask + 2^|I| * sum_j digit_j 3^j, digit 0=bot,
// 1=top, 2=open. Concrete letters over 2^AP are AP-order bitmasks.

struct LetterCodec {
  int num_inputs = 0;
  int num_outputs = 0;

  LetterCodec() = default;
  LetterCodec(int ni, int no) : num_inputs(ni), num_outputs(no) {}
  explicit LetterCodec(const Partition& p) : num_inputs(p.num_inputs()), num_outputs(p.num_outputs()) {}

  int num_input_valuations() const { return 1 << num_inputs; }
  int num_output_valuations() const { return 1 << num_outputs; }
  int num_open_outputs() const {
    int n = 1;
    for (int j = 0; j < num_outputs; ++j) n *= 3;
    return n;
  }
  int num_open_letters() const { return num_open_outputs() * num_input_valuations(); }
  int num_concrete_letters() const { return 1 << (num_inputs + num_outputs); }

  int open_index(const OpenLetter& l) const {
    check(l);
    int code = 0;
    for (int j = num_outputs - 1; j >= 0; --j) code = code * 3 + static_cast<int>(l.outputs[j]);
    return static_cast<int>(l.input_valuation()) + num_input_valuations() * code;
  }

  OpenLetter open_letter(int index) const {
    OpenLetter l;
    int in = index % num_input_valuations();
    int code = index / num_input_valuations();
    for (int j = 0; j < num_inputs; ++j) l.inputs.push_back((in >> j) & 1);
    for (int j = 0; j < num_outputs; ++j) {
      l.outputs.push_back(static_cast<Tv3>(code % 3));
      code /= 3;
    }
    return l;
  }

  static InputValuation input_of_open(int index, int n_input_vals) {
    return static_cast<InputValuation>(index % n_input_vals);
  }
  InputValuation input_of_open(int index) const { return input_of_open(index, num_input_valuations()); }
  int output_code_of_open(int index) const { return index / num_input_valuations(); }

  Tv3 output_of_open(int index, int output) const {
    int code = index / num_input_valuations();
    for (int j = 0; j < output; ++j) code /= 3;
    return static_cast<Tv3>(code % 3);
  }

  int with_output(int index, int output, Tv3 v) const {
    int pow = num_input_valuations();
    for (int j = 0; j < output; ++j) pow *= 3;
    int cur = (index / pow) % 3;
    return index + (static_cast<int>(v) - cur) * pow;
  }

  /// Concrete letter from input valuation and output valuation bitmasks.
  unsigned concrete(InputValuation in, unsigned out) const { return in | (out << num_inputs); }
  InputValuation input_of_concrete(unsigned c) const { return c & ((1u << num_inputs) - 1); }
  unsigned output_of_concrete(unsigned c) const { return c >> num_inputs; }

  /// Concrete output valuations compatible with the open letter, as bitmasks.
  std::vector<unsigned> instantiations(int open_index) const {
    std::vector<unsigned> out{0};
    for (int j = 0; j < num_outputs; ++j) {
      Tv3 v = output_of_open(open_index, j);
      std::size_t n = out.size();
      if (v == Tv3::top) {
        for (auto& o : out) o |= 1u << j;
      } else if (v == Tv3::open) {
        for (std::size_t k = 0; k < n; ++k) out.push_back(out[k] | (1u << j));
      }
    }
    return out;
  }

  void check(const OpenLetter& l) const {
    if (static_cast<int>(l.inputs.size()) != num_inputs ||
        static_cast<int>(l.outputs.size()) != num_outputs)
      throw PartitionMismatch();
  }
};

// ---------------------------------------------------------------------------
// Letter operations

inline bool same_shape(const OpenLetter& a, const OpenLetter& b) {
  return a.inputs.size() == b.inputs.size() && a.outputs.size() == b.outputs.size();
}

/// Pointwise information order; inputs are two-valued so they must be equal.
inline bool leq_letter(const OpenLetter& a, const OpenLetter& b) {
  if (!same_shape(a, b)) throw PartitionMismatch();
  if (a.inputs != b.inputs) return false;
  for (std::size_t j = 0; j < a.outputs.size(); ++j)
    if (!leq(a.outputs[j], b.outputs[j])) return false;
  return true;
}

inline OpenLetter substitute(const OpenLetter& v, const Partition& part, std::string_view prop,
                             bool value) {
  if (part.input_index(prop)) throw InputSubstitution(std::string(prop));
  auto j = part.output_index(prop);
  if (!j) throw UnknownAtom(std::string(prop));
  OpenLetter r = v;
  r.outputs.at(*j) = from_bool(value);
  return r;
}

/// All open letters over the partition, in index order.
inline std::vector<OpenLetter> enumerate_letters(const LetterCodec& codec) {
  std::vector<OpenLetter> out;
  for (int i = 0; i < codec.num_open_letters(); ++i) out.push_back(codec.open_letter(i));
  return out;
}

// ---------------------------------------------------------------------------
// Lassos

template <class Letter>
struct Lasso {
  std::vector<Letter> stem;
  std::vector<Letter> loop;

  std::size_t period_start() const { return stem.size(); }
  std::size_t span() const { return stem.size() + loop.size(); }

  const Letter& letter_at(std::size_t i) const {
    if (loop.empty()) throw Error("lasso with empty loop");
    if (i < stem.size()) return stem[i];
    return loop[(i - stem.size()) % loop.size()];
  }

  /// Canonical form: minimal period, then stem shortened as far as possible.
  Lasso normalized() const {
    if (loop.empty()) throw Error("lasso with empty loop");
    Lasso r = *this;
    std::size_t n = r.loop.size();
    for (std::size_t p = 1; p <= n; ++p) {
      if (n % p) continue;
      bool ok = true;
      for (std::size_t k = p; k < n && ok; ++k) ok = r.loop[k] == r.loop[k - p];
      if (ok) {
        r.loop.resize(p);
        break;
      }
    }
    while (!r.stem.empty() && r.stem.back() == r.loop.back()) {
      r.loop.insert(r.loop.begin(), r.loop.back());
      r.loop.pop_back();
      r.stem.pop_back();
    }
    return r;
  }

  /// Denoted infinite words are equal.
  friend bool operator==(const Lasso& a, const Lasso& b) {
    auto na = a.normalized(), nb = b.normalized();
    return na.stem == nb.stem && na.loop == nb.loop;
  }
};

using OpenLasso = Lasso<OpenLetter>;
using InputLasso = Lasso<InputValuation>;
using ConcreteLasso = Lasso<unsigned>;

/// Number of positions that suffices to compare two lassos position-wise.
template <class A, class B>
std::size_t comparison_horizon(const Lasso<A>& a, const Lasso<B>& b) {
  return a.stem.size() + b.stem.size() + std::lcm(a.loop.size(), b.loop.size());
}

inline bool leq_lasso(const OpenLasso& a, const OpenLasso& b) {
  std::size_t h = comparison_horizon(a, b);
  for (std::size_t i = 0; i < h; ++i)
    if (!leq_letter(a.letter_at(i), b.letter_at(i))) return false;
  return true;
}

inline InputLasso input_part(const OpenLasso& w) {
  InputLasso r;
  for (const auto& l : w.stem) r.stem.push_back(l.input_valuation());
  for (const auto& l : w.loop) r.loop.push_back(l.input_valuation());
  return r;
}

// ---------------------------------------------------------------------------
// Text syntax
//
//   letter: {r1=1,r2=0 | g1=?,g2=0}    (the '|' separator is optional)
//   lasso:  w1 w2 ( w3 w4 )^w

/// Letter as written, before the "inputs are two-valued" check.
struct RawLetter {
  std::vector<Tv3> inputs;
  std::vector<Tv3> outputs;

  bool has_open_input() const {
    for (auto v : inputs)
      if (v == Tv3::open) return true;
    return false;
  }

  std::optional<OpenLetter> to_open() const {
    if (has_open_input()) return std::nullopt;
    OpenLetter l;
    for (auto v : inputs) l.inputs.push_back(v == Tv3::top);
    l.outputs = outputs;
    return l;
  }
};

namespace detail {

class TextReader {
 public:
  TextReader(std::string_view s, const Partition& p) : s_(s), part_(p) {}

  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    ws();
    return pos_ >= s_.size();
  }
  bool peek(char c) {
    ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c, const char* what) {
    if (!peek(c)) throw SyntaxError(pos_, what);
    ++pos_;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  std::size_t pos() const { return pos_; }

  // Reads one letter. When `allow_missing_outputs`, outputs may be omitted
  // (they are then reported as open); inputs must always be complete.
  RawLetter letter(bool allow_missing_outputs) {
    RawLetter l;
    l.inputs.assign(part_.num_inputs(), Tv3::open);
    l.outputs.assign(part_.num_outputs(), Tv3::open);
    std::vector<bool> in_seen(part_.num_inputs()), out_seen(part_.num_outputs());
    expect('{', "'{'");
    bool need_separator = false;
    while (!accept('}')) {
      if (accept(',') || accept('|')) {
        need_separator = false;
        continue;
      }
      if (need_separator) throw SyntaxError(pos_, "',', '|' or '}'");
      need_separator = true;
      ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      if (start == pos_) throw SyntaxError(pos_, "proposition name");
      std::string name(s_.substr(start, pos_ - start));
      expect('=', "'='");
      ws();
      if (pos_ >= s_.size()) throw SyntaxError(pos_, "'0', '1' or '?'");
      char c = s_[pos_++];
      Tv3 v = c == '1' ? Tv3::top : c == '0' ? Tv3::bot : c == '?' ? Tv3::open : Tv3{255};
      if (static_cast<int>(v) == 255) throw SyntaxError(pos_ - 1, "'0', '1' or '?'");
      if (auto j = part_.input_index(name)) {
        l.inputs[*j] = v;
        in_seen[*j] = true;
      } else if (auto k = part_.output_index(name)) {
        l.outputs[*k] = v;
        out_seen[*k] = true;
      } else {
        throw UnknownAtom(name);
      }
    }
    for (int j = 0; j < part_.num_inputs(); ++j)
      if (!in_seen[j]) throw SyntaxError(pos_, "value for input '" + part_.inputs()[j] + "'");
    if (!allow_missing_outputs)
      for (int j = 0; j < part_.num_outputs(); ++j)
        if (!out_seen[j]) throw SyntaxError(pos_, "value for output '" + part_.outputs()[j] + "'");
    return l;
  }

 private:
  std::string_view s_;
  const Partition& part_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a finite word of raw letters (open inputs allowed).
inline std::vector<RawLetter> parse_raw_word(std::string_view text, const Partition& part) {
  detail::TextReader r(text, part);
  std::vector<RawLetter> w;
  while (!r.at_end()) w.push_back(r.letter(false));
  return w;
}

inline OpenWord parse_word(std::string_view text, const Partition& part) {
  OpenWord w;
  for (const auto& raw : parse_raw_word(text, part)) {
    auto l = raw.to_open();
    if (!l) throw SyntaxError(0, "two-valued inputs");
    w.push_back(*l);
  }
  return w;
}

namespace detail {

template <class Letter, class ReadLetter>
Lasso<Letter> parse_lasso_with(std::string_view text, const Partition& part, ReadLetter read) {
  TextReader r(text, part);
  Lasso<Letter> out;
  while (!r.peek('(')) {
    if (r.at_end()) throw SyntaxError(r.pos(), "'('");
    out.stem.push_back(read(r));
  }
  r.expect('(', "'('");
  while (!r.accept(')')) {
    if (r.at_end()) throw SyntaxError(r.pos(), "')'");
    out.loop.push_back(read(r));
  }
  r.expect('^', "'^w'");
  r.ws();
  if (!r.accept('w')) throw SyntaxError(r.pos(), "'w' after '^'");
  if (!r.at_end()) throw SyntaxError(r.pos(), "end of lasso");
  if (out.loop.empty()) throw SyntaxError(r.pos(), "nonempty loop");
  return out;
}

}  // namespace detail

inline OpenLasso parse_lasso(std::string_view text, const Partition& part) {
  return detail::parse_lasso_with<OpenLetter>(text, part, [](detail::TextReader& r) {
    auto l = r.letter(false).to_open();
    if (!l) throw SyntaxError(r.pos(), "two-valued inputs");
    return *l;
  });
}

/// Input lasso; letters list inputs only, e.g. `{r1=1} ({r1=0})^w`.
inline InputLasso parse_input_lasso(std::string_view text, const Partition& part) {
  return detail::parse_lasso_with<InputValuation>(text, part, [](detail::TextReader& r) {
    auto l = r.letter(true).to_open();
    if (!l) throw SyntaxError(r.pos(), "two-valued inputs");
    return l->input_valuation();
  });
}

inline std::string to_string(const OpenLetter& l, const Partition& part) {
  std::string s = "{";
  for (int j = 0; j < part.num_inputs(); ++j) {
    if (j) s += ",";
    s += part.inputs()[j] + "=" + (l.inputs[j] ? "1" : "0");
  }
  if (part.num_inputs() && part.num_outputs()) s += " | ";
  for (int j = 0; j < part.num_outputs(); ++j) {
    if (j) s += ",";
    s += part.outputs()[j] + "=" + to_char(l.outputs[j]);
  }
  return s + "}";
}

inline std::string to_string(const OpenWord& w, const Partition& part) {
  std::string s;
  for (const auto& l : w) {
    if (!s.empty()) s += " ";
    s += to_string(l, part);
  }
  return s;
}

inline std::string to_string(const OpenLasso& w, const Partition& part) {
  std::string s = to_string(w.stem, part);
  if (!s.empty()) s += " ";
  return s + "( " + to_string(w.loop, part) + " )^w";
}

inline std::string input_to_string(InputValuation v, const Partition& part) {
  std::string s = "{";
  for (int j = 0; j < part.num_inputs(); ++j) {
    if (j) s += ",";
    s += part.inputs()[j] + "=" + (((v >> j) & 1) ? "1" : "0");
  }
  return s + "}";
}

inline std::string to_string(const InputLasso& w, const Partition& part) {
  std::string s;
  for (auto v : w.stem) s += input_to_string(v, part) + " ";
  s += "(";
  for (auto v : w.loop) s += " " + input_to_string(v, part);
  return s + " )^w";
}

}  // namespace skel
