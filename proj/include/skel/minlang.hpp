#pragma once

// Automata over open letters recognizing the complement of min(f), and the
// input-language automata describing when an output value is possible or
// forced at a position.

#include <functional>
#include <string>
#include <vector>

#include "skel/automata.hpp"
#include "skel/ltl.hpp"
#include "skel/threeval.hpp"

namespace skel {

namespace detail {

inline Formula literal(int ap, bool value) { return value ? Formula::atom(ap) : !Formula::atom(ap); }

inline Formula next_n(Formula f, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) f = X(f);
  return f;
}

inline int output_ap(const Partition& part, int output) {
  if (output < 0 || output >= part.num_outputs()) throw Error("output index out of range");
  return part.num_inputs() + output;
}

}  // namespace detail

/// Input-and-mark automaton: letters e + 2^|I| * mark. Accepts (ς, marks)
/// iff some model with input ς has `value` for the output at every marked position.
inline Nba marked_value_inputs(const Formula& f, const Partition& part, int output, bool value,
                               std::size_t cap = default_state_cap) {
  Nba a = ltl_to_nba(f, part, cap);
  LetterCodec codec(part);
  const int ni = codec.num_input_valuations();
  Nba r;
  r.alphabet = {AlphabetKind::input_only, part.num_inputs() + 1, part.num_outputs()};
  for (int q = 0; q < a.num_states(); ++q) r.add_state(a.accepting[q]);
  r.initial = a.initial;
  for (int q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.out[q]) {
      unsigned c = static_cast<unsigned>(e.letter);
      int in = static_cast<int>(codec.input_of_concrete(c));
      r.add_edge(q, in, e.to);
      if (((codec.output_of_concrete(c) >> output) & 1u) == static_cast<unsigned>(value))
        r.add_edge(q, in + ni, e.to);
    }
  r.finalize();
  return reduce(r);
}

/// Input-and-mark words with exactly one mark.
inline Nba exactly_one_mark(const Partition& part) {
  const int ni = 1 << part.num_inputs();
  Nba m;
  m.alphabet = {AlphabetKind::input_only, part.num_inputs() + 1, part.num_outputs()};
  m.add_state(false);
  m.add_state(true);
  for (int e = 0; e < ni; ++e) {
    m.add_edge(0, e, 0);
    m.add_edge(0, e + ni, 1);
    m.add_edge(1, e, 1);
  }
  m.finalize();
  return m;
}

/// Reads open letters through an automaton over input valuations. With
/// `marked_output` >= 0 the automaton reads input-and-mark letters, and a
/// mark may be placed only where that output is open.
inline Nba lift_to_open(const Nba& a, const Partition& part, int marked_output = -1) {
  LetterCodec codec(part);
  const int ni = codec.num_input_valuations();
  Nba r;
  r.alphabet = AlphabetSpec::open(part);
  r.initial = a.initial;
  for (int q = 0; q < a.num_states(); ++q) r.add_state(a.accepting[q]);
  for (int q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.out[q]) {
      bool mark = e.letter >= ni;
      int in = e.letter % ni;
      for (int v = in; v < codec.num_open_letters(); v += ni)
        if (!mark || codec.output_of_open(v, marked_output) == Tv3::open) r.add_edge(q, v, e.to);
    }
  r.finalize();
  return r;
}

/// Inputs admitting a model of f.
inline Nba model_inputs(const Formula& f, const Partition& part, std::size_t cap = default_state_cap) {
  return reduce(project_inputs(ltl_to_nba(f, part, cap)));
}

/// Words with a wrongly open position: some w(i)(p) = ? although no model
/// with input w_I has one of the two values there. Words whose input admits
/// no model at all are accepted here as well.
inline Nba build_n1(const Formula& f, const Partition& part, std::size_t cap = default_state_cap) {
  Nba r = lift_to_open(nba_complement(model_inputs(f, part, cap), cap), part);
  Nba one = exactly_one_mark(part);
  for (int p = 0; p < part.num_outputs(); ++p)
    for (bool b : {false, true}) {
      Nba missing = nba_product(nba_complement(marked_value_inputs(f, part, p, b, cap), cap), one, cap);
      r = nba_union(r, lift_to_open(reduce(missing), part, p));
    }
  return reduce(r);
}

/// Words with a wrongly fixed position: some w(i)(p) = b although a model with
/// input w_I carries the opposite value there.
inline Nba build_n2(const Formula& f, const Partition& part, std::size_t cap = default_state_cap) {
  Nba a = ltl_to_nba(f, part, cap);
  LetterCodec codec(part);
  const int letters = codec.num_open_letters();
  using S = std::pair<int, bool>;
  auto g = detail::explore<S, detail::PairHash>(
      S{a.initial, false},
      [&](const S& s, auto&& emit) {
        const auto [q, guessed] = s;
        for (const auto& e : a.out[q]) {
          unsigned c = static_cast<unsigned>(e.letter);
          InputValuation in = codec.input_of_concrete(c);
          unsigned o = codec.output_of_concrete(c);
          for (int v = static_cast<int>(in); v < letters; v += codec.num_input_valuations()) {
            emit(v, S{e.to, guessed});
            if (guessed) continue;
            for (int p = 0; p < part.num_outputs(); ++p) {
              Tv3 fixed = codec.output_of_open(v, p);
              if (fixed != Tv3::open && fixed != from_bool((o >> p) & 1u)) emit(v, S{e.to, true});
            }
          }
        }
      },
      [&](const S& s) { return s.second && a.accepting[s.first]; }, cap);
  return reduce(detail::to_nba(g, AlphabetSpec::open(part)));
}

/// Open words outside min(f).
inline Nba build_complement_min(const Formula& f, const Partition& part, std::size_t cap = default_state_cap) {
  return reduce(nba_union(build_n1(f, part, cap), build_n2(f, part, cap)));
}

// ---------------------------------------------------------------------------
// Input languages

/// Concrete-letter automaton for "output `output` has `value` at position i".
inline Nba at_position(const Partition& part, std::size_t i, int output, bool value) {
  LetterCodec codec(part);
  const int ap = detail::output_ap(part, output);
  Nba a;
  a.alphabet = AlphabetSpec::concrete(part);
  for (std::size_t k = 0; k <= i + 1; ++k) a.add_state(true);
  for (std::size_t k = 0; k <= i; ++k)
    for (int c = 0; c < codec.num_concrete_letters(); ++c)
      if (k < i || (((c >> ap) & 1) != 0) == value) a.add_edge(static_cast<int>(k), c, static_cast<int>(k + 1));
  for (int c = 0; c < codec.num_concrete_letters(); ++c)
    a.add_edge(static_cast<int>(i + 1), c, static_cast<int>(i + 1));
  a.finalize();
  return a;
}

/// Inputs admitting a model of f with `value` for the output at position i.
inline Nba exists_lang(const Formula& f, const Partition& part, std::size_t i, int output, bool value,
                       std::size_t cap = default_state_cap) {
  return reduce(project_inputs(nba_product(ltl_to_nba(f, part, cap), at_position(part, i, output, value), cap)));
}

/// Inputs admitting a model of f where every model has `value` at (i, output).
inline Nba forced_lang(const Formula& f, const Partition& part, std::size_t i, int output, bool value,
                       std::size_t cap = default_state_cap) {
  Nba opposite = exists_lang(f, part, i, output, !value, cap);
  return reduce(nba_product(model_inputs(f, part, cap), nba_complement(opposite, cap), cap));
}

/// Inputs starting with the given prefix.
inline Nba input_cylinder(const Partition& part, const std::vector<InputValuation>& prefix) {
  LetterCodec codec(part);
  Nba a;
  a.alphabet = AlphabetSpec::inputs(part);
  for (std::size_t k = 0; k <= prefix.size(); ++k) a.add_state(true);
  for (std::size_t k = 0; k < prefix.size(); ++k)
    a.add_edge(static_cast<int>(k), static_cast<int>(prefix[k]), static_cast<int>(k + 1));
  const int last = static_cast<int>(prefix.size());
  for (int e = 0; e < codec.num_input_valuations(); ++e) a.add_edge(last, e, last);
  a.finalize();
  return a;
}

// ---------------------------------------------------------------------------
// Letter names for DOT export

inline std::function<std::string(int)> open_letter_names(const Partition& part) {
  LetterCodec codec(part);
  return [part, codec](int v) { return to_string(codec.open_letter(v), part); };
}

inline std::function<std::string(int)> input_letter_names(const Partition& part) {
  return [part](int e) { return input_to_string(static_cast<InputValuation>(e), part); };
}

}  // namespace skel
