#pragma once

// Ground-truth semantics: LTL on lassos, forced output values and minimal
// satisfying open sequences for a fixed input lasso.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skel/automata.hpp"
#include "skel/ltl.hpp"
#include "skel/threeval.hpp"

namespace skel {

enum class ForcedStatus { forced_true, forced_false, open, no_model };

inline std::string to_string(ForcedStatus s) {
  switch (s) {
    case ForcedStatus::forced_true: return "forced(1)";
    case ForcedStatus::forced_false: return "forced(0)";
    case ForcedStatus::open: return "open";
    case ForcedStatus::no_model: return "no-model";
  }
  return "?";
}

inline ForcedStatus forced(bool b) { return b ? ForcedStatus::forced_true : ForcedStatus::forced_false; }

/// Value carried by the minimal sequence for a given status (undefined for no_model).
inline Tv3 letter_value(ForcedStatus s) {
  return s == ForcedStatus::forced_true ? Tv3::top : s == ForcedStatus::forced_false ? Tv3::bot : Tv3::open;
}

// ---------------------------------------------------------------------------
// Lasso evaluation by backward fixpoints

namespace detail {

inline std::vector<bool> eval_positions(const Formula& f, const ConcreteLasso& w) {
  const std::size_t n = w.span();
  auto next = [&](std::size_t i) { return i + 1 == n ? w.stem.size() : i + 1; };
  std::vector<bool> v(n);
  switch (f.op()) {
    case Op::atom:
      for (std::size_t i = 0; i < n; ++i) v[i] = (w.letter_at(i) >> f.atom_index()) & 1u;
      return v;
    case Op::tt: v.assign(n, true); return v;
    case Op::ff: return v;
    case Op::not_: {
      auto a = eval_positions(f.lhs(), w);
      for (std::size_t i = 0; i < n; ++i) v[i] = !a[i];
      return v;
    }
    case Op::next: {
      auto a = eval_positions(f.lhs(), w);
      for (std::size_t i = 0; i < n; ++i) v[i] = a[next(i)];
      return v;
    }
    case Op::eventually: return eval_positions(U(Formula::tt(), f.lhs()), w);
    case Op::globally: return eval_positions(R(Formula::ff(), f.lhs()), w);
    default: break;
  }
  auto a = eval_positions(f.lhs(), w);
  auto b = eval_positions(f.rhs(), w);
  if (f.op() == Op::and_ || f.op() == Op::or_ || f.op() == Op::implies) {
    for (std::size_t i = 0; i < n; ++i)
      v[i] = f.op() == Op::and_ ? (a[i] && b[i]) : f.op() == Op::or_ ? (a[i] || b[i]) : (!a[i] || b[i]);
    return v;
  }
  // Until is the least fixpoint, release the greatest. Two backward sweeps
  // over the loop reach the fixpoint.
  const bool until = f.op() == Op::until;
  v.assign(n, !until);
  for (int round = 0; round < 2; ++round)
    for (std::size_t k = n; k-- > w.stem.size();)
      v[k] = until ? (b[k] || (a[k] && v[next(k)])) : (b[k] && (a[k] || v[next(k)]));
  for (std::size_t k = w.stem.size(); k-- > 0;)
    v[k] = until ? (b[k] || (a[k] && v[k + 1])) : (b[k] && (a[k] || v[k + 1]));
  return v;
}

}  // namespace detail

inline bool eval_ltl_on_lasso(const Formula& f, const ConcreteLasso& w) {
  if (w.loop.empty()) throw Error("lasso with empty loop");
  return detail::eval_positions(f, w)[0];
}

// ---------------------------------------------------------------------------
// Forced values and minimal traces

/// Holds the Buchi automaton of a formula; all queries are const.
class Oracle {
 public:
  Oracle(Formula f, Partition part)
      : formula_(std::move(f)), part_(std::move(part)), codec_(part_), nba_(ltl_to_nba(formula_, part_)) {}

  const Nba& automaton() const { return nba_; }
  const Partition& partition() const { return part_; }
  const Formula& formula() const { return formula_; }

  ForcedStatus forced_value(const InputLasso& in, std::size_t i, int output) const {
    Product prod(*this, in);
    auto reach = prod.initial_set();
    for (std::size_t k = 0; k < i && !reach.empty(); ++k) reach = prod.step(reach, k);
    if (reach.empty()) return ForcedStatus::no_model;
    bool t = prod.possible(reach, i, output, true), b = prod.possible(reach, i, output, false);
    if (t && b) return ForcedStatus::open;
    if (t || b) return forced(t);
    return ForcedStatus::no_model;
  }

  /// The unique minimal satisfying open lasso for the input, or nullopt when
  /// no model has this input.
  std::optional<OpenLasso> min_trace(const InputLasso& in) const {
    Product prod(*this, in);
    auto reach = prod.initial_set();
    if (reach.empty()) return std::nullopt;
    std::map<std::vector<int>, std::size_t> seen;
    std::vector<OpenLetter> letters;
    for (std::size_t k = 0;; ++k) {
      // Reach sets only hold product states (q, lasso position), so the set
      // determines the lasso position once k is past the stem.
      std::vector<int> key = reach;
      key.push_back(static_cast<int>(prod.lasso_pos(k)));
      if (k >= in.stem.size()) {
        auto [it, fresh] = seen.emplace(key, k);
        if (!fresh) {
          OpenLasso out;
          out.stem.assign(letters.begin(), letters.begin() + static_cast<long>(it->second));
          out.loop.assign(letters.begin() + static_cast<long>(it->second), letters.end());
          return out.normalized();
        }
      }
      OpenLetter l;
      InputValuation e = in.letter_at(k);
      for (int j = 0; j < part_.num_inputs(); ++j) l.inputs.push_back((e >> j) & 1u);
      for (int p = 0; p < part_.num_outputs(); ++p) {
        bool t = prod.possible(reach, k, p, true), b = prod.possible(reach, k, p, false);
        l.outputs.push_back(t && b ? Tv3::open : from_bool(t));
      }
      letters.push_back(std::move(l));
      reach = prod.step(reach, k);
    }
  }

  /// Same contract as forced_value; answered by two emptiness checks on an
  /// unrolled product, sharing no state with the subset tracking above.
  ForcedStatus forced_value_direct(const InputLasso& in, std::size_t i, int output) const {
    bool t = model_exists_with(in, i, output, true);
    bool b = model_exists_with(in, i, output, false);
    if (t && b) return ForcedStatus::open;
    if (t || b) return forced(t);
    return ForcedStatus::no_model;
  }

  bool model_exists_with(const InputLasso& in, std::size_t i, int output, bool value) const {
    if (in.loop.empty()) throw Error("input lasso with empty loop");
    // Unroll so that position i lies in the stem.
    const std::size_t stem = std::max(in.stem.size(), i + 1);
    const std::size_t loop = in.loop.size();
    using S = std::pair<int, std::size_t>;
    auto g = detail::explore<S, detail::PairHash>(
        S{nba_.initial, 0},
        [&](const S& s, auto&& emit) {
          const auto [q, pos] = s;
          InputValuation e = in.letter_at(pos);
          std::size_t nxt = pos + 1 == stem + loop ? stem : pos + 1;
          for (const auto& edge : nba_.out[q]) {
            unsigned c = static_cast<unsigned>(edge.letter);
            if (codec_.input_of_concrete(c) != e) continue;
            if (pos == i && (((codec_.output_of_concrete(c) >> output) & 1u) != 0) != value) continue;
            emit(0, S{edge.to, nxt});
          }
        },
        [&](const S& s) { return bool(nba_.accepting[s.first]); });
    return detail::find_lasso(g.out, g.accepting, 0).has_value();
  }

 private:
  // Product of the formula automaton with the input lasso. States are
  // q * span + position; `live` marks states with an accepting continuation.
  class Product {
   public:
    Product(const Oracle& o, const InputLasso& in) : o_(o), in_(in), span_(in.span()) {
      if (in.loop.empty()) throw Error("input lasso with empty loop");
      const int n = o.nba_.num_states();
      std::vector<std::vector<Edge>> out(static_cast<std::size_t>(n) * span_);
      for (int q = 0; q < n; ++q)
        for (std::size_t j = 0; j < span_; ++j) {
          std::size_t nj = j + 1 == span_ ? in.stem.size() : j + 1;
          for (const auto& e : o.nba_.out[q])
            if (o.codec_.input_of_concrete(static_cast<unsigned>(e.letter)) == in.letter_at(j))
              out[id(q, j)].push_back({e.letter, id(e.to, nj)});
        }
      std::vector<bool> acc(out.size());
      for (int q = 0; q < n; ++q)
        for (std::size_t j = 0; j < span_; ++j) acc[id(q, j)] = o.nba_.accepting[q];
      live_ = detail::live_states(out, acc, -1);
      out_ = std::move(out);
    }

    std::size_t lasso_pos(std::size_t k) const {
      return k < span_ ? k : in_.stem.size() + (k - in_.stem.size()) % in_.loop.size();
    }

    std::vector<int> initial_set() const {
      int s = id(o_.nba_.initial, 0);
      return live_[s] ? std::vector<int>{s} : std::vector<int>{};
    }

    std::vector<int> step(const std::vector<int>& reach, std::size_t) const {
      std::vector<int> next;
      for (int s : reach)
        for (const auto& e : out_[s])
          if (live_[e.to]) next.push_back(e.to);
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      return next;
    }

    bool possible(const std::vector<int>& reach, std::size_t, int output, bool value) const {
      for (int s : reach)
        for (const auto& e : out_[s])
          if (live_[e.to] &&
              (((o_.codec_.output_of_concrete(static_cast<unsigned>(e.letter)) >> output) & 1u) != 0) == value)
            return true;
      return false;
    }

   private:
    int id(int q, std::size_t j) const { return static_cast<int>(static_cast<std::size_t>(q) * span_ + j); }

    const Oracle& o_;
    const InputLasso& in_;
    std::size_t span_;
    std::vector<std::vector<Edge>> out_;
    std::vector<char> live_;
  };

  Formula formula_;
  Partition part_;
  LetterCodec codec_;
  Nba nba_;
};

inline ForcedStatus forced_value(const Formula& f, const Partition& part, const InputLasso& in, std::size_t i,
                                 int output) {
  return Oracle(f, part).forced_value(in, i, output);
}

inline ForcedStatus forced_value_direct(const Formula& f, const Partition& part, const InputLasso& in,
                                        std::size_t i, int output) {
  return Oracle(f, part).forced_value_direct(in, i, output);
}

inline std::optional<OpenLasso> min_trace(const Formula& f, const Partition& part, const InputLasso& in) {
  return Oracle(f, part).min_trace(in);
}

}  // namespace skel
