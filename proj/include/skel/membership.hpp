#pragma once

// Bad-prefix membership for min(f) and bad-prefix extraction from lassos.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>
#include <vector>

#include "skel/automata.hpp"
#include "skel/minlang.hpp"
#include "skel/oracle.hpp"

namespace skel {

struct BadPrefixReason {
  std::size_t position = 0;
  int output = -1;  // -1 when no input extension admits a model
  ForcedStatus expected = ForcedStatus::no_model;
};

struct BadPrefixVerdict {
  bool is_bad = false;
  std::optional<BadPrefixReason> reason;
};

inline constexpr std::size_t default_monoid_cap = 200'000;

/// Decides whether finite open words are bad prefixes of min(f).
///
/// After a prefix w, R is the set of automaton states reachable on w_I under
/// any outputs, Neg collects states reachable only through a value w forbids,
/// and Pos holds sets that must each meet the states from which the rest of
/// the input admits an accepting run. w is a good prefix iff some input
/// suffix has an accepting-continuation set L with L ∩ Neg = ∅ and L meeting
/// every set in Pos. The possible sets L are enumerated once, from the
/// transition profiles of the input projection.
class BadPrefixDecider {
 public:
  struct State {
    Cube reach = 0;
    Cube neg = 0;
    std::vector<Cube> pos;  // antichain, sorted
    bool operator==(const State&) const = default;
  };

  BadPrefixDecider(const Formula& f, const Partition& part, std::size_t monoid_cap = default_monoid_cap)
      : part_(part), codec_(part), nba_(ltl_to_nba(f, part)) {
    if (nba_.num_states() > 63) throw ResourceLimit("formula automaton exceeds 63 states");
    n_ = nba_.num_states();
    const int ni = codec_.num_input_valuations(), no = part.num_outputs();
    post_any_.assign(n_, std::vector<Cube>(ni, 0));
    post_val_.assign(n_, std::vector<Cube>(ni * no * 2, 0));
    for (int q = 0; q < n_; ++q)
      for (const auto& e : nba_.out[q]) {
        unsigned c = static_cast<unsigned>(e.letter);
        int in = static_cast<int>(codec_.input_of_concrete(c));
        unsigned o = codec_.output_of_concrete(c);
        Cube bit = Cube{1} << e.to;
        post_any_[q][in] |= bit;
        for (int p = 0; p < no; ++p) post_val_[q][(in * no + p) * 2 + ((o >> p) & 1u)] |= bit;
      }
    compute_family(monoid_cap);
  }

  const Partition& partition() const { return part_; }
  const Nba& automaton() const { return nba_; }
  std::size_t family_size() const { return family_.size(); }

  State initial() const {
    State s;
    s.reach = Cube{1} << nba_.initial;
    s.pos = {s.reach};
    return s;
  }

  /// Successor on an open letter (index).
  State step(const State& s, int letter) const {
    const int in = static_cast<int>(codec_.input_of_open(letter));
    const int no = part_.num_outputs();
    State r;
    r.reach = post(s.reach, in);
    r.neg = post(s.neg, in);
    std::vector<Cube> pos;
    pos.reserve(s.pos.size() + 2 * no);
    for (Cube c : s.pos) pos.push_back(post(c, in));
    for (int p = 0; p < no; ++p) {
      Tv3 v = codec_.output_of_open(letter, p);
      if (v == Tv3::open) {
        pos.push_back(post_value(s.reach, in, p, true));
        pos.push_back(post_value(s.reach, in, p, false));
      } else {
        r.neg |= post_value(s.reach, in, p, v != Tv3::top);
      }
    }
    minimize(pos);
    std::sort(pos.begin(), pos.end());
    r.pos = std::move(pos);
    return r;
  }

  bool is_bad(const State& s) const {
    for (Cube l : family_) {
      if (l & s.neg) continue;
      bool all = true;
      for (Cube p : s.pos)
        if (!(l & p)) {
          all = false;
          break;
        }
      if (all) return false;
    }
    return true;
  }

  bool is_bad(const std::vector<int>& word) const {
    State s = initial();
    for (int a : word) s = step(s, a);
    return is_bad(s);
  }

  BadPrefixVerdict verdict(const std::vector<int>& word) const {
    State s = initial();
    std::size_t k = 0;
    bool bad = is_bad(s);
    State before = s;
    while (!bad && k < word.size()) {
      before = s;
      s = step(s, word[k++]);
      bad = is_bad(s);
    }
    BadPrefixVerdict v;
    v.is_bad = bad;
    if (!bad) return v;
    if (k == 0) {
      v.reason = BadPrefixReason{0, -1, ForcedStatus::no_model};
      return v;
    }
    // The first bad prefix ends at position k-1; find an output whose value there is to blame.
    const int letter = word[k - 1];
    for (int p = 0; p < part_.num_outputs(); ++p)
      for (Tv3 alt : {Tv3::top, Tv3::bot, Tv3::open}) {
        if (alt == codec_.output_of_open(letter, p)) continue;
        if (!is_bad(step(before, codec_.with_output(letter, p, alt)))) {
          v.reason = BadPrefixReason{k - 1, p,
                                     alt == Tv3::open ? ForcedStatus::open : forced(alt == Tv3::top)};
          return v;
        }
      }
    v.reason = BadPrefixReason{k - 1, -1, ForcedStatus::no_model};
    return v;
  }

  BadPrefixVerdict verdict(const OpenWord& w) const {
    std::vector<int> idx;
    for (const auto& l : w) idx.push_back(codec_.open_index(l));
    return verdict(idx);
  }

  /// Raw letters may carry open inputs; such words are bad outright.
  BadPrefixVerdict verdict(const std::vector<RawLetter>& w) const {
    OpenWord ow;
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto l = w[i].to_open();
      if (!l) return {true, BadPrefixReason{i, -1, ForcedStatus::no_model}};
      ow.push_back(*l);
    }
    return verdict(ow);
  }

  /// Shortest bad prefix of the lasso. Scanning stops once the decision state
  /// repeats at the same loop position, since no later prefix can then be bad.
  std::vector<int> shortest_bad_prefix(const Lasso<int>& w) const {
    if (w.loop.empty()) throw Error("lasso with empty loop");
    State s = initial();
    std::vector<int> prefix;
    std::map<std::pair<std::size_t, Cube>, std::vector<State>> seen;
    for (std::size_t k = 0;; ++k) {
      if (is_bad(s)) return prefix;
      if (k >= w.stem.size()) {
        std::size_t pos = (k - w.stem.size()) % w.loop.size();
        auto& bucket = seen[{pos, s.reach}];
        if (std::find(bucket.begin(), bucket.end(), s) != bucket.end()) throw NotActuallyBad();
        bucket.push_back(s);
      }
      int a = w.letter_at(k);
      prefix.push_back(a);
      s = step(s, a);
    }
  }

  OpenWord shortest_bad_prefix(const OpenLasso& w) const {
    Lasso<int> idx;
    for (const auto& l : w.stem) idx.stem.push_back(codec_.open_index(l));
    for (const auto& l : w.loop) idx.loop.push_back(codec_.open_index(l));
    OpenWord out;
    for (int a : shortest_bad_prefix(idx)) out.push_back(codec_.open_letter(a));
    return out;
  }

 private:
  Cube post(Cube s, int in) const {
    Cube r = 0;
    while (s) {
      int q = std::countr_zero(s);
      s &= s - 1;
      r |= post_any_[q][in];
    }
    return r;
  }

  Cube post_value(Cube s, int in, int p, bool b) const {
    Cube r = 0;
    const int no = part_.num_outputs();
    while (s) {
      int q = std::countr_zero(s);
      s &= s - 1;
      r |= post_val_[q][(in * no + p) * 2 + (b ? 1 : 0)];
    }
    return r;
  }

  Cube pre(Cube target, int in) const {
    Cube r = 0;
    for (int q = 0; q < n_; ++q)
      if (post_any_[q][in] & target) r |= Cube{1} << q;
    return r;
  }

  // Transition profile of a word over inputs: reach[q] = end states of runs
  // from q, acc[q] = end states of runs from q that meet an accepting state.
  struct Profile {
    std::vector<Cube> reach, acc;
    bool operator==(const Profile&) const = default;
  };
  struct ProfileHash {
    std::size_t operator()(const Profile& p) const {
      std::size_t h = 0;
      for (Cube c : p.reach) h = h * 1000003u ^ std::hash<Cube>{}(c);
      for (Cube c : p.acc) h = h * 998244353u ^ std::hash<Cube>{}(c);
      return h;
    }
  };

  Profile multiply(const Profile& x, const Profile& y) const {
    Profile r{std::vector<Cube>(n_, 0), std::vector<Cube>(n_, 0)};
    for (int q = 0; q < n_; ++q) {
      Cube m = x.reach[q];
      while (m) {
        int t = std::countr_zero(m);
        m &= m - 1;
        r.reach[q] |= y.reach[t];
        r.acc[q] |= y.acc[t];
      }
      m = x.acc[q];
      while (m) {
        int t = std::countr_zero(m);
        m &= m - 1;
        r.acc[q] |= y.reach[t];
      }
    }
    return r;
  }

  void compute_family(std::size_t cap) {
    const int ni = codec_.num_input_valuations();
    Cube accepting = 0;
    for (int q = 0; q < n_; ++q)
      if (nba_.accepting[q]) accepting |= Cube{1} << q;
    std::vector<Profile> letters;
    for (int e = 0; e < ni; ++e) {
      Profile p{std::vector<Cube>(n_, 0), std::vector<Cube>(n_, 0)};
      for (int q = 0; q < n_; ++q) {
        p.reach[q] = post_any_[q][e];
        p.acc[q] = ((accepting >> q) & 1) ? p.reach[q] : (p.reach[q] & accepting);
      }
      letters.push_back(std::move(p));
    }
    std::unordered_set<Profile, ProfileHash> seen(letters.begin(), letters.end());
    std::vector<Profile> monoid(seen.begin(), seen.end());
    for (std::size_t i = 0; i < monoid.size(); ++i)
      for (const auto& l : letters) {
        Profile next = multiply(monoid[i], l);
        if (seen.insert(next).second) {
          if (monoid.size() >= cap) throw ResourceLimit("transition monoid exceeds " + std::to_string(cap));
          monoid.push_back(std::move(next));
        }
      }
    std::set<Cube> family;
    std::vector<Cube> work;
    for (const auto& e : monoid) {
      if (!(multiply(e, e) == e)) continue;
      Cube loops = 0;
      for (int t = 0; t < n_; ++t)
        if ((e.acc[t] >> t) & 1) loops |= Cube{1} << t;
      Cube live = 0;
      for (int q = 0; q < n_; ++q)
        if (e.reach[q] & loops) live |= Cube{1} << q;
      if (live && family.insert(live).second) work.push_back(live);
    }
    while (!work.empty()) {
      Cube l = work.back();
      work.pop_back();
      for (int e = 0; e < ni; ++e) {
        Cube p = pre(l, e);
        if (p && family.insert(p).second) work.push_back(p);
      }
    }
    family_.assign(family.begin(), family.end());
  }

  Partition part_;
  LetterCodec codec_;
  Nba nba_;
  int n_ = 0;
  std::vector<std::vector<Cube>> post_any_;
  std::vector<std::vector<Cube>> post_val_;
  std::vector<Cube> family_;
};

inline BadPrefixVerdict is_bad_prefix(const Formula& f, const Partition& part, const OpenWord& w) {
  return BadPrefixDecider(f, part).verdict(w);
}

inline OpenWord shortest_bad_prefix(const Formula& f, const Partition& part, const OpenLasso& w) {
  return BadPrefixDecider(f, part).shortest_bad_prefix(w);
}

/// Same decision through explicit input-language automata: the cylinder of
/// w_I intersected with one condition automaton per (position, output).
/// Exponential in |w|; meant for cross-checking on short words.
inline bool is_bad_prefix_reference(const Formula& f, const Partition& part, const OpenWord& w,
                                    std::size_t cap = default_state_cap) {
  std::vector<InputValuation> inputs;
  for (const auto& l : w) inputs.push_back(l.input_valuation());
  std::vector<Nba> parts{input_cylinder(part, inputs)};
  for (std::size_t i = 0; i < w.size(); ++i)
    for (int p = 0; p < part.num_outputs(); ++p) {
      Tv3 v = w[i].outputs[p];
      if (v == Tv3::open) {
        parts.push_back(exists_lang(f, part, i, p, true, cap));
        parts.push_back(exists_lang(f, part, i, p, false, cap));
      } else {
        parts.push_back(forced_lang(f, part, i, p, v == Tv3::top, cap));
      }
    }
  // Every condition language already lies inside the model inputs.
  if (parts.size() == 1) parts.push_back(model_inputs(f, part, cap));
  return nba_intersection_is_empty(parts, cap);
}

}  // namespace skel
