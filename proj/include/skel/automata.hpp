#pragma once

// Explicit-alphabet automata kernel: alternating and nondeterministic Buchi
// automata, finite-word DFAs, safety automata, and the constructions between
// them. Letters are indices into an enumerated alphabet (see AlphabetSpec).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "skel/error.hpp"
#include "skel/ltl.hpp"
#include "skel/threeval.hpp"

namespace skel {

inline constexpr std::size_t default_state_cap = 1'000'000;

enum class AlphabetKind { concrete, open, input_only };

struct AlphabetSpec {
  AlphabetKind kind = AlphabetKind::concrete;
  int num_inputs = 0;
  int num_outputs = 0;

  static AlphabetSpec concrete(const Partition& p) {
    return {AlphabetKind::concrete, p.num_inputs(), p.num_outputs()};
  }
  static AlphabetSpec open(const Partition& p) { return {AlphabetKind::open, p.num_inputs(), p.num_outputs()}; }
  static AlphabetSpec inputs(const Partition& p) {
    return {AlphabetKind::input_only, p.num_inputs(), p.num_outputs()};
  }

  LetterCodec codec() const { return {num_inputs, num_outputs}; }

  int size() const {
    switch (kind) {
      case AlphabetKind::concrete: return codec().num_concrete_letters();
      case AlphabetKind::open: return codec().num_open_letters();
      case AlphabetKind::input_only: return codec().num_input_valuations();
    }
    return 0;
  }

  friend bool operator==(const AlphabetSpec&, const AlphabetSpec&) = default;
};

// ---------------------------------------------------------------------------
// Positive boolean formulas over at most 64 states, kept as a minimal DNF.

using Cube = std::uint64_t;

struct Dnf {
  std::vector<Cube> cubes;  // antichain; {} is false, {0} is true

  static Dnf tt() { return {{0}}; }
  static Dnf ff() { return {}; }
  static Dnf state(int q) { return {{Cube{1} << q}}; }

  bool is_false() const { return cubes.empty(); }
  bool is_true() const { return cubes.size() == 1 && cubes[0] == 0; }

  friend bool operator==(const Dnf&, const Dnf&) = default;
};

inline constexpr std::size_t dnf_cube_cap = 1 << 16;

inline void minimize(std::vector<Cube>& cs) {
  std::sort(cs.begin(), cs.end(), [](Cube a, Cube b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::vector<Cube> kept;
  for (Cube c : cs) {
    bool subsumed = false;
    for (Cube k : kept)
      if ((k & c) == k) {
        subsumed = true;
        break;
      }
    if (!subsumed) kept.push_back(c);
  }
  cs = std::move(kept);
}

inline Dnf operator|(const Dnf& a, const Dnf& b) {
  Dnf r = a;
  r.cubes.insert(r.cubes.end(), b.cubes.begin(), b.cubes.end());
  minimize(r.cubes);
  return r;
}

inline Dnf operator&(const Dnf& a, const Dnf& b) {
  Dnf r;
  for (Cube x : a.cubes)
    for (Cube y : b.cubes) r.cubes.push_back(x | y);
  if (r.cubes.size() > dnf_cube_cap) throw ResourceLimit("boolean formula size");
  minimize(r.cubes);
  return r;
}

/// Does the state set satisfy the formula?
inline bool satisfies(Cube set, const Dnf& d) {
  for (Cube c : d.cubes)
    if ((c & set) == c) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Automaton types

enum class Acceptance { buchi, co_buchi };

/// Alternating automaton; delta[q][letter] is a positive boolean formula.
struct Aba {
  AlphabetSpec alphabet;
  int initial = 0;
  std::vector<std::vector<Dnf>> delta;
  Cube accepting = 0;
  Acceptance acceptance = Acceptance::buchi;
  std::vector<std::string> names;

  int num_states() const { return static_cast<int>(delta.size()); }
  bool is_accepting(int q) const { return (accepting >> q) & 1; }
};

struct Edge {
  int letter;
  int to;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Nondeterministic Buchi automaton with a single initial state. Outgoing
/// edges of every state are kept sorted by (letter, target).
struct Nba {
  AlphabetSpec alphabet;
  int initial = 0;
  std::vector<std::vector<Edge>> out;
  std::vector<bool> accepting;

  int num_states() const { return static_cast<int>(out.size()); }

  int add_state(bool acc) {
    out.emplace_back();
    accepting.push_back(acc);
    return num_states() - 1;
  }

  void add_edge(int from, int letter, int to) { out[from].push_back({letter, to}); }

  void finalize() {
    for (auto& es : out) {
      std::sort(es.begin(), es.end());
      es.erase(std::unique(es.begin(), es.end()), es.end());
    }
  }

  template <class Fn>
  void for_successors(int q, int letter, Fn&& fn) const {
    const auto& es = out[q];
    auto it = std::lower_bound(es.begin(), es.end(), Edge{letter, -1});
    for (; it != es.end() && it->letter == letter; ++it) fn(it->to);
  }

  std::vector<int> successors(int q, int letter) const {
    std::vector<int> r;
    for_successors(q, letter, [&](int t) { r.push_back(t); });
    return r;
  }

  std::size_t num_edges() const {
    std::size_t n = 0;
    for (const auto& es : out) n += es.size();
    return n;
  }
};

/// Universal co-Buchi automaton: the dual reading of an NBA structure. A word
/// is accepted iff every run visits `rejecting` states finitely often.
struct Ucw {
  Nba structure;  // structure.accepting holds the rejecting set
};

/// Complete deterministic finite-word automaton.
struct Dfa {
  int num_letters = 0;
  int initial = 0;
  std::vector<std::vector<int>> delta;
  std::vector<bool> accepting;

  int num_states() const { return static_cast<int>(delta.size()); }

  int run(const std::vector<int>& word) const {
    int q = initial;
    for (int a : word) q = delta[q][a];
    return q;
  }
  bool accepts(const std::vector<int>& word) const { return accepting[run(word)]; }
};

/// Deterministic automaton, partial transition function, all runs accepting.
struct SafetyAutomaton {
  int num_letters = 0;
  int initial = 0;
  std::vector<std::vector<int>> delta;  // -1 marks a missing transition

  int num_states() const { return static_cast<int>(delta.size()); }

  bool accepts_prefix(const std::vector<int>& word) const {
    int q = initial;
    for (int a : word) {
      q = delta[q][a];
      if (q < 0) return false;
    }
    return true;
  }
};

/// Accepting lasso: stem·loop^ω with the visited states. states_stem[i] is
/// the state before reading stem[i]; states_loop[0] is the state after the stem.
struct LassoWitness {
  std::vector<int> stem;
  std::vector<int> loop;
  std::vector<int> stem_states;
  std::vector<int> loop_states;

  Lasso<int> word() const { return {stem, loop}; }
};

// ---------------------------------------------------------------------------
// Lasso search on explicit graphs (SCC based).

namespace detail {

struct Graph {
  int initial = 0;
  const std::vector<std::vector<Edge>>* out = nullptr;
  const std::vector<bool>* accepting = nullptr;
};

/// Tarjan SCCs of the part reachable from `root`. comp[v] = -1 when unreachable.
/// With root < 0 every vertex is a root.
inline std::vector<int> scc(const std::vector<std::vector<Edge>>& out, int root, int& num_comps) {
  const int n = static_cast<int>(out.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  struct Frame {
    int v;
    std::size_t next;
  };
  std::vector<Frame> call;
  int counter = 0;
  num_comps = 0;
  auto push = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    call.push_back({v, 0});
  };
  for (int r = root < 0 ? 0 : root; r < (root < 0 ? n : root + 1); ++r) {
  if (index[r] >= 0) continue;
  push(r);
  while (!call.empty()) {
    Frame& f = call.back();
    int v = f.v;
    if (f.next < out[v].size()) {
      int w = out[v][f.next++].to;
      if (index[w] < 0) {
        push(w);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
      continue;
    }
    if (low[v] == index[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = num_comps;
      } while (w != v);
      ++num_comps;
    }
    call.pop_back();
    if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
  }
  }
  return comp;
}

/// States (among those reachable from `root`, or all when root < 0) from
/// which an accepting state on a cycle is reachable.
inline std::vector<char> live_states(const std::vector<std::vector<Edge>>& out, const std::vector<bool>& acc,
                                     int root) {
  const int n = static_cast<int>(out.size());
  int nc = 0;
  auto comp = scc(out, root, nc);
  std::vector<char> good(nc, 0);
  for (int v = 0; v < n; ++v) {
    if (comp[v] < 0 || !acc[v]) continue;
    for (const auto& e : out[v])
      if (comp[e.to] == comp[v]) good[comp[v]] = 1;
  }
  std::vector<std::vector<int>> rev(n);
  for (int v = 0; v < n; ++v)
    if (comp[v] >= 0)
      for (const auto& e : out[v]) rev[e.to].push_back(v);
  std::vector<char> live(n, 0);
  std::vector<int> work;
  for (int v = 0; v < n; ++v)
    if (comp[v] >= 0 && acc[v] && good[comp[v]]) {
      live[v] = 1;
      work.push_back(v);
    }
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    for (int u : rev[v])
      if (!live[u]) {
        live[u] = 1;
        work.push_back(u);
      }
  }
  return live;
}

/// Shortest path (BFS) from `from` to any state satisfying `goal`, using only
/// edges whose target passes `allowed`. Requires at least `min_steps` edges.
template <class Goal, class Allowed>
bool bfs_path(const std::vector<std::vector<Edge>>& out, int from, Goal goal, Allowed allowed,
              bool at_least_one_step, std::vector<int>& letters, std::vector<int>& states) {
  letters.clear();
  states.clear();
  if (!at_least_one_step && goal(from)) return true;
  const int n = static_cast<int>(out.size());
  std::vector<int> parent(n, -2), parent_letter(n, -1);
  std::deque<int> q;
  q.push_back(from);
  std::vector<char> seen(n, 0);
  seen[from] = 1;
  int found = -1;
  // With at_least_one_step the origin itself may be the goal after a cycle.
  while (!q.empty() && found < 0) {
    int v = q.front();
    q.pop_front();
    for (const auto& e : out[v]) {
      if (!allowed(e.to)) continue;
      if (goal(e.to)) {
        found = e.to;
        if (found == from) {
          // Cycle back to origin: reconstruct v's path and append the edge.
          std::vector<int> ls, ss;
          for (int x = v; x != from; x = parent[x]) {
            ls.push_back(parent_letter[x]);
            ss.push_back(parent[x]);
          }
          std::reverse(ls.begin(), ls.end());
          std::reverse(ss.begin(), ss.end());
          ls.push_back(e.letter);
          ss.push_back(v);
          letters = ls;
          states = ss;
          return true;
        }
        parent[e.to] = v;
        parent_letter[e.to] = e.letter;
        break;
      }
      if (!seen[e.to]) {
        seen[e.to] = 1;
        parent[e.to] = v;
        parent_letter[e.to] = e.letter;
        q.push_back(e.to);
      }
    }
  }
  if (found < 0) return false;
  for (int x = found; x != from; x = parent[x]) {
    letters.push_back(parent_letter[x]);
    states.push_back(parent[x]);
  }
  std::reverse(letters.begin(), letters.end());
  std::reverse(states.begin(), states.end());
  return true;
}

inline std::optional<LassoWitness> find_lasso(const std::vector<std::vector<Edge>>& out,
                                              const std::vector<bool>& accepting, int initial) {
  if (out.empty()) return std::nullopt;
  int nc = 0;
  auto comp = scc(out, initial, nc);
  const int n = static_cast<int>(out.size());
  std::vector<char> nontrivial(nc, 0);
  for (int v = 0; v < n; ++v) {
    if (comp[v] < 0) continue;
    for (const auto& e : out[v])
      if (comp[e.to] == comp[v]) nontrivial[comp[v]] = 1;
  }
  int target = -1;
  for (int v = 0; v < n && target < 0; ++v)
    if (comp[v] >= 0 && accepting[v] && nontrivial[comp[v]]) target = v;
  if (target < 0) return std::nullopt;
  LassoWitness w;
  bfs_path(
      out, initial, [&](int v) { return v == target; }, [](int) { return true; }, false, w.stem,
      w.stem_states);
  int c = comp[target];
  bfs_path(
      out, target, [&](int v) { return v == target; }, [&](int v) { return comp[v] == c; }, true,
      w.loop, w.loop_states);
  return w;
}

/// Explores the graph reachable from `init` under `succ(state, emit(letter, state))`.
template <class State, class Hash, class Succ, class Acc>
struct ImplicitGraph {
  std::vector<State> states;
  std::vector<std::vector<Edge>> out;
  std::vector<bool> accepting;
};

template <class State, class Hash = std::hash<State>, class Succ, class Acc>
ImplicitGraph<State, Hash, Succ, Acc> explore(const State& init, Succ succ, Acc acc,
                                              std::size_t cap = default_state_cap) {
  ImplicitGraph<State, Hash, Succ, Acc> g;
  std::unordered_map<State, int, Hash> ids;
  auto id_of = [&](const State& s) {
    auto [it, fresh] = ids.emplace(s, static_cast<int>(g.states.size()));
    if (fresh) {
      if (g.states.size() >= cap) throw ResourceLimit("state cap of " + std::to_string(cap));
      g.states.push_back(s);
      g.out.emplace_back();
      g.accepting.push_back(acc(s));
    }
    return it->second;
  };
  id_of(init);
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    State s = g.states[i];
    std::vector<Edge> edges;
    succ(s, [&](int letter, const State& t) { edges.push_back({letter, id_of(t)}); });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.out[i] = std::move(edges);
  }
  return g;
}

struct PairHash {
  template <class A, class B>
  std::size_t operator()(const std::pair<A, B>& p) const {
    std::size_t h = std::hash<A>{}(p.first);
    return h ^ (std::hash<B>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

struct VectorHash {
  template <class T>
  std::size_t operator()(const std::vector<T>& v) const {
    std::size_t h = v.size();
    for (const auto& x : v) h ^= std::hash<T>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

template <class G>
Nba to_nba(G&& g, const AlphabetSpec& alphabet) {
  Nba n;
  n.alphabet = alphabet;
  n.initial = 0;
  n.out = std::move(g.out);
  n.accepting = std::move(g.accepting);
  return n;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// LTL -> alternating Buchi automaton

namespace detail {

inline std::string formula_key(const Formula& f) {
  std::string k = std::to_string(static_cast<int>(f.op()));
  if (f.op() == Op::atom) k += ":" + std::to_string(f.atom_index());
  if (f.is_unary() || f.is_binary()) k += "(" + formula_key(f.lhs());
  if (f.is_binary()) k += "," + formula_key(f.rhs());
  if (f.is_unary() || f.is_binary()) k += ")";
  return k;
}

class AbaBuilder {
 public:
  explicit AbaBuilder(const Partition& part) : part_(part) {}

  Aba build(const Formula& nnf) {
    Aba a;
    a.alphabet = AlphabetSpec::concrete(part_);
    a.acceptance = Acceptance::buchi;
    a.initial = state_of(nnf);
    const int letters = a.alphabet.size();
    for (std::size_t q = 0; q < formulas_.size(); ++q) {
      const Formula f = formulas_[q];  // expand() may grow formulas_
      std::vector<Dnf> row;
      row.reserve(letters);
      for (int c = 0; c < letters; ++c) row.push_back(expand(f, static_cast<unsigned>(c)));
      a.delta.push_back(std::move(row));
      if (formulas_[q].op() == Op::release) a.accepting |= Cube{1} << q;
      a.names.push_back(to_string(formulas_[q], part_));
    }
    return a;
  }

 private:
  int state_of(const Formula& f) {
    auto key = formula_key(f);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (formulas_.size() >= 64) throw ResourceLimit("alternating automaton exceeds 64 states");
    int id = static_cast<int>(formulas_.size());
    ids_.emplace(key, id);
    formulas_.push_back(f);
    return id;
  }

  Dnf expand(const Formula& f, unsigned letter) {
    switch (f.op()) {
      case Op::atom: return ((letter >> f.atom_index()) & 1) ? Dnf::tt() : Dnf::ff();
      case Op::not_: return ((letter >> f.lhs().atom_index()) & 1) ? Dnf::ff() : Dnf::tt();
      case Op::tt: return Dnf::tt();
      case Op::ff: return Dnf::ff();
      case Op::and_: return expand(f.lhs(), letter) & expand(f.rhs(), letter);
      case Op::or_: return expand(f.lhs(), letter) | expand(f.rhs(), letter);
      case Op::next: return Dnf::state(state_of(f.lhs()));
      case Op::until:
        return expand(f.rhs(), letter) | (expand(f.lhs(), letter) & Dnf::state(state_of(f)));
      case Op::release:
        return expand(f.rhs(), letter) & (expand(f.lhs(), letter) | Dnf::state(state_of(f)));
      default: throw Error("formula not in negation normal form");
    }
  }

  const Partition& part_;
  std::vector<Formula> formulas_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace detail

/// Alternating Buchi automaton over 2^AP for an NNF formula. States are the
/// formula itself plus its temporal subformulas; release states accept.
inline Aba ltl_to_aba(const Formula& nnf, const Partition& part) {
  if (!is_nnf(nnf)) throw Error("ltl_to_aba expects a formula in negation normal form");
  return detail::AbaBuilder(part).build(nnf);
}

// ---------------------------------------------------------------------------
// Breakpoint (Miyano-Hayashi) construction: ABA (Buchi) -> NBA

namespace detail {

inline Dnf conjunction_over(Cube set, const Aba& a, int letter) {
  Dnf d = Dnf::tt();
  while (set && !d.is_false()) {
    int q = std::countr_zero(set);
    set &= set - 1;
    d = d & a.delta[q][letter];
  }
  return d;
}

}  // namespace detail

/// Successors of a breakpoint state (S, O) of `a` on `letter`.
template <class Emit>
void breakpoint_successors(const Aba& a, Cube S, Cube O, int letter, Emit&& emit) {
  if (O == 0) {
    Dnf all = detail::conjunction_over(S, a, letter);
    for (Cube s : all.cubes) emit(s, s & ~a.accepting);
    return;
  }
  Dnf from_o = detail::conjunction_over(O, a, letter);
  if (from_o.is_false()) return;
  Dnf rest = detail::conjunction_over(S & ~O, a, letter);
  for (Cube x : from_o.cubes)
    for (Cube y : rest.cubes) emit(x | y, x & ~a.accepting);
}

inline Nba aba_to_nba(const Aba& a, std::size_t cap = default_state_cap) {
  if (a.acceptance != Acceptance::buchi) throw Error("aba_to_nba expects Buchi acceptance");
  using S = std::pair<Cube, Cube>;
  const int letters = a.alphabet.size();
  auto g = detail::explore<S, detail::PairHash>(
      S{Cube{1} << a.initial, 0},
      [&](const S& s, auto&& emit) {
        for (int l = 0; l < letters; ++l)
          breakpoint_successors(a, s.first, s.second, l,
                                [&](Cube s2, Cube o2) { emit(l, S{s2, o2}); });
      },
      [](const S& s) { return s.second == 0; }, cap);
  return detail::to_nba(g, a.alphabet);
}

// ---------------------------------------------------------------------------
// NBA utilities

/// Drops unreachable states and states without an accepting continuation,
/// then merges bisimilar states. Language preserving.
inline Nba reduce(const Nba& a) {
  const int n = a.num_states();
  if (n == 0) return a;
  auto live = detail::live_states(a.out, a.accepting, a.initial);
  Nba r;
  r.alphabet = a.alphabet;
  if (!live[a.initial]) {
    r.add_state(false);
    return r;
  }
  // Bisimulation quotient by signature refinement.
  std::vector<int> block(n, -1);
  for (int v = 0; v < n; ++v)
    if (live[v]) block[v] = a.accepting[v] ? 1 : 0;
  int num_blocks = 0;
  while (true) {
    std::map<std::pair<int, std::vector<Edge>>, int> sig_ids;
    std::vector<int> next(n, -1);
    for (int v = 0; v < n; ++v) {
      if (!live[v]) continue;
      std::vector<Edge> sig;
      for (const auto& e : a.out[v])
        if (live[e.to]) sig.push_back({e.letter, block[e.to]});
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto key = std::make_pair(block[v], std::move(sig));
      auto [it, fresh] = sig_ids.emplace(std::move(key), static_cast<int>(sig_ids.size()));
      next[v] = it->second;
    }
    int count = static_cast<int>(sig_ids.size());
    block = std::move(next);
    if (count == num_blocks) break;
    num_blocks = count;
  }
  // Renumber with the initial block first, in BFS order.
  std::vector<int> rename(num_blocks, -1);
  std::vector<int> rep(num_blocks, -1);
  for (int v = 0; v < n; ++v)
    if (live[v] && rep[block[v]] < 0) rep[block[v]] = v;
  std::deque<int> order{block[a.initial]};
  rename[block[a.initial]] = 0;
  int next_id = 1;
  std::vector<int> bfs;
  while (!order.empty()) {
    int b = order.front();
    order.pop_front();
    bfs.push_back(b);
    for (const auto& e : a.out[rep[b]])
      if (live[e.to] && rename[block[e.to]] < 0) {
        rename[block[e.to]] = next_id++;
        order.push_back(block[e.to]);
      }
  }
  for (int b : bfs) r.add_state(a.accepting[rep[b]]);
  for (int b : bfs)
    for (const auto& e : a.out[rep[b]])
      if (live[e.to]) r.add_edge(rename[b], e.letter, rename[block[e.to]]);
  r.initial = 0;
  r.finalize();
  return r;
}

inline Nba ltl_to_nba(const Formula& f, const Partition& part, std::size_t cap = default_state_cap) {
  return reduce(aba_to_nba(ltl_to_aba(to_nnf(f), part), cap));
}

/// Universal co-Buchi automaton with L = L(f): the dual of an NBA for !f.
inline Ucw ltl_to_ucw(const Formula& f, const Partition& part, std::size_t cap = default_state_cap) {
  return {ltl_to_nba(!f, part, cap)};
}

inline Nba nba_product(const Nba& a, const Nba& b, std::size_t cap = default_state_cap) {
  if (!(a.alphabet == b.alphabet)) throw AlphabetMismatch();
  struct S {
    int p, q, flag;
    bool operator==(const S&) const = default;
  };
  struct H {
    std::size_t operator()(const S& s) const {
      return (static_cast<std::size_t>(s.p) * 1000003u + s.q) * 2 + s.flag;
    }
  };
  auto g = detail::explore<S, H>(
      S{a.initial, b.initial, 0},
      [&](const S& s, auto&& emit) {
        int flag = s.flag;
        if (flag == 0 && a.accepting[s.p]) flag = 1;
        else if (flag == 1 && b.accepting[s.q]) flag = 0;
        const auto& ea = a.out[s.p];
        const auto& eb = b.out[s.q];
        std::size_t j = 0;
        for (const auto& x : ea) {
          while (j < eb.size() && eb[j].letter < x.letter) ++j;
          for (std::size_t k = j; k < eb.size() && eb[k].letter == x.letter; ++k)
            emit(x.letter, S{x.to, eb[k].to, flag});
        }
      },
      [&](const S& s) { return s.flag == 1 && b.accepting[s.q]; }, cap);
  return detail::to_nba(g, a.alphabet);
}

/// Disjunction: fresh initial state taking the initial moves of both.
inline Nba nba_union(const Nba& a, const Nba& b) {
  if (!(a.alphabet == b.alphabet)) throw AlphabetMismatch();
  Nba r;
  r.alphabet = a.alphabet;
  r.add_state(false);
  const int off_a = 1, off_b = 1 + a.num_states();
  for (int q = 0; q < a.num_states(); ++q) r.add_state(a.accepting[q]);
  for (int q = 0; q < b.num_states(); ++q) r.add_state(b.accepting[q]);
  for (int q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.out[q]) r.add_edge(off_a + q, e.letter, off_a + e.to);
  for (int q = 0; q < b.num_states(); ++q)
    for (const auto& e : b.out[q]) r.add_edge(off_b + q, e.letter, off_b + e.to);
  for (const auto& e : a.out[a.initial]) r.add_edge(0, e.letter, off_a + e.to);
  for (const auto& e : b.out[b.initial]) r.add_edge(0, e.letter, off_b + e.to);
  r.finalize();
  return r;
}

/// Existential projection of a 2^AP automaton onto 2^I.
inline Nba project_inputs(const Nba& a) {
  if (a.alphabet.kind != AlphabetKind::concrete) throw AlphabetMismatch();
  LetterCodec codec = a.alphabet.codec();
  Nba r = a;
  r.alphabet.kind = AlphabetKind::input_only;
  for (auto& es : r.out)
    for (auto& e : es) e.letter = static_cast<int>(codec.input_of_concrete(e.letter));
  r.finalize();
  return r;
}

inline std::optional<LassoWitness> nba_emptiness(const Nba& a) {
  if (a.num_states() == 0) return std::nullopt;
  return detail::find_lasso(a.out, a.accepting, a.initial);
}

inline bool nba_is_empty(const Nba& a) { return !nba_emptiness(a).has_value(); }

/// Emptiness of the intersection of several automata over one alphabet,
/// explored lazily. The last key entry counts which automaton must accept next.
inline bool nba_intersection_is_empty(const std::vector<Nba>& parts, std::size_t cap = default_state_cap) {
  if (parts.empty()) throw Error("empty intersection");
  for (const auto& p : parts)
    if (!(p.alphabet == parts[0].alphabet)) throw AlphabetMismatch();
  const int k = static_cast<int>(parts.size());
  const int letters = parts[0].alphabet.size();
  using K = std::vector<int>;
  K init(k + 1, 0);
  for (int j = 0; j < k; ++j) init[j] = parts[j].initial;
  auto g = detail::explore<K, detail::VectorHash>(
      init,
      [&](const K& s, auto&& emit) {
        int c = s[k];
        while (c < k && parts[c].accepting[s[c]]) ++c;
        if (c == k) c = 0;
        K t(k + 1);
        t[k] = c;
        for (int l = 0; l < letters; ++l) {
          std::function<void(int)> rec = [&](int j) {
            if (j == k) {
              emit(l, t);
              return;
            }
            parts[j].for_successors(s[j], l, [&](int q) {
              t[j] = q;
              rec(j + 1);
            });
          };
          rec(0);
        }
      },
      [&](const K& s) {
        int c = s[k];
        while (c < k && parts[c].accepting[s[c]]) ++c;
        return c == k;
      },
      cap);
  return !detail::find_lasso(g.out, g.accepting, 0).has_value();
}

/// Is stem·loop^ω (letter indices) accepted?
inline bool nba_membership(const Nba& a, const Lasso<int>& w) {
  if (w.loop.empty()) throw Error("lasso with empty loop");
  const int len = static_cast<int>(w.span());
  const int stem = static_cast<int>(w.stem.size());
  const int size = a.alphabet.size();
  auto letter = [&](int pos) { return pos < stem ? w.stem[pos] : w.loop[pos - stem]; };
  for (int pos = 0; pos < len; ++pos)
    if (letter(pos) < 0 || letter(pos) >= size) throw AlphabetMismatch();
  using S = std::pair<int, int>;
  auto g = detail::explore<S, detail::PairHash>(
      S{a.initial, 0},
      [&](const S& s, auto&& emit) {
        int next = s.second + 1 == len ? stem : s.second + 1;
        a.for_successors(s.first, letter(s.second), [&](int t) { emit(0, S{t, next}); });
      },
      [&](const S& s) { return bool(a.accepting[s.first]); });
  return detail::find_lasso(g.out, g.accepting, 0).has_value();
}

inline bool ucw_membership(const Ucw& u, const Lasso<int>& w) { return !nba_membership(u.structure, w); }

/// Does replaying the witness through `a` follow real transitions?
inline bool replay_valid(const Nba& a, const LassoWitness& w) {
  if (w.loop.empty() || w.stem.size() != w.stem_states.size() ||
      w.loop.size() != w.loop_states.size())
    return false;
  int q = a.initial;
  auto step = [&](int from, int letter, int to) {
    auto s = a.successors(from, letter);
    return std::find(s.begin(), s.end(), to) != s.end();
  };
  for (std::size_t i = 0; i < w.stem.size(); ++i) {
    if (w.stem_states[i] != q) return false;
    int nxt = i + 1 < w.stem.size() ? w.stem_states[i + 1] : w.loop_states[0];
    if (!step(q, w.stem[i], nxt)) return false;
    q = nxt;
  }
  if (w.loop_states[0] != q) return false;
  bool acc = false;
  for (std::size_t i = 0; i < w.loop.size(); ++i) {
    int from = w.loop_states[i];
    int to = i + 1 < w.loop.size() ? w.loop_states[i + 1] : w.loop_states[0];
    if (!step(from, w.loop[i], to)) return false;
    acc = acc || a.accepting[from];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Complementation through transition profiles.
//
// A profile records, for a finite word, which states reach which and which of
// those paths visit an accepting state. A word is rejected iff it factors as
// u v1 v2 ... where all v_i share an idempotent profile e, and no state
// reachable after u (pushed through e) loops through an accepting state under
// e. The complement guesses u with a subset construction and then checks the
// segments against e.

namespace detail {

struct Profile {
  std::vector<Cube> reach, acc;
  bool operator==(const Profile&) const = default;
};

struct ProfileHash {
  std::size_t operator()(const Profile& p) const {
    std::size_t h = 0;
    for (Cube c : p.reach) h = h * 1000003u ^ c;
    for (Cube c : p.acc) h = h * 999983u ^ c;
    return h;
  }
};

class Complementer {
 public:
  Complementer(const Nba& a, std::size_t cap) : a_(a), n_(a.num_states()), cap_(cap) {
    letters_ = a.alphabet.size();
    for (int q = 0; q < n_; ++q)
      if (a.accepting[q]) final_ |= Cube{1} << q;
    build_monoid();
  }

  Nba run() {
    // Phase 1 keys are {-1, subset}; phase 2 keys are {e, y} with y = -1 at a
    // segment boundary.
    using K = std::pair<std::int64_t, std::int64_t>;
    auto g = explore<K, PairHash>(
        K{-1, static_cast<std::int64_t>(Cube{1} << a_.initial)},
        [&](const K& k, auto&& emit) {
          for (int l = 0; l < letters_; ++l) {
            const int first = letter_elem_[l];
            if (k.first < 0) {
              Cube s = static_cast<Cube>(k.second);
              emit(l, K{-1, static_cast<std::int64_t>(post(letter_profile(l), s))});
              for (int e : idempotents_)
                if (rejecting(s, e)) enter(e, first, l, emit);
            } else {
              const int e = static_cast<int>(k.first);
              const int y = static_cast<int>(k.second);
              enter(e, y < 0 ? first : right_[y][l], l, emit);
            }
          }
        },
        [](const K& k) { return k.first >= 0 && k.second < 0; }, cap_);
    return to_nba(g, a_.alphabet);
  }

  std::size_t monoid_size() const { return elems_.size(); }

 private:
  template <class Emit>
  void enter(int e, int y, int l, Emit&& emit) const {
    using K = std::pair<std::int64_t, std::int64_t>;
    emit(l, K{e, y});
    if (y == e) emit(l, K{e, -1});
  }

  const Profile& letter_profile(int l) const { return elems_[letter_elem_[l]]; }

  Cube post(const Profile& p, Cube s) const {
    Cube r = 0;
    while (s) {
      int q = std::countr_zero(s);
      s &= s - 1;
      r |= p.reach[q];
    }
    return r;
  }

  bool rejecting(Cube s, int e) const {
    const Profile& p = elems_[e];
    Cube t = post(p, s);
    while (t) {
      int q = std::countr_zero(t);
      t &= t - 1;
      if ((p.acc[q] >> q) & 1) return false;
    }
    return true;
  }

  Profile multiply(const Profile& x, const Profile& y) const {
    Profile r{std::vector<Cube>(n_, 0), std::vector<Cube>(n_, 0)};
    for (int q = 0; q < n_; ++q) {
      Cube m = x.reach[q];
      while (m) {
        int t = std::countr_zero(m);
        m &= m - 1;
        r.reach[q] |= y.reach[t];
        r.acc[q] |= y.acc[t];
        if ((x.acc[q] >> t) & 1) r.acc[q] |= y.reach[t];
      }
    }
    return r;
  }

  void build_monoid() {
    std::unordered_map<Profile, int, ProfileHash> ids;
    auto id_of = [&](Profile p) {
      auto [it, fresh] = ids.emplace(p, static_cast<int>(elems_.size()));
      if (fresh) {
        if (elems_.size() >= cap_) throw ResourceLimit("profile monoid cap of " + std::to_string(cap_));
        elems_.push_back(std::move(p));
      }
      return it->second;
    };
    for (int l = 0; l < letters_; ++l) {
      Profile p{std::vector<Cube>(n_, 0), std::vector<Cube>(n_, 0)};
      for (int q = 0; q < n_; ++q) {
        for (const auto& e : a_.out[q])
          if (e.letter == l) p.reach[q] |= Cube{1} << e.to;
        p.acc[q] = ((final_ >> q) & 1) ? p.reach[q] : (p.reach[q] & final_);
      }
      letter_elem_.push_back(id_of(std::move(p)));
    }
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      std::vector<int> row(letters_);
      for (int l = 0; l < letters_; ++l) row[l] = id_of(multiply(elems_[i], letter_profile(l)));
      right_.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < elems_.size(); ++i)
      if (multiply(elems_[i], elems_[i]) == elems_[i]) idempotents_.push_back(static_cast<int>(i));
  }

  const Nba& a_;
  int n_;
  std::size_t cap_;
  int letters_ = 0;
  Cube final_ = 0;
  std::vector<Profile> elems_;
  std::vector<int> letter_elem_;
  std::vector<std::vector<int>> right_;
  std::vector<int> idempotents_;
};

}  // namespace detail

inline Nba nba_complement(const Nba& input, std::size_t cap = default_state_cap) {
  Nba a = reduce(input);
  if (a.num_states() > 63) throw ResourceLimit("complementation of more than 63 states");
  return reduce(detail::Complementer(a, cap).run());
}

// ---------------------------------------------------------------------------
// DOT export

inline std::string to_dot(const Nba& a, const std::function<std::string(int)>& letter_name,
                          const std::string& name = "nba") {
  std::ostringstream os;
  os << "digraph " << name << " {\n  node [shape=circle];\n  init [shape=point];\n";
  os << "  init -> q" << a.initial << ";\n";
  for (int q = 0; q < a.num_states(); ++q)
    os << "  q" << q << " [label=\"" << q << "\"" << (a.accepting[q] ? ", shape=doublecircle" : "")
       << "];\n";
  for (int q = 0; q < a.num_states(); ++q) {
    std::map<int, std::vector<int>> by_target;
    for (const auto& e : a.out[q]) by_target[e.to].push_back(e.letter);
    for (const auto& [t, ls] : by_target) {
      os << "  q" << q << " -> q" << t << " [label=\"";
      for (std::size_t i = 0; i < ls.size(); ++i) os << (i ? "\\n" : "") << letter_name(ls[i]);
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

inline std::string to_dot(const Aba& a) {
  std::ostringstream os;
  os << "digraph aba {\n  node [shape=box];\n";
  for (int q = 0; q < a.num_states(); ++q)
    os << "  q" << q << " [label=\"" << (q < static_cast<int>(a.names.size()) ? a.names[q] : "")
       << "\"" << (a.is_accepting(q) ? ", peripheries=2" : "") << "];\n";
  os << "}\n";
  return os.str();
}

inline std::string to_dot(const Dfa& d) {
  std::ostringstream os;
  os << "digraph dfa {\n  node [shape=circle];\n  init [shape=point];\n  init -> q" << d.initial
     << ";\n";
  for (int q = 0; q < d.num_states(); ++q) {
    if (d.accepting[q]) os << "  q" << q << " [shape=doublecircle];\n";
    std::map<int, std::vector<int>> by_target;
    for (int l = 0; l < d.num_letters; ++l) by_target[d.delta[q][l]].push_back(l);
    for (const auto& [t, ls] : by_target) os << "  q" << q << " -> q" << t << " [label=\"" << ls.size() << " letters\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace skel
