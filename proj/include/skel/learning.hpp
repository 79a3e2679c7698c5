#pragma once

// Learning the minimal skeleton of a formula: an L* learner over open letters
// whose target is the bad-prefix language of min(f), and a teacher that
// answers equivalence queries by repairing and model checking conjectures.

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "skel/automata.hpp"
#include "skel/membership.hpp"
#include "skel/minlang.hpp"
#include "skel/oracle.hpp"
#include "skel/skeleton.hpp"

namespace skel {

using Word = std::vector<int>;

inline Word concat(Word u, const Word& v) {
  u.insert(u.end(), v.begin(), v.end());
  return u;
}

// ---------------------------------------------------------------------------
// Observation table

class ObservationTable {
 public:
  using Member = std::function<bool(const Word&)>;

  /// `alphabet` lists the letters in enumeration order.
  ObservationTable(std::vector<int> alphabet, Member member)
      : alphabet_(std::move(alphabet)), member_(std::move(member)) {
    add_prefix({});
    suffixes_.push_back({});
  }

  const std::vector<Word>& prefixes() const { return prefixes_; }
  const std::vector<Word>& suffixes() const { return suffixes_; }

  std::vector<bool> row(const Word& s) const {
    std::vector<bool> r;
    r.reserve(suffixes_.size());
    for (const auto& e : suffixes_) r.push_back(member_(concat(s, e)));
    return r;
  }

  /// A prefix extension whose row matches no prefix row, if any.
  std::optional<Word> unclosed() const {
    std::set<std::vector<bool>> rows;
    for (const auto& s : prefixes_) rows.insert(row(s));
    for (const auto& s : prefixes_)
      for (int a : alphabet_) {
        Word sa = concat(s, {a});
        if (!rows.count(row(sa))) return sa;
      }
    return std::nullopt;
  }

  /// A suffix a·e separating two prefixes with equal rows, if any.
  std::optional<Word> inconsistency() const {
    for (std::size_t i = 0; i < prefixes_.size(); ++i)
      for (std::size_t j = i + 1; j < prefixes_.size(); ++j) {
        if (row(prefixes_[i]) != row(prefixes_[j])) continue;
        for (int a : alphabet_)
          for (const auto& e : suffixes_) {
            Word ae = concat({a}, e);
            if (member_(concat(prefixes_[i], ae)) != member_(concat(prefixes_[j], ae))) return ae;
          }
      }
    return std::nullopt;
  }

  void close_and_make_consistent() {
    for (;;) {
      if (auto sa = unclosed()) {
        add_prefix(*sa);
        continue;
      }
      if (auto ae = inconsistency()) {
        suffixes_.push_back(*ae);
        continue;
      }
      return;
    }
  }

  /// Angluin's handling: every prefix of w joins the access words.
  void add_counterexample(const Word& w) {
    for (std::size_t k = 0; k <= w.size(); ++k) add_prefix(Word(w.begin(), w.begin() + static_cast<long>(k)));
  }

  /// DFA of a closed and consistent table. Accepting states are rows whose
  /// empty-suffix entry is true.
  Dfa conjecture(int num_letters) const {
    std::map<std::vector<bool>, int> ids;
    Dfa d;
    d.num_letters = num_letters;
    std::vector<Word> reps;
    for (const auto& s : prefixes_) {
      auto r = row(s);
      if (ids.emplace(r, static_cast<int>(reps.size())).second) {
        reps.push_back(s);
        d.accepting.push_back(r[0]);
      }
    }
    d.delta.assign(reps.size(), std::vector<int>(num_letters, -1));
    for (std::size_t q = 0; q < reps.size(); ++q)
      for (int a : alphabet_) {
        auto it = ids.find(row(concat(reps[q], {a})));
        if (it == ids.end()) throw Error("conjecture requested from an unclosed table");
        d.delta[q][a] = it->second;
      }
    d.initial = ids.at(row({}));
    return d;
  }

 private:
  void add_prefix(Word s) {
    if (prefix_set_.insert(s).second) prefixes_.push_back(std::move(s));
  }

  std::vector<int> alphabet_;
  Member member_;
  std::vector<Word> prefixes_;
  std::set<Word> prefix_set_;
  std::vector<Word> suffixes_;
};

// ---------------------------------------------------------------------------
// From bad-prefix DFAs to skeletons

/// Safety automaton of a bad-prefix DFA. `origin` maps its states back to
/// DFA states; `pruned` lists the non-accepting DFA states removed because
/// every continuation from them was eventually bad.
struct SafetyConversion {
  SafetyAutomaton automaton;
  std::vector<int> origin;
  std::vector<int> pruned;
};

namespace detail {

/// Kept DFA states after deleting accepting states and then, to a fixpoint,
/// states left without kept successors. Fills `pruned` in removal order.
inline std::vector<bool> prune(const Dfa& b, std::vector<int>& pruned) {
  const int n = b.num_states();
  std::vector<bool> kept(n);
  for (int q = 0; q < n; ++q) kept[q] = !b.accepting[q];
  for (bool changed = true; changed;) {
    changed = false;
    for (int q = 0; q < n; ++q) {
      if (!kept[q]) continue;
      if (std::none_of(b.delta[q].begin(), b.delta[q].end(), [&](int t) { return bool(kept[t]); })) {
        kept[q] = false;
        pruned.push_back(q);
        changed = true;
      }
    }
  }
  return kept;
}

/// Shortest access word of every state, letters tried in `order`; empty
/// optional for unreachable states.
inline std::vector<std::optional<Word>> access_words(const Dfa& b, const std::vector<int>& order) {
  std::vector<std::optional<Word>> acc(b.num_states());
  std::queue<int> work;
  acc[b.initial] = Word{};
  work.push(b.initial);
  while (!work.empty()) {
    int q = work.front();
    work.pop();
    for (int a : order) {
      int t = b.delta[q][a];
      if (acc[t]) continue;
      acc[t] = concat(*acc[q], {a});
      work.push(t);
    }
  }
  return acc;
}

}  // namespace detail

inline SafetyConversion conjecture_to_safety(const Dfa& b) {
  SafetyConversion r;
  auto kept = detail::prune(b, r.pruned);
  if (!kept[b.initial]) throw EmptySafety();
  std::vector<int> id(b.num_states(), -1);
  std::queue<int> work;
  auto visit = [&](int q) {
    if (id[q] >= 0) return;
    id[q] = static_cast<int>(r.origin.size());
    r.origin.push_back(q);
    work.push(q);
  };
  visit(b.initial);
  while (!work.empty()) {
    int q = work.front();
    work.pop();
    for (int a = 0; a < b.num_letters; ++a)
      if (kept[b.delta[q][a]]) visit(b.delta[q][a]);
  }
  auto& s = r.automaton;
  s.num_letters = b.num_letters;
  s.initial = 0;
  s.delta.assign(r.origin.size(), std::vector<int>(b.num_letters, -1));
  for (std::size_t k = 0; k < r.origin.size(); ++k)
    for (int a = 0; a < b.num_letters; ++a) {
      int t = b.delta[r.origin[k]][a];
      if (kept[t]) s.delta[k][a] = id[t];
    }
  return r;
}

struct OutputInconsistency {
  int state;
  int first, second;  // open letters with different output parts
};

inline std::optional<OutputInconsistency> check_output_consistency(const SafetyAutomaton& a,
                                                                   const LetterCodec& codec) {
  const int ni = codec.num_input_valuations();
  for (int q = 0; q < a.num_states(); ++q) {
    int first = -1;
    for (int l = 0; l < a.num_letters; ++l) {
      if (a.delta[q][l] < 0) continue;
      if (first < 0) first = l;
      else if (l / ni != first / ni) return OutputInconsistency{q, first, l};
    }
  }
  return std::nullopt;
}

/// First state and input valuation without an outgoing transition.
inline std::optional<std::pair<int, InputValuation>> find_input_gap(const SafetyAutomaton& a,
                                                                    const LetterCodec& codec) {
  const int ni = codec.num_input_valuations();
  for (int q = 0; q < a.num_states(); ++q)
    for (int e = 0; e < ni; ++e) {
      bool found = false;
      for (int l = e; l < a.num_letters && !found; l += ni) found = a.delta[q][l] >= 0;
      if (!found) return std::make_pair(q, static_cast<InputValuation>(e));
    }
  return std::nullopt;
}

/// Reads an output-consistent, input-complete safety automaton as a skeleton.
inline Skeleton safety_to_skeleton(const SafetyAutomaton& a, const Partition& part) {
  LetterCodec codec(part);
  if (a.num_letters != codec.num_open_letters()) throw AlphabetMismatch();
  if (auto bad = check_output_consistency(a, codec))
    throw Error("state " + std::to_string(bad->state) + " is not output consistent");
  if (auto gap = find_input_gap(a, codec)) throw InputIncomplete(gap->first, gap->second);
  const int ni = codec.num_input_valuations();
  Skeleton s;
  s.part = part;
  for (int q = 0; q < a.num_states(); ++q) {
    int l = 0;
    while (a.delta[q][l] < 0) ++l;
    s.add_state(codec.open_letter(l).outputs);
  }
  for (int q = 0; q < a.num_states(); ++q)
    for (int l = 0; l < a.num_letters; ++l)
      if (a.delta[q][l] >= 0) s.next[q][l % ni] = a.delta[q][l];
  s.initial = a.initial;
  return s.trimmed();
}

/// The safety automaton whose language is the trace language of s.
inline SafetyAutomaton skeleton_to_safety(const Skeleton& s) {
  LetterCodec codec(s.part);
  SafetyAutomaton a;
  a.num_letters = codec.num_open_letters();
  a.initial = s.initial;
  a.delta.assign(s.num_states(), std::vector<int>(a.num_letters, -1));
  for (int t = 0; t < s.num_states(); ++t)
    for (int e = 0; e < s.num_input_valuations(); ++e)
      a.delta[t][s.open_index(t, static_cast<InputValuation>(e))] = s.next[t][e];
  return a;
}

/// Complete DFA for the bad prefixes of a safety automaton: missing
/// transitions lead to one accepting sink.
inline Dfa bad_prefix_dfa(const SafetyAutomaton& a) {
  Dfa d;
  d.num_letters = a.num_letters;
  d.initial = a.initial;
  const int sink = a.num_states();
  for (int q = 0; q < a.num_states(); ++q) {
    d.delta.push_back(a.delta[q]);
    for (int& t : d.delta.back())
      if (t < 0) t = sink;
    d.accepting.push_back(false);
  }
  d.delta.emplace_back(a.num_letters, sink);
  d.accepting.push_back(true);
  return d;
}

// ---------------------------------------------------------------------------
// Results

/// Two one-letter extensions of a common prefix, both good prefixes, with
/// different outputs. A skeleton would have to give both the same label.
struct NoSkeletonWitness {
  OpenWord prefix;
  OpenLetter first, second;
};

struct SynthesisLimits {
  int max_states = 64;
  std::size_t max_queries = 2'000'000;
  double timeout_s = 600;
  std::size_t automaton_cap = default_state_cap;
  std::uint64_t seed = 0;  // 0 keeps the codec's letter order
};

struct SynthesisStats {
  std::size_t membership_queries = 0;  // distinct words decided
  std::size_t membership_lookups = 0;  // including cache hits
  std::size_t equivalence_queries = 0;
  std::size_t counterexamples = 0;
  std::size_t model_checks = 0;
  std::vector<int> conjecture_sizes;
  double seconds = 0;
};

enum class SynthesisOutcome { skeleton, no_skeleton, unrealizable_input, resource_limit };

inline std::string to_string(SynthesisOutcome o) {
  switch (o) {
    case SynthesisOutcome::skeleton: return "skeleton";
    case SynthesisOutcome::no_skeleton: return "no-skeleton";
    case SynthesisOutcome::unrealizable_input: return "unrealizable-input";
    case SynthesisOutcome::resource_limit: return "resource-limit";
  }
  return "?";
}

struct SynthesisResult {
  SynthesisOutcome outcome = SynthesisOutcome::resource_limit;
  std::optional<Skeleton> skeleton;
  std::optional<NoSkeletonWitness> witness;
  std::optional<InputLasso> unrealizable_input;  // an input admitting no model
  std::string message;
  SynthesisStats stats;
};

inline nlohmann::ordered_json stats_to_json(const SynthesisStats& s) {
  return {{"membership_queries", s.membership_queries},
          {"membership_lookups", s.membership_lookups},
          {"equivalence_queries", s.equivalence_queries},
          {"counterexamples", s.counterexamples},
          {"model_checks", s.model_checks},
          {"conjecture_sizes", s.conjecture_sizes},
          {"seconds", s.seconds}};
}

inline std::string to_string(const NoSkeletonWitness& w, const Partition& part) {
  return "after \"" + to_string(w.prefix, part) + "\" both " + to_string(w.first, part) + " and " +
         to_string(w.second, part) + " are good prefixes";
}

/// Re-checks a witness with fresh membership queries.
inline bool verify_witness(const Formula& f, const Partition& part, const NoSkeletonWitness& w) {
  if (w.first.outputs == w.second.outputs) return false;
  BadPrefixDecider d(f, part);
  OpenWord a = w.prefix, b = w.prefix;
  a.push_back(w.first);
  b.push_back(w.second);
  return !d.verdict(a).is_bad && !d.verdict(b).is_bad;
}

// ---------------------------------------------------------------------------
// Teacher

class Teacher {
 public:
  struct Answer {
    enum class Kind { correct, counterexample, no_skeleton, unrealizable_input } kind = Kind::correct;
    std::optional<Word> counterexample;
    std::optional<Skeleton> skeleton;
    std::optional<NoSkeletonWitness> witness;
    std::optional<InputLasso> input;
  };

  Teacher(Formula f, Partition part, SynthesisLimits limits, SynthesisStats& stats, std::vector<int> order)
      : f_(std::move(f)), part_(std::move(part)), codec_(part_), limits_(limits), stats_(stats),
        order_(std::move(order)), decider_(f_, part_), oracle_(f_, part_),
        start_(std::chrono::steady_clock::now()) {}

  const LetterCodec& codec() const { return codec_; }
  const std::vector<int>& order() const { return order_; }

  /// Is w a bad prefix? Answers are cached along with decision states.
  bool member(const Word& w) {
    ++stats_.membership_lookups;
    return entry(w).bad;
  }

  Answer equivalence(const Dfa& b) {
    ++stats_.equivalence_queries;
    auto access = detail::access_words(b, order_);
    if (b.accepting[b.initial]) return member({}) ? unsatisfiable() : counterexample(b, {});

    // (1) Bad prefixes are closed under extension.
    for (int q = 0; q < b.num_states(); ++q) {
      if (!access[q] || !b.accepting[q]) continue;
      for (int a : order_)
        if (!b.accepting[b.delta[q][a]]) {
          const Word& u = *access[q];
          return counterexample(b, member(u) ? concat(u, {a}) : u);
        }
    }

    // (2) States whose every continuation is eventually bad.
    std::vector<int> pruned;
    detail::prune(b, pruned);
    for (int q : pruned) {
      if (!access[q]) continue;
      Word w = *access[q];
      if (member(w)) return counterexample(b, w);
      // Follow good extensions until the conjecture calls one bad. Every
      // path from q reaches an accepting state within |b| letters.
      for (int step = 0; step <= b.num_states(); ++step) {
        std::optional<Word> good;
        for (int a : order_)
          if (!member(concat(w, {a}))) {
            good = concat(w, {a});
            break;
          }
        if (!good) throw std::logic_error("good prefix without a good one-letter extension");
        if (b.accepts(*good)) return counterexample(b, *good);
        w = std::move(*good);
      }
      throw std::logic_error("pruned state with an unbounded good path");
    }
    SafetyConversion conv = conjecture_to_safety(b);
    const SafetyAutomaton& sa = conv.automaton;

    // (3) All transitions of a state must agree on the outputs.
    if (auto inc = check_output_consistency(sa, codec_)) {
      const Word& u = *access[conv.origin[inc->state]];
      Word u1 = concat(u, {inc->first}), u2 = concat(u, {inc->second});
      if (member(u1)) return counterexample(b, u1);
      if (member(u2)) return counterexample(b, u2);
      return no_skeleton(u, inc->first, inc->second);
    }

    // (4) Every input needs a transition.
    if (auto gap = find_input_gap(sa, codec_)) {
      const Word& u = *access[conv.origin[gap->first]];
      const int ni = codec_.num_input_valuations();
      for (int a : order_)
        if (a % ni == static_cast<int>(gap->second) && !member(concat(u, {a})))
          return counterexample(b, concat(u, {a}));
      if (member(u)) return counterexample(b, u);
      return explain_gap(u, gap->second);
    }

    // (5) Model check the extracted skeleton.
    Skeleton s = safety_to_skeleton(sa, part_);
    ++stats_.model_checks;
    Verdict v = model_check(s, complement_min(), limits_.automaton_cap);
    if (v.holds) {
      Answer r;
      r.skeleton = std::move(s);
      return r;
    }
    const auto& cx = *v.counterexample;
    auto m = oracle_.min_trace(cx.inputs);
    if (!m) return unrealizable(cx.inputs);
    try {
      return counterexample(b, decider_.shortest_bad_prefix(cx.path.word()));
    } catch (const NotActuallyBad&) {
      return diverging(cx.word, *m);
    }
  }

  /// For an unsatisfiable formula: some input admitting no model.
  Answer unsatisfiable() { return unrealizable(*input_outside_models({})); }

 private:
  struct Entry {
    BadPrefixDecider::State state;
    bool bad;
  };

  const Entry& entry(const Word& w) {
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    BadPrefixDecider::State s =
        w.empty() ? decider_.initial() : decider_.step(entry(Word(w.begin(), w.end() - 1)).state, w.back());
    check_limits();
    ++stats_.membership_queries;
    bool bad = decider_.is_bad(s);
    return cache_.emplace(w, Entry{std::move(s), bad}).first->second;
  }

  void check_limits() const {
    if (stats_.membership_queries >= limits_.max_queries)
      throw ResourceLimit("membership query cap of " + std::to_string(limits_.max_queries));
    if (elapsed() > limits_.timeout_s) throw ResourceLimit("timeout after " + std::to_string(limits_.timeout_s) + " s");
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  Answer counterexample(const Dfa& b, Word w) {
    if (member(w) == b.accepts(w))
      throw std::logic_error("teacher produced a word the conjecture already classifies correctly");
    ++stats_.counterexamples;
    Answer r;
    r.kind = Answer::Kind::counterexample;
    r.counterexample = std::move(w);
    return r;
  }

  Answer no_skeleton(const Word& u, int a1, int a2) {
    if (member(concat(u, {a1})) || member(concat(u, {a2})) ||
        codec_.open_letter(a1).outputs == codec_.open_letter(a2).outputs)
      throw std::logic_error("unverified no-skeleton witness");
    Answer r;
    r.kind = Answer::Kind::no_skeleton;
    NoSkeletonWitness w;
    for (int a : u) w.prefix.push_back(codec_.open_letter(a));
    w.first = codec_.open_letter(a1);
    w.second = codec_.open_letter(a2);
    r.witness = std::move(w);
    return r;
  }

  Answer unrealizable(const InputLasso& in) {
    if (oracle_.min_trace(in)) throw std::logic_error("input reported unrealizable has a model");
    Answer r;
    r.kind = Answer::Kind::unrealizable_input;
    r.input = in;
    return r;
  }

  // u is a good prefix, yet every extension by input e is bad. Either some
  // input starting with u_I·e has a model, whose min trace then leaves u at
  // a position where both choices are good, or no such input has a model.
  Answer explain_gap(const Word& u, InputValuation e) {
    std::vector<InputValuation> inputs;
    for (int a : u) inputs.push_back(codec_.input_of_open(a));
    inputs.push_back(e);
    auto with_model = nba_emptiness(
        nba_product(input_cylinder(part_, inputs), model_inputs_nba(), limits_.automaton_cap));
    if (!with_model) return unrealizable(*input_outside_models(inputs));
    InputLasso in = to_input_lasso(with_model->word());
    auto m = oracle_.min_trace(in);
    if (!m) throw std::logic_error("input with a model has no min trace");
    OpenLasso w;
    for (int a : u) w.stem.push_back(codec_.open_letter(a));
    w.loop.push_back(m->letter_at(u.size()));
    return diverging(w, *m);
  }

  // w and the min trace m share their input and differ; no prefix of w is
  // bad. The first position where they differ gives two good extensions.
  Answer diverging(const OpenLasso& w, const OpenLasso& m) {
    const std::size_t bound = std::max(w.stem.size(), m.stem.size()) + w.loop.size() * m.loop.size();
    for (std::size_t j = 0; j < bound; ++j) {
      if (w.letter_at(j) == m.letter_at(j)) continue;
      Word u;
      for (std::size_t k = 0; k < j; ++k) u.push_back(codec_.open_index(w.letter_at(k)));
      return no_skeleton(u, codec_.open_index(w.letter_at(j)), codec_.open_index(m.letter_at(j)));
    }
    throw std::logic_error("counterexample coincides with the min trace");
  }

  std::optional<InputLasso> input_outside_models(const std::vector<InputValuation>& prefix) {
    if (!outside_models_) outside_models_ = nba_complement(model_inputs_nba(), limits_.automaton_cap);
    auto w = nba_emptiness(nba_product(input_cylinder(part_, prefix), *outside_models_, limits_.automaton_cap));
    if (!w) return std::nullopt;
    return to_input_lasso(w->word());
  }

  static InputLasso to_input_lasso(const Lasso<int>& w) {
    InputLasso in;
    for (int e : w.stem) in.stem.push_back(static_cast<InputValuation>(e));
    for (int e : w.loop) in.loop.push_back(static_cast<InputValuation>(e));
    return in.normalized();
  }

  const Nba& model_inputs_nba() {
    if (!model_inputs_) model_inputs_ = model_inputs(f_, part_, limits_.automaton_cap);
    return *model_inputs_;
  }

  const Nba& complement_min() {
    if (!complement_min_) complement_min_ = build_complement_min(f_, part_, limits_.automaton_cap);
    return *complement_min_;
  }

  Formula f_;
  Partition part_;
  LetterCodec codec_;
  SynthesisLimits limits_;
  SynthesisStats& stats_;
  std::vector<int> order_;
  BadPrefixDecider decider_;
  Oracle oracle_;
  std::chrono::steady_clock::time_point start_;
  std::map<Word, Entry> cache_;
  std::optional<Nba> model_inputs_, outside_models_, complement_min_;
};

// ---------------------------------------------------------------------------
// Synthesis loop

/// Letter enumeration order; seed 0 keeps the codec order.
inline std::vector<int> letter_order(const LetterCodec& codec, std::uint64_t seed) {
  std::vector<int> order(codec.num_open_letters());
  for (int a = 0; a < codec.num_open_letters(); ++a) order[a] = a;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

inline SynthesisResult lstar_synthesize(const Formula& f, const Partition& part, const SynthesisLimits& limits = {}) {
  SynthesisResult result;
  auto start = std::chrono::steady_clock::now();
  auto finish = [&](SynthesisResult r) {
    r.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };
  try {
    LetterCodec codec(part);
    Teacher teacher(f, part, limits, result.stats, letter_order(codec, limits.seed));
    auto settle = [&](Teacher::Answer a) {
      using K = Teacher::Answer::Kind;
      result.outcome = a.kind == K::correct       ? SynthesisOutcome::skeleton
                       : a.kind == K::no_skeleton ? SynthesisOutcome::no_skeleton
                                                  : SynthesisOutcome::unrealizable_input;
      result.skeleton = std::move(a.skeleton);
      result.witness = std::move(a.witness);
      result.unrealizable_input = std::move(a.input);
      return finish(std::move(result));
    };
    if (teacher.member({})) return settle(teacher.unsatisfiable());
    ObservationTable table(teacher.order(), [&](const Word& w) { return teacher.member(w); });
    for (;;) {
      table.close_and_make_consistent();
      Dfa b = table.conjecture(codec.num_open_letters());
      result.stats.conjecture_sizes.push_back(b.num_states());
      if (b.num_states() > limits.max_states)
        throw ResourceLimit("conjecture exceeds " + std::to_string(limits.max_states) + " states");
      Teacher::Answer a = teacher.equivalence(b);
      if (a.kind != Teacher::Answer::Kind::counterexample) return settle(std::move(a));
      table.add_counterexample(*a.counterexample);
    }
  } catch (const ResourceLimit& e) {
    result.outcome = SynthesisOutcome::resource_limit;
    result.skeleton.reset();
    result.message = e.what();
    return finish(std::move(result));
  }
}

}  // namespace skel
