#pragma once

// Skeletons: input-deterministic transition systems whose states carry
// three-valued output labels. Trace semantics, model checking against the
// complement of min(f), JSON and DOT.

#include <fstream>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "skel/automata.hpp"
#include "skel/ltl.hpp"
#include "skel/minlang.hpp"
#include "skel/threeval.hpp"

namespace skel {

struct Skeleton {
  Partition part;
  int initial = 0;
  std::vector<std::string> names;
  std::vector<std::vector<Tv3>> labels;  // labels[t][output]
  std::vector<std::vector<int>> next;    // next[t][input valuation]

  int num_states() const { return static_cast<int>(labels.size()); }
  int num_input_valuations() const { return 1 << part.num_inputs(); }

  int add_state(std::vector<Tv3> label, std::string name = {}) {
    if (name.empty()) name = "s" + std::to_string(num_states());
    names.push_back(std::move(name));
    labels.push_back(std::move(label));
    next.emplace_back(num_input_valuations(), -1);
    return num_states() - 1;
  }

  OpenLetter letter(int t, InputValuation e) const {
    OpenLetter l;
    for (int j = 0; j < part.num_inputs(); ++j) l.inputs.push_back((e >> j) & 1u);
    l.outputs = labels[t];
    return l;
  }

  int open_index(int t, InputValuation e) const {
    int idx = static_cast<int>(e), pow = num_input_valuations();
    for (Tv3 v : labels[t]) {
      idx += pow * static_cast<int>(v);
      pow *= 3;
    }
    return idx;
  }

  /// Throws Error unless transitions are total and in range, labels have one
  /// value per output, and every state is reachable.
  void validate() const {
    if (num_states() == 0) throw Error("skeleton without states");
    if (initial < 0 || initial >= num_states()) throw Error("initial state out of range");
    for (int t = 0; t < num_states(); ++t) {
      if (static_cast<int>(labels[t].size()) != part.num_outputs())
        throw Error("state " + names[t] + " has a label of the wrong width");
      for (int to : next[t])
        if (to < 0 || to >= num_states()) throw Error("state " + names[t] + " has a missing transition");
    }
    auto reach = reachable();
    for (int t = 0; t < num_states(); ++t)
      if (!reach[t]) throw Error("state " + names[t] + " is unreachable");
  }

  std::vector<bool> reachable() const {
    std::vector<bool> seen(num_states(), false);
    std::vector<int> stack{initial};
    seen[initial] = true;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int to : next[t])
        if (to >= 0 && !seen[to]) {
          seen[to] = true;
          stack.push_back(to);
        }
    }
    return seen;
  }

  /// Copy restricted to the reachable states.
  Skeleton trimmed() const {
    auto keep = reachable();
    std::vector<int> id(num_states(), -1);
    Skeleton r;
    r.part = part;
    for (int t = 0; t < num_states(); ++t)
      if (keep[t]) id[t] = r.add_state(labels[t], names[t]);
    for (int t = 0; t < num_states(); ++t)
      if (keep[t])
        for (int e = 0; e < num_input_valuations(); ++e) r.next[id[t]][e] = next[t][e] < 0 ? -1 : id[next[t][e]];
    r.initial = id[initial];
    return r;
  }
};

/// "g1? !g2" style label text.
inline std::string label_to_string(const std::vector<Tv3>& label, const Partition& part) {
  std::string s;
  for (int p = 0; p < part.num_outputs(); ++p) {
    if (!s.empty()) s += ' ';
    if (label[p] == Tv3::bot) s += '!';
    s += part.outputs()[p];
    if (label[p] == Tv3::open) s += '?';
  }
  return s;
}

/// Inverse of label_to_string; outputs not mentioned are open.
inline std::vector<Tv3> parse_label(std::string_view text, const Partition& part) {
  std::vector<Tv3> label(part.num_outputs(), Tv3::open);
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    Tv3 v = Tv3::top;
    std::string name = tok;
    if (name.front() == '!') {
      v = Tv3::bot;
      name.erase(0, 1);
    } else if (name.back() == '?') {
      v = Tv3::open;
      name.pop_back();
    }
    auto p = part.output_index(name);
    if (!p) throw UnknownAtom(name);
    label[*p] = v;
  }
  return label;
}

// ---------------------------------------------------------------------------
// Traces

inline OpenLasso trace_of(const Skeleton& s, const InputLasso& in) {
  if (in.loop.empty()) throw Error("input lasso with empty loop");
  std::map<std::pair<int, std::size_t>, std::size_t> seen;
  std::vector<OpenLetter> letters;
  int t = s.initial;
  for (std::size_t k = 0;; ++k) {
    std::size_t pos = k < in.stem.size() ? k : in.stem.size() + (k - in.stem.size()) % in.loop.size();
    if (k >= in.stem.size()) {
      auto [it, fresh] = seen.emplace(std::make_pair(t, pos), k);
      if (!fresh) {
        OpenLasso w;
        w.stem.assign(letters.begin(), letters.begin() + static_cast<long>(it->second));
        w.loop.assign(letters.begin() + static_cast<long>(it->second), letters.end());
        return w.normalized();
      }
    }
    InputValuation e = in.letter_at(k);
    letters.push_back(s.letter(t, e));
    t = s.next[t][e];
  }
}

// ---------------------------------------------------------------------------
// Model checking

/// Counterexample: a lasso over open-letter indices that the skeleton
/// produces and N accepts, with the skeleton state before each letter.
struct SkeletonCounterexample {
  LassoWitness path;  // letters are open indices, states are skeleton states
  OpenLasso word;
  InputLasso inputs;
};

struct Verdict {
  bool holds = true;
  std::optional<SkeletonCounterexample> counterexample;

  explicit operator bool() const { return holds; }
};

/// Checks L(s) = min(f) against a prebuilt automaton for the complement of min(f).
inline Verdict model_check(const Skeleton& s, const Nba& n, std::size_t cap = default_state_cap) {
  if (n.alphabet.kind != AlphabetKind::open || n.alphabet.num_inputs != s.part.num_inputs() ||
      n.alphabet.num_outputs != s.part.num_outputs())
    throw AlphabetMismatch();
  s.validate();
  using S = std::pair<int, int>;
  auto g = detail::explore<S, detail::PairHash>(
      S{s.initial, n.initial},
      [&](const S& st, auto&& emit) {
        const auto [t, q] = st;
        for (int e = 0; e < s.num_input_valuations(); ++e) {
          int v = s.open_index(t, static_cast<InputValuation>(e));
          n.for_successors(q, v, [&](int q2) { emit(v, S{s.next[t][e], q2}); });
        }
      },
      [&](const S& st) { return bool(n.accepting[st.second]); }, cap);
  auto lasso = detail::find_lasso(g.out, g.accepting, 0);
  if (!lasso) return {};
  SkeletonCounterexample cx;
  cx.path.stem = lasso->stem;
  cx.path.loop = lasso->loop;
  for (int i : lasso->stem_states) cx.path.stem_states.push_back(g.states[i].first);
  for (int i : lasso->loop_states) cx.path.loop_states.push_back(g.states[i].first);
  LetterCodec codec(s.part);
  for (int v : cx.path.stem) cx.word.stem.push_back(codec.open_letter(v));
  for (int v : cx.path.loop) cx.word.loop.push_back(codec.open_letter(v));
  cx.inputs = input_part(cx.word);
  return {false, std::move(cx)};
}

inline Verdict model_check(const Skeleton& s, const Formula& f, std::size_t cap = default_state_cap) {
  return model_check(s, build_complement_min(f, s.part, cap), cap);
}

/// Does the counterexample follow the skeleton's transitions and labels?
inline bool replays_in(const Skeleton& s, const SkeletonCounterexample& cx) {
  const auto& p = cx.path;
  if (p.loop.empty() || p.stem.size() != p.stem_states.size() || p.loop.size() != p.loop_states.size())
    return false;
  const int ni = s.num_input_valuations();
  int t = s.initial;
  auto step = [&](int state, int v) {
    if (state != t || s.open_index(t, static_cast<InputValuation>(v % ni)) != v) return false;
    t = s.next[t][v % ni];
    return true;
  };
  for (std::size_t i = 0; i < p.stem.size(); ++i)
    if (!step(p.stem_states[i], p.stem[i])) return false;
  for (std::size_t i = 0; i < p.loop.size(); ++i)
    if (!step(p.loop_states[i], p.loop[i])) return false;
  return t == p.loop_states[0];
}

// ---------------------------------------------------------------------------
// Isomorphism

inline bool isomorphic(const Skeleton& a, const Skeleton& b) {
  if (!(a.part == b.part) || a.num_states() != b.num_states()) return false;
  std::vector<int> fwd(a.num_states(), -1), bwd(b.num_states(), -1);
  std::queue<int> work;
  fwd[a.initial] = b.initial;
  bwd[b.initial] = a.initial;
  work.push(a.initial);
  while (!work.empty()) {
    int t = work.front();
    work.pop();
    int u = fwd[t];
    if (a.labels[t] != b.labels[u]) return false;
    for (int e = 0; e < a.num_input_valuations(); ++e) {
      int x = a.next[t][e], y = b.next[u][e];
      if (fwd[x] < 0 && bwd[y] < 0) {
        fwd[x] = y;
        bwd[y] = x;
        work.push(x);
      } else if (fwd[x] != y || bwd[y] != x) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline std::string tv3_json(Tv3 v) { return v == Tv3::top ? "true" : v == Tv3::bot ? "false" : "open"; }

inline const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

inline std::vector<std::string> name_list(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of names");
  std::vector<std::string> v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a string");
    v.push_back(j[i].get<std::string>());
  }
  return v;
}

}  // namespace detail

inline std::string to_json(const Skeleton& s) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["inputs"] = s.part.inputs();
  j["outputs"] = s.part.outputs();
  j["states"] = ordered_json::array();
  for (int t = 0; t < s.num_states(); ++t) {
    ordered_json label = ordered_json::object();
    for (int p = 0; p < s.part.num_outputs(); ++p) label[s.part.outputs()[p]] = detail::tv3_json(s.labels[t][p]);
    j["states"].push_back({{"id", s.names[t]}, {"label", label}});
  }
  j["initial"] = s.names[s.initial];
  j["transitions"] = ordered_json::array();
  for (int t = 0; t < s.num_states(); ++t)
    for (int e = 0; e < s.num_input_valuations(); ++e) {
      ordered_json in = ordered_json::object();
      for (int k = 0; k < s.part.num_inputs(); ++k) in[s.part.inputs()[k]] = bool((e >> k) & 1);
      j["transitions"].push_back({{"from", s.names[t]}, {"input", in}, {"to", s.names[s.next[t][e]]}});
    }
  return j.dump(2) + "\n";
}

inline Skeleton from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
  Skeleton s;
  try {
    s.part = Partition(detail::name_list(detail::field(j, "inputs", "$"), "$.inputs"),
                       detail::name_list(detail::field(j, "outputs", "$"), "$.outputs"));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError("$", e.what());
  }
  const auto& states = detail::field(j, "states", "$");
  if (!states.is_array() || states.empty()) throw SchemaError("$.states", "expected a non-empty array");
  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string path = "$.states[" + std::to_string(i) + "]";
    const auto& id = detail::field(states[i], "id", path);
    if (!id.is_string()) throw SchemaError(path + ".id", "expected a string");
    const auto& label = detail::field(states[i], "label", path);
    if (!label.is_object()) throw SchemaError(path + ".label", "expected an object");
    std::vector<Tv3> l(s.part.num_outputs(), Tv3::open);
    std::vector<bool> given(s.part.num_outputs(), false);
    for (const auto& [name, value] : label.items()) {
      auto p = s.part.output_index(name);
      if (!p) throw SchemaError(path + ".label." + name, "not an output");
      if (value == "true") l[*p] = Tv3::top;
      else if (value == "false") l[*p] = Tv3::bot;
      else if (value == "open") l[*p] = Tv3::open;
      else throw SchemaError(path + ".label." + name, "expected \"true\", \"false\" or \"open\"");
      given[*p] = true;
    }
    for (int p = 0; p < s.part.num_outputs(); ++p)
      if (!given[p]) throw SchemaError(path + ".label." + s.part.outputs()[p], "missing output value");
    std::string name = id.get<std::string>();
    if (!ids.emplace(name, s.num_states()).second) throw SchemaError(path + ".id", "duplicate state id");
    s.add_state(std::move(l), std::move(name));
  }
  auto state_ref = [&](const nlohmann::json& v, const std::string& path) {
    if (!v.is_string()) throw SchemaError(path, "expected a state id");
    auto it = ids.find(v.get<std::string>());
    if (it == ids.end()) throw SchemaError(path, "undeclared state '" + v.get<std::string>() + "'");
    return it->second;
  };
  s.initial = state_ref(detail::field(j, "initial", "$"), "$.initial");
  const auto& trans = detail::field(j, "transitions", "$");
  if (!trans.is_array()) throw SchemaError("$.transitions", "expected an array");
  for (std::size_t i = 0; i < trans.size(); ++i) {
    const std::string path = "$.transitions[" + std::to_string(i) + "]";
    int from = state_ref(detail::field(trans[i], "from", path), path + ".from");
    int to = state_ref(detail::field(trans[i], "to", path), path + ".to");
    const auto& in = detail::field(trans[i], "input", path);
    if (!in.is_object()) throw SchemaError(path + ".input", "expected an object");
    unsigned e = 0;
    int count = 0;
    for (const auto& [name, value] : in.items()) {
      auto k = s.part.input_index(name);
      if (!k) throw SchemaError(path + ".input." + name, "not an input");
      if (!value.is_boolean()) throw SchemaError(path + ".input." + name, "expected a boolean");
      if (value.get<bool>()) e |= 1u << *k;
      ++count;
    }
    if (count != s.part.num_inputs()) throw SchemaError(path + ".input", "every input needs a value");
    int& slot = s.next[from][e];
    if (slot >= 0 && slot != to) throw SchemaError(path, "conflicting transition for this state and input");
    slot = to;
  }
  for (int t = 0; t < s.num_states(); ++t)
    for (int e = 0; e < s.num_input_valuations(); ++e)
      if (s.next[t][e] < 0)
        throw SchemaError("$.transitions", "state '" + s.names[t] + "' has no transition for input " +
                                               input_to_string(static_cast<InputValuation>(e), s.part));
  auto reach = s.reachable();
  for (int t = 0; t < s.num_states(); ++t)
    if (!reach[t]) throw SchemaError("$.states[" + std::to_string(t) + "]", "state is unreachable");
  return s;
}

inline Skeleton load_skeleton(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open skeleton file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return from_json(buf.str());
}

// ---------------------------------------------------------------------------
// DOT

inline std::string input_conjunction(InputValuation e, const Partition& part) {
  if (part.num_inputs() == 0) return "*";
  std::string s;
  for (int k = 0; k < part.num_inputs(); ++k) {
    if (!s.empty()) s += " & ";
    if (!((e >> k) & 1u)) s += '!';
    s += part.inputs()[k];
  }
  return s;
}

inline std::string to_dot(const Skeleton& s, const std::string& name = "skeleton") {
  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
  out << "  init [shape=point];\n  init -> n" << s.initial << ";\n";
  for (int t = 0; t < s.num_states(); ++t)
    out << "  n" << t << " [label=\"" << label_to_string(s.labels[t], s.part) << "\"];\n";
  for (int t = 0; t < s.num_states(); ++t) {
    const auto& nx = s.next[t];
    if (std::all_of(nx.begin(), nx.end(), [&](int to) { return to == nx[0]; })) {
      out << "  n" << t << " -> n" << nx[0] << " [label=\"*\"];\n";
      continue;
    }
    for (int e = 0; e < s.num_input_valuations(); ++e)
      out << "  n" << t << " -> n" << nx[e] << " [label=\""
          << input_conjunction(static_cast<InputValuation>(e), s.part) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace skel
