// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. All tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "skel/cli.hpp"
#include "skel/skel.hpp"
#include "support/convert.hpp"
#include "support/corpus.hpp"
#include "support/gen.hpp"
#include "support/semantics.hpp"

using namespace skel;
using namespace skel::testing;

namespace {

// Tolerances and sample sizes.
constexpr double synth_seconds = 60.0;
constexpr double check_seconds = 10.0;
constexpr std::size_t mutants_per_skeleton = 20;
constexpr int complement_formulas = 200;
constexpr int complement_lassos = 20;
constexpr std::size_t complement_max_size = 10;
constexpr int closure_samples = 1000;
constexpr int unsat_formulas = 100;
constexpr int forced_queries = 500;
constexpr int forced_mutations = 300;
constexpr int models_per_instance = 50;
constexpr int minimality_instances = 40;
constexpr int random_synth_formulas = 100;

struct Reference {
  const char* spec;
  const char* skeleton;
  int states;
};

const Reference references[] = {
    {"arbiter_mutex", "sk_mutex", 1}, {"arbiter_init", "sk_init", 2}, {"arbiter3", "sk_arbiter3", 3}, {"arbiter_respond", "sk_respond", 3}};

const char* const negative_specs[] = {"grant_now", "next_request", "conflicting"};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

struct Invocation {
  int code;
  std::string out;
};

Invocation cli(std::vector<std::string> args) {
  args.insert(args.begin(), "skel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::string line_after(const std::string& text, const std::string& key) {
  auto pos = text.find(key);
  if (pos == std::string::npos) return {};
  pos += key.size();
  return text.substr(pos, text.find('\n', pos) - pos);
}

// Random partitions with one or two inputs and outputs.
Partition small_partition(Rng& rng) {
  std::vector<std::string> in{"r1", "r2"}, out{"g1", "g2"};
  in.resize(uniform(rng, 1, 2));
  out.resize(uniform(rng, 1, 2));
  return Partition(in, out);
}

Formula bounded_formula(Rng& rng, const Partition& part, std::size_t max_size) {
  for (;;) {
    Formula f = random_formula(rng, part, uniform(rng, 1, 6));
    if (f.size() <= max_size) return f;
  }
}

OpenLasso random_open_lasso(Rng& rng, const LetterCodec& codec, int max_stem, int max_loop) {
  OpenLasso w;
  int s = uniform(rng, 0, max_stem), l = uniform(rng, 1, max_loop);
  for (int i = 0; i < s + l; ++i)
    (i < s ? w.stem : w.loop).push_back(codec.open_letter(uniform(rng, 0, codec.num_open_letters() - 1)));
  return w;
}

// Either the min trace with a few outputs perturbed, or random outputs.
OpenLasso near_min_lasso(Rng& rng, const Oracle& o, const LetterCodec& codec, const InputLasso& in) {
  auto m = o.min_trace(in);
  auto unrolled = reroll(in, uniform(rng, 0, 1), uniform(rng, 1, 2));
  OpenLasso w;
  bool keep = m && uniform(rng, 0, 3) == 0;
  for (std::size_t i = 0; i < unrolled.span(); ++i) {
    OpenLetter l = m ? m->letter_at(i) : codec.open_letter(static_cast<int>(unrolled.letter_at(i)));
    if (!keep && (!m || uniform(rng, 0, 4) == 0))
      for (auto& v : l.outputs) v = static_cast<Tv3>(uniform(rng, 0, 2));
    (i < unrolled.stem.size() ? w.stem : w.loop).push_back(l);
  }
  return w;
}

Formula literal(int ap, bool value) { return value ? Formula::atom(ap) : !Formula::atom(ap); }

Formula later(Formula f, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) f = X(f);
  return f;
}

// True when every model whose input starts with `inputs` has `value` for
// output p at position i. Decided directly on the formula automaton.
bool forced_by_prefix(const Formula& f, const Partition& part, const std::vector<InputValuation>& inputs, std::size_t i,
                      int p, bool value) {
  Formula g = f && later(literal(part.num_inputs() + p, !value), i);
  for (std::size_t j = 0; j < inputs.size(); ++j)
    for (int q = 0; q < part.num_inputs(); ++q) g = g && later(literal(q, (inputs[j] >> q) & 1u), j);
  return nba_is_empty(ltl_to_nba(g, part));
}

struct Report {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

using Criterion = std::function<void(Report&)>;

// 1. The four corpus specifications synthesize to their reference skeletons.
void corpus_synthesis(Report& r) {
  for (const auto& entry : references) {
    auto start = std::chrono::steady_clock::now();
    Invocation inv = cli({"synth", corpus_path(std::string(entry.spec) + ".spec")});
    double t = seconds_since(start);
    r.require(inv.code == cli::ok, std::string(entry.spec) + ": synth exit " + std::to_string(inv.code));
    if (inv.code != cli::ok) continue;
    Skeleton s = from_json(inv.out);
    r.require(s.num_states() == entry.states, std::string(entry.spec) + ": wrong state count");
    r.require(isomorphic(s, corpus_skeleton(entry.skeleton)), std::string(entry.spec) + ": not isomorphic to the reference skeleton");
    r.require(t < synth_seconds, std::string(entry.spec) + ": too slow");
    r.detail << entry.skeleton << "=" << s.num_states() << " states (" << static_cast<int>(t * 1000) << " ms) ";
  }
}

// 2. Reference skeletons pass the check, mutants are rejected with replayable
// counterexamples whose bad prefixes the member command confirms.
void model_checking_corpus(Report& r) {
  auto dir = std::filesystem::temp_directory_path() / "skel_acceptance";
  std::filesystem::create_directories(dir);
  Rng rng(2024);
  double slowest = 0;
  for (const auto& entry : references) {
    std::string spec_file = corpus_path(std::string(entry.spec) + ".spec");
    Skeleton s = corpus_skeleton(entry.skeleton);
    Formula f = corpus_spec(entry.spec).formula;
    Invocation ok = cli({"check", spec_file, corpus_path(std::string(entry.skeleton) + ".json")});
    r.require(ok.code == cli::ok && ok.out == "yes\n", std::string(entry.skeleton) + " rejected");

    std::vector<Skeleton> pool;
    for (auto& m : mutants(s)) {
      bool seen = isomorphic(m, s);
      for (const auto& p : pool) seen = seen || isomorphic(m, p);
      if (!seen) pool.push_back(std::move(m));
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    if (pool.size() > mutants_per_skeleton) pool.resize(mutants_per_skeleton);

    std::size_t killed = 0;
    Nba N = build_complement_min(f, s.part);
    BadPrefixDecider decider(f, s.part);
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const Skeleton& m = pool[k];
      std::string file = (dir / (std::string(entry.skeleton) + "_m" + std::to_string(k) + ".json")).string();
      cli::detail::write_file(file, to_json(m));
      auto start = std::chrono::steady_clock::now();
      Invocation c = cli({"check", spec_file, file});
      slowest = std::max(slowest, seconds_since(start));
      Verdict v = model_check(m, N);
      if (c.code != cli::negative || v.holds) {
        r.fail(std::string(entry.skeleton) + " mutant " + std::to_string(k) + " accepted");
        continue;
      }
      r.require(replays_in(m, *v.counterexample), "counterexample does not replay");
      std::string prefix = line_after(c.out, "bad prefix: ");
      Invocation mem = cli({"member", spec_file, prefix});
      bool confirmed = mem.code == cli::ok && mem.out == "bad\n";
      r.require(confirmed, std::string(entry.skeleton) + " mutant " + std::to_string(k) + ": bad prefix '" + prefix +
                               "' not confirmed");
      r.require(decider.verdict(decider.shortest_bad_prefix(v.counterexample->word)).is_bad, "library bad prefix not bad");
      killed += confirmed;
    }
    r.detail << entry.skeleton << " " << killed << "/" << pool.size() << " ";
  }
  r.require(slowest < check_seconds, "a check took too long");
  r.detail << "killed, slowest check " << static_cast<int>(slowest * 1000) << " ms";
  std::filesystem::remove_all(dir);
}

// 3. The complement automaton accepts exactly the words that differ from the
// minimal trace of their input (or whose input has no model).
void complement_equivalence(Report& r) {
  Rng rng(3);
  int formulas = 0, words = 0, mismatches = 0, outside = 0;
  while (formulas < complement_formulas) {
    Partition part = small_partition(rng);
    LetterCodec codec(part);
    Formula f = bounded_formula(rng, part, complement_max_size);
    Nba N = build_complement_min(f, part);
    Oracle o(f, part);
    for (int k = 0; k < complement_lassos; ++k) {
      OpenLasso w = k % 2 ? random_open_lasso(rng, codec, 3, 3)
                          : near_min_lasso(rng, o, codec, random_input_lasso(rng, codec, 2, 2));
      auto m = o.min_trace(input_part(w));
      bool expected = !m || !(*m == w);
      if (nba_membership(N, open_indices(w, codec)) != expected) {
        if (mismatches++ == 0) r.fail(to_string(f, part) + " on " + to_string(w, part));
      }
      outside += expected;
      ++words;
    }
    ++formulas;
  }
  r.detail << formulas << " formulas, " << words << " lassos (" << words - outside << " in min), " << mismatches
           << " mismatches";
}

// 4. Properties of the bad-prefix decision.
void membership_properties(Report& r) {
  Rng rng(4);
  const Partition P = two_by_two();
  const LetterCodec C(P);
  int closure = 0, closure_bad = 0, unsat_checked = 0, unsat = 0, min_prefixes = 0, mutations = 0;
  int lasso_forced = 0, lasso_forced_bad = 0;

  while (closure < closure_samples) {
    Formula f = bounded_formula(rng, P, 12);
    BadPrefixDecider d(f, P);
    Oracle o(f, P);
    for (int k = 0; k < 25; ++k) {
      OpenWord w;
      if (k % 2) {
        w = random_open_word(rng, C, uniform(rng, 0, 4));
      } else {
        auto lasso = near_min_lasso(rng, o, C, random_input_lasso(rng, C, 2, 2));
        for (std::size_t i = 0, n = uniform(rng, 0, 4); i < n; ++i) w.push_back(lasso.letter_at(i));
      }
      bool bad = d.verdict(w).is_bad;
      w.push_back(C.open_letter(uniform(rng, 0, C.num_open_letters() - 1)));
      if (bad && !d.verdict(w).is_bad) r.fail("extension of a bad word is good under " + to_string(f, P));
      closure_bad += bad;
      ++closure;
    }
  }

  for (int n = 0; n < unsat_formulas; ++n) {
    Formula f = bounded_formula(rng, P, 12);
    if (n % 4 == 0) f = f && !f;
    bool empty = nba_is_empty(ltl_to_nba(f, P));
    if (BadPrefixDecider(f, P).verdict(OpenWord{}).is_bad != empty) r.fail("empty word wrong for " + to_string(f, P));
    unsat += empty;
    ++unsat_checked;
  }

  for (int n = 0; n < 2000 && mutations < forced_mutations; ++n) {
    Formula f = bounded_formula(rng, P, 12);
    BadPrefixDecider d(f, P);
    Oracle o(f, P);
    auto in = random_input_lasso(rng, C, 2, 2);
    auto m = o.min_trace(in);
    if (!m) continue;
    OpenWord prefix;
    std::vector<InputValuation> inputs;
    for (std::size_t i = 0; i < 6; ++i) {
      prefix.push_back(m->letter_at(i));
      inputs.push_back(in.letter_at(i));
      if (d.verdict(prefix).is_bad) r.fail("prefix of a min trace is bad under " + to_string(f, P));
      ++min_prefixes;
    }
    // Mutate each fixed output of the prefix; positions fixed for every
    // model over the prefix's input cylinder must give bad words.
    for (std::size_t i = 0; i < prefix.size(); ++i)
      for (int p = 0; p < P.num_outputs(); ++p) {
        Tv3 v = prefix[i].outputs[p];
        if (v == Tv3::open) continue;
        bool prefix_forced = forced_by_prefix(f, P, inputs, i, p, v == Tv3::top);
        for (Tv3 other : {Tv3::open, v == Tv3::top ? Tv3::bot : Tv3::top}) {
          OpenWord mutated = prefix;
          mutated[i].outputs[p] = other;
          bool bad = d.verdict(mutated).is_bad;
          ++lasso_forced;
          lasso_forced_bad += bad;
          if (!prefix_forced) continue;
          if (!bad) r.fail("mutation of a forced position is good under " + to_string(f, P));
          ++mutations;
        }
      }
  }
  r.require(unsat >= 10, "too few unsatisfiable samples");
  r.require(mutations >= forced_mutations, "too few forced mutations");
  r.detail << closure << " extension samples (" << closure_bad << " bad), " << unsat_checked << " formulas ("
           << unsat << " unsat), " << min_prefixes << " min-trace prefixes, " << mutations
           << " forced mutations all bad (" << lasso_forced_bad << "/" << lasso_forced
           << " of all fixed-value mutations bad)";
}

// 5. Two forced-value implementations agree; min traces dominate sampled models.
void oracle_cross_validation(Report& r) {
  Rng rng(5);
  int queries = 0, instances = 0, models = 0;
  while (queries < forced_queries) {
    Partition part = small_partition(rng);
    LetterCodec codec(part);
    Formula f = bounded_formula(rng, part, 12);
    Oracle o(f, part);
    for (int k = 0; k < 5; ++k) {
      auto in = random_input_lasso(rng, codec, 3, 3);
      std::size_t i = uniform(rng, 0, 7);
      int p = uniform(rng, 0, part.num_outputs() - 1);
      if (o.forced_value(in, i, p) != o.forced_value_direct(in, i, p))
        r.fail("forced values differ for " + to_string(f, part));
      ++queries;
    }
  }

  int attempts_left = 4000;
  while (instances < minimality_instances && attempts_left-- > 0) {
    Partition part = small_partition(rng);
    LetterCodec codec(part);
    Formula f = bounded_formula(rng, part, 10);
    Oracle o(f, part);
    auto in = random_input_lasso(rng, codec, 2, 2);
    auto m = o.min_trace(in);
    if (!m) continue;
    int found = 0;
    for (int tries = 0; tries < 4000 && found < models_per_instance; ++tries) {
      auto shape = reroll(in, uniform(rng, 0, 2), uniform(rng, 1, 2));
      ConcreteLasso w;
      bool from_min = tries % 4 != 3;
      for (std::size_t j = 0; j < shape.span(); ++j) {
        unsigned bits = 0;
        for (int q = 0; q < part.num_outputs(); ++q) {
          Tv3 v = m->letter_at(j).outputs[q];
          bool b = from_min && v != Tv3::open ? v == Tv3::top : uniform(rng, 0, 1) == 1;
          bits |= static_cast<unsigned>(b) << q;
        }
        (j < shape.stem.size() ? w.stem : w.loop).push_back(codec.concrete(shape.letter_at(j), bits));
      }
      if (!holds(f, w)) continue;
      ++found;
      if (!leq_lasso(open_of_concrete(w, codec), *m)) r.fail("model above the min trace of " + to_string(f, part));
    }
    if (found < models_per_instance) continue;
    models += found;
    ++instances;
  }
  r.require(instances >= minimality_instances, "too few instances with enough models");
  r.detail << queries << " forced-value queries, " << instances << " instances x " << models_per_instance << " models ("
           << models << " total)";
}

// 6. Letter order does not change the result.
void seed_invariance(Report& r) {
  int runs = 0;
  for (const auto& entry : references) {
    std::string spec = corpus_path(std::string(entry.spec) + ".spec");
    for (const char* seed : {"0", "7", "1234"}) {
      Invocation inv = cli({"synth", spec, "--seed", seed});
      ++runs;
      if (inv.code != cli::ok) {
        r.fail(std::string(entry.spec) + " seed " + seed + ": exit " + std::to_string(inv.code));
        continue;
      }
      Skeleton s = from_json(inv.out);
      r.require(s.num_states() == entry.states && isomorphic(s, corpus_skeleton(entry.skeleton)),
                std::string(entry.spec) + " seed " + seed + ": different skeleton");
    }
  }
  for (const char* spec : negative_specs)
    for (const char* seed : {"0", "7", "1234"}) {
      ++runs;
      r.require(cli({"synth", corpus_path(std::string(spec) + ".spec"), "--seed", seed}).code == cli::negative,
                std::string(spec) + " seed " + seed + ": outcome changed");
    }
  r.detail << runs << " synth runs over seeds 0, 7, 1234";
}

// 7. Formulas without skeletons are reported as such, with checked evidence.
void no_skeleton_detection(Report& r) {
  for (const char* name : negative_specs) {
    Spec sp = corpus_spec(name);
    auto start = std::chrono::steady_clock::now();
    SynthesisResult res = lstar_synthesize(sp.formula, sp.partition);
    double t = seconds_since(start);
    r.require(t < synth_seconds, std::string(name) + ": too slow");
    if (std::string(name) == "conflicting") {
      r.require(res.outcome == SynthesisOutcome::unrealizable_input, "conflicting: wrong outcome");
      if (res.unrealizable_input)
        r.require(!min_trace(sp.formula, sp.partition, *res.unrealizable_input), "conflicting: input has a model");
      // A candidate skeleton is rejected at model checking with an input lacking models.
      Verdict v = model_check(corpus_skeleton("sk_mutex"), sp.formula);
      r.require(!v.holds && !min_trace(sp.formula, sp.partition, v.counterexample->inputs),
                "conflicting: candidate not rejected on a model-free input");
      r.detail << name << ": unrealizable input " << to_string(*res.unrealizable_input, sp.partition) << "; ";
      continue;
    }
    r.require(res.outcome == SynthesisOutcome::no_skeleton, std::string(name) + ": wrong outcome");
    if (!res.witness) continue;
    const auto& w = *res.witness;
    BadPrefixDecider d(sp.formula, sp.partition);
    OpenWord a = w.prefix, b = w.prefix;
    a.push_back(w.first);
    b.push_back(w.second);
    // Two good one-letter extensions of a good prefix that disagree on outputs.
    bool ok = !d.verdict(a).is_bad && !d.verdict(b).is_bad && w.first.outputs != w.second.outputs;
    r.require(ok && verify_witness(sp.formula, sp.partition, w), std::string(name) + ": witness not verified");
    r.detail << name << ": no skeleton (" << static_cast<int>(t * 1000) << " ms); ";
  }
}

// 8. Query accounting on the corpus, and the teacher's runtime honesty
// checks never fire on the corpus or on random formulas.
void learner_accounting(Report& r) {
  for (const auto& entry : references) {
    Spec sp = corpus_spec(entry.spec);
    SynthesisResult res = lstar_synthesize(sp.formula, sp.partition);
    const auto& st = res.stats;
    r.require(st.membership_queries > 0 && st.equivalence_queries == st.counterexamples + 1,
              std::string(entry.spec) + ": inconsistent stats");
    r.detail << entry.skeleton << " " << st.membership_queries << "mq/" << st.equivalence_queries << "eq ";
  }
  Rng rng(8);
  const Partition P = two_by_two();
  int outcomes[4] = {0, 0, 0, 0};
  for (int n = 0; n < random_synth_formulas; ++n) {
    Formula f = bounded_formula(rng, P, 12);
    try {
      SynthesisResult res = lstar_synthesize(f, P);
      ++outcomes[static_cast<int>(res.outcome)];
      if (res.skeleton) r.require(model_check(*res.skeleton, f).holds, "learned skeleton fails its check");
    } catch (const std::logic_error& e) {
      r.fail(std::string("honesty check fired: ") + e.what() + " on " + to_string(f, P));
    }
  }
  r.detail << "| random: " << outcomes[0] << " skeletons, " << outcomes[1] << " no-skeleton, " << outcomes[2]
           << " unrealizable, " << outcomes[3] << " limits";
}

}  // namespace

int main() {
  const std::pair<const char*, Criterion> criteria[] = {
      {"corpus synthesis", corpus_synthesis},
      {"model checking corpus", model_checking_corpus},
      {"complement of min vs oracle", complement_equivalence},
      {"membership properties", membership_properties},
      {"oracle cross-validation", oracle_cross_validation},
      {"uniqueness across seeds", seed_invariance},
      {"no-skeleton detection", no_skeleton_detection},
      {"learner accounting", learner_accounting},
  };
  int failed = 0, k = 0;
  for (const auto& [name, run] : criteria) {
    Report rep;
    auto start = std::chrono::steady_clock::now();
    try {
      run(rep);
    } catch (const std::exception& e) {
      rep.fail(std::string("exception: ") + e.what());
    }
    failed += !rep.pass;
    std::cout << (rep.pass ? "PASS" : "FAIL") << " [" << ++k << "] " << name << " (" << std::fixed
              << std::setprecision(1) << seconds_since(start) << " s): " << rep.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
