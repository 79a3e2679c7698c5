#include <catch_amalgamated.hpp>

#include "skel/oracle.hpp"
#include "skel/skeleton.hpp"
#include "support/convert.hpp"
#include "support/corpus.hpp"
#include "support/gen.hpp"

using namespace skel;
using namespace skel::testing;

namespace {

const Partition P = two_by_two();
const LetterCodec C(P);

Skeleton single_state(const char* label) {
  Skeleton s;
  s.part = P;
  s.add_state(parse_label(label, P));
  for (auto& to : s.next[0]) to = 0;
  return s;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("labels print and parse") {
  CHECK(label_to_string(parse_label("g1? !g2", P), P) == "g1? !g2");
  CHECK(parse_label("", P) == std::vector<Tv3>{Tv3::open, Tv3::open});
  CHECK(parse_label("g1 !g2", P) == std::vector<Tv3>{Tv3::top, Tv3::bot});
  CHECK_THROWS_AS(parse_label("r1", P), UnknownAtom);
}

TEST_CASE("traces of corpus skeletons") {
  Skeleton b = corpus_skeleton("sk_mutex");
  Rng rng(5);
  for (int n = 0; n < 20; ++n) {
    auto w = trace_of(b, random_input_lasso(rng, C, 3, 3));
    for (std::size_t i = 0; i < w.span(); ++i)
      CHECK(w.letter_at(i).outputs == std::vector<Tv3>{Tv3::open, Tv3::open});
  }

  Skeleton d = corpus_skeleton("sk_respond");
  auto w = trace_of(d, parse_input_lasso("({r1=1,r2=0})^w", P));
  CHECK(w == parse_lasso("{r1=1,r2=0|g1=0,g2=0} ({r1=1,r2=0|g1=1,g2=?})^w", P));

  auto in = parse_input_lasso("{r1=0,r2=0} ({r1=1,r2=0} {r1=0,r2=1} {r1=1,r2=1})^w", P);
  auto one = trace_of(single_state("g1 g2?"), in);
  CHECK(one.loop.size() == 3);
  CHECK(input_part(one) == in);
}

TEST_CASE("model checking the corpus") {
  CHECK(model_check(corpus_skeleton("sk_mutex"), corpus_spec("arbiter_mutex").formula).holds);
  CHECK(model_check(corpus_skeleton("sk_init"), corpus_spec("arbiter_init").formula).holds);
  CHECK(model_check(corpus_skeleton("sk_arbiter3"), corpus_spec("arbiter3").formula).holds);
  CHECK(model_check(corpus_skeleton("sk_respond"), corpus_spec("arbiter_respond").formula).holds);

  // The grant-free implementation read as a skeleton claims fixed outputs.
  Formula mutex = corpus_spec("arbiter_mutex").formula;
  Verdict v = model_check(single_state("!g1 !g2"), mutex);
  REQUIRE_FALSE(v.holds);
  REQUIRE(v.counterexample);
  CHECK(replays_in(single_state("!g1 !g2"), *v.counterexample));

  // Skeletons for a neighbouring formula are rejected.
  CHECK_FALSE(model_check(corpus_skeleton("sk_respond"), corpus_spec("arbiter3").formula).holds);
  CHECK_FALSE(model_check(corpus_skeleton("sk_arbiter3"), corpus_spec("arbiter_respond").formula).holds);
  CHECK_FALSE(model_check(corpus_skeleton("sk_mutex"), corpus_spec("arbiter_init").formula).holds);
}

TEST_CASE("counterexamples are skeleton traces accepted by N") {
  Rng rng(17);
  int rejected = 0;
  for (int n = 0; n < 40; ++n) {
    Formula f = random_formula(rng, P, uniform(rng, 1, 6));
    Nba N = build_complement_min(f, P);
    Oracle o(f, P);
    for (int k = 0; k < 5; ++k) {
      Skeleton s = random_skeleton(rng, P, 3);
      Verdict v = model_check(s, N);
      INFO(to_string(f, P) << "\n" << to_json(s));
      if (v.holds) {
        for (int j = 0; j < 100; ++j) {
          auto in = random_input_lasso(rng, C, 3, 3);
          auto m = o.min_trace(in);
          REQUIRE(m);
          CHECK(trace_of(s, in) == *m);
        }
        continue;
      }
      ++rejected;
      REQUIRE(v.counterexample);
      const auto& cx = *v.counterexample;
      CHECK(replays_in(s, cx));
      CHECK(nba_membership(N, cx.path.word()));
      CHECK(open_indices(trace_of(s, cx.inputs), C) == open_indices(cx.word.normalized(), C));
      auto m = o.min_trace(cx.inputs);
      CHECK((!m || !(*m == cx.word.normalized())));
    }
  }
  CHECK(rejected >= 100);
}

TEST_CASE("corpus skeletons agree with the oracle on sampled inputs") {
  const std::pair<const char*, const char*> pairs[] = {
      {"sk_mutex", "arbiter_mutex"}, {"sk_init", "arbiter_init"}, {"sk_arbiter3", "arbiter3"}, {"sk_respond", "arbiter_respond"}};
  Rng rng(3);
  for (auto [sk, spec] : pairs) {
    Skeleton s = corpus_skeleton(sk);
    Oracle o(corpus_spec(spec).formula, P);
    for (int j = 0; j < 100; ++j) {
      auto in = random_input_lasso(rng, C, 3, 3);
      auto m = o.min_trace(in);
      REQUIRE(m);
      CHECK(trace_of(s, in) == *m);
    }
  }
}

TEST_CASE("JSON round trip and schema errors") {
  for (const char* name : {"sk_mutex", "sk_init", "sk_arbiter3", "sk_respond"}) {
    Skeleton s = corpus_skeleton(name);
    CHECK(isomorphic(from_json(to_json(s)), s));
    CHECK(to_json(from_json(to_json(s))) == to_json(s));
  }

  auto bad = [](const std::string& text) {
    try {
      from_json(text);
    } catch (const SchemaError& e) {
      return e.path();
    }
    return std::string("accepted");
  };
  const std::string head = R"({"inputs":["r1"],"outputs":["g1"],"states":[{"id":"a","label":{"g1":"open"}}],)";
  const std::string total = R"({"from":"a","input":{"r1":false},"to":"a"},{"from":"a","input":{"r1":true},"to":"a"})";
  CHECK(bad(head + R"("initial":"a","transitions":[)" + total + "]}") == "accepted");
  CHECK(bad(head + R"("initial":"a","transitions":[{"from":"a","input":{"r1":false},"to":"b"}]})") ==
        "$.transitions[0].to");
  CHECK(bad(head + R"("initial":"z","transitions":[)" + total + "]}") == "$.initial");
  CHECK(bad(head + R"("initial":"a","transitions":[{"from":"a","input":{"r1":false},"to":"a"}]})") ==
        "$.transitions");
  CHECK(bad(head + R"("initial":"a","transitions":[{"from":"a","input":{"x":false},"to":"a"}]})") ==
        "$.transitions[0].input.x");
  CHECK(bad(R"({"inputs":["r1"],"outputs":["g1"],"states":[{"id":"a","label":{"g1":"maybe"}}]})") ==
        "$.states[0].label.g1");
  CHECK(bad(R"({"inputs":["r1"],"states":[]})") == "$.outputs");
  CHECK(bad("{not json") == "$");
}

TEST_CASE("DOT export") {
  std::string b = to_dot(corpus_skeleton("sk_mutex"));
  CHECK(count(b, "[label=\"g1? g2?\"]") == 1);
  CHECK(count(b, "n0 -> n0 [label=\"*\"]") == 1);
  CHECK(count(b, " -> ") == 2);  // the initial arrow and the self-loop
  CHECK(b.find("shape=circle") != std::string::npos);

  std::string e = to_dot(corpus_skeleton("sk_arbiter3"));
  CHECK(count(e, "[label=\"!g1 !g2\"]") == 1);
  CHECK(count(e, "[label=\"g1 !g2\"]") == 1);
  CHECK(count(e, "\"r1 & !r2\"") == 3);
}

TEST_CASE("isomorphism") {
  Skeleton b = corpus_skeleton("sk_mutex");
  Skeleton two;
  two.part = P;
  two.add_state(parse_label("g1? g2?", P));
  two.add_state(parse_label("g1? g2?", P));
  for (int e = 0; e < 4; ++e) two.next[0][e] = two.next[1][e] = 1;
  CHECK(isomorphic(b, b));
  CHECK_FALSE(isomorphic(b, two));
  CHECK(model_check(two, corpus_spec("arbiter_mutex").formula).holds);

  Rng rng(11);
  std::vector<Skeleton> pool;
  for (int n = 0; n < 30; ++n) {
    Skeleton s = random_skeleton(rng, P, 4);
    Skeleton t = shuffled(rng, s);
    CHECK(isomorphic(s, t));
    CHECK(isomorphic(t, s));
    for (int j = 0; j < 10; ++j) {
      auto in = random_input_lasso(rng, C, 2, 3);
      CHECK(trace_of(s, in) == trace_of(t, in));
    }
    pool.push_back(s);
    pool.push_back(t);
  }
  for (const auto& x : pool)
    for (const auto& y : pool)
      for (const auto& z : pool)
        if (isomorphic(x, y) && isomorphic(y, z)) CHECK(isomorphic(x, z));
}

TEST_CASE("mutants of corpus skeletons are rejected with valid witnesses") {
  Skeleton e = corpus_skeleton("sk_arbiter3");
  Formula f = corpus_spec("arbiter3").formula;
  Nba N = build_complement_min(f, P);
  for (const auto& m : mutants(e)) {
    if (isomorphic(m, e)) continue;
    Verdict v = model_check(m, N);
    CHECK_FALSE(v.holds);
    if (v.counterexample) CHECK(replays_in(m, *v.counterexample));
  }
}
