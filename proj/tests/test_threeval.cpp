#include <catch_amalgamated.hpp>

#include "skel/threeval.hpp"
#include "support/gen.hpp"

using namespace skel;

TEST_CASE("information order") {
  CHECK(leq(Tv3::top, Tv3::open));
  CHECK(leq(Tv3::bot, Tv3::open));
  CHECK(leq(Tv3::open, Tv3::open));
  CHECK_FALSE(leq(Tv3::open, Tv3::top));
  CHECK_FALSE(leq(Tv3::top, Tv3::bot));
}

TEST_CASE("open letter indexing is a bijection") {
  LetterCodec c(2, 2);
  CHECK(c.num_open_letters() == 36);
  for (int i = 0; i < c.num_open_letters(); ++i) {
    OpenLetter l = c.open_letter(i);
    CHECK(c.open_index(l) == i);
    for (int j = 0; j < 2; ++j) {
      CHECK(c.output_of_open(i, j) == l.outputs[j]);
      for (Tv3 v : {Tv3::bot, Tv3::top, Tv3::open}) {
        OpenLetter m = l;
        m.outputs[j] = v;
        CHECK(c.with_output(i, j, v) == c.open_index(m));
      }
    }
    std::size_t opens = 0;
    for (auto v : l.outputs) opens += v == Tv3::open;
    CHECK(c.instantiations(i).size() == (std::size_t{1} << opens));
  }
}

TEST_CASE("letter order and substitution") {
  Partition p = testing::two_by_two();
  auto w = parse_word("{r1=1,r2=0 | g1=?,g2=0} {r1=0,r2=0 | g1=1,g2=?}", p);
  REQUIRE(w.size() == 2);
  OpenLetter s = substitute(w[0], p, "g1", true);
  CHECK(leq_letter(s, w[0]));
  CHECK_FALSE(leq_letter(w[0], s));
  CHECK_THROWS_AS(substitute(w[0], p, "r1", true), InputSubstitution);
  CHECK_FALSE(leq_letter(w[0], w[1]));
  OpenLetter short_letter{{true}, {Tv3::top}};
  CHECK_THROWS_AS(leq_letter(short_letter, w[0]), PartitionMismatch);
}

TEST_CASE("lasso syntax round trip and normalization") {
  Partition p = testing::two_by_two();
  auto l = parse_lasso("{r1=1,r2=0|g1=0,g2=0} ({r1=0,r2=0|g1=1,g2=?} {r1=0,r2=0|g1=1,g2=?})^w", p);
  CHECK(l.stem.size() == 1);
  CHECK(l.loop.size() == 2);
  CHECK(parse_lasso(to_string(l, p), p) == l);
  auto n = l.normalized();
  CHECK(n.loop.size() == 1);
  CHECK(n == l);
  CHECK(leq_lasso(l, n));
  CHECK_THROWS_AS(parse_lasso("{r1=1,r2=0|g1=0,g2=0}", p), SyntaxError);
  CHECK_THROWS_AS(parse_lasso("({r1=?,r2=0|g1=0,g2=0})^w", p), SyntaxError);
  auto in = parse_input_lasso("{r1=1,r2=0} ({r1=0,r2=1})^w", p);
  CHECK(in.stem == std::vector<InputValuation>{1});
  CHECK(in.loop == std::vector<InputValuation>{2});
}

TEST_CASE("lasso comparison uses a sufficient horizon") {
  Partition p = testing::two_by_two();
  auto a = parse_lasso("({r1=0,r2=0|g1=1,g2=0} {r1=0,r2=0|g1=1,g2=0} {r1=0,r2=0|g1=1,g2=0})^w", p);
  auto b = parse_lasso("({r1=0,r2=0|g1=?,g2=0} {r1=0,r2=0|g1=1,g2=0})^w", p);
  CHECK(leq_lasso(a, b));
  CHECK_FALSE(leq_lasso(b, a));
}
