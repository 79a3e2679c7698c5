#pragma once

// Random generators shared by the test suites.

#include <random>
#include <vector>

#include "skel/ltl.hpp"
#include "skel/threeval.hpp"

namespace skel::testing {

using Rng = std::mt19937_64;

inline Partition two_by_two() { return Partition({"r1", "r2"}, {"g1", "g2"}); }

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Random formula with roughly `budget` operators over every proposition.
inline Formula random_formula(Rng& rng, const Partition& part, int budget) {
  if (budget <= 0) {
    int r = uniform(rng, 0, 9);
    if (r == 0) return Formula::tt();
    if (r == 1) return Formula::ff();
    Formula a = Formula::atom(uniform(rng, 0, part.size() - 1));
    return uniform(rng, 0, 2) == 0 ? !a : a;
  }
  int op = uniform(rng, 0, 9);
  switch (op) {
    case 0: return !random_formula(rng, part, budget - 1);
    case 1: return X(random_formula(rng, part, budget - 1));
    case 2: return F(random_formula(rng, part, budget - 1));
    case 3: return G(random_formula(rng, part, budget - 1));
    default: break;
  }
  int left = uniform(rng, 0, budget - 1);
  Formula a = random_formula(rng, part, left);
  Formula b = random_formula(rng, part, budget - 1 - left);
  switch (op) {
    case 4: return a && b;
    case 5: return a || b;
    case 6: return implies(a, b);
    case 7: return U(a, b);
    case 8: return R(a, b);
    default: return a && b;
  }
}

inline ConcreteLasso random_concrete_lasso(Rng& rng, const LetterCodec& codec, int max_stem, int max_loop) {
  ConcreteLasso w;
  int s = uniform(rng, 0, max_stem), l = uniform(rng, 1, max_loop);
  for (int i = 0; i < s; ++i) w.stem.push_back(uniform(rng, 0, codec.num_concrete_letters() - 1));
  for (int i = 0; i < l; ++i) w.loop.push_back(uniform(rng, 0, codec.num_concrete_letters() - 1));
  return w;
}

inline InputLasso random_input_lasso(Rng& rng, const LetterCodec& codec, int max_stem, int max_loop) {
  InputLasso w;
  int s = uniform(rng, 0, max_stem), l = uniform(rng, 1, max_loop);
  for (int i = 0; i < s; ++i) w.stem.push_back(uniform(rng, 0, codec.num_input_valuations() - 1));
  for (int i = 0; i < l; ++i) w.loop.push_back(uniform(rng, 0, codec.num_input_valuations() - 1));
  return w;
}

inline OpenWord random_open_word(Rng& rng, const LetterCodec& codec, int len) {
  OpenWord w;
  for (int i = 0; i < len; ++i) w.push_back(codec.open_letter(uniform(rng, 0, codec.num_open_letters() - 1)));
  return w;
}

}  // namespace skel::testing
