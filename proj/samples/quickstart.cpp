// Learn the skeleton of a small arbiter specification, print it, and
// query a few words and traces against the same formula.

#include <iostream>

#include "skel/skel.hpp"

int main() {
  using namespace skel;

  Partition part({"r1", "r2"}, {"g1", "g2"});
  Formula f = parse("!g1 & !g2 & G (r1 -> X g1)", part);

  SynthesisResult r = lstar_synthesize(f, part);
  if (r.outcome != SynthesisOutcome::skeleton) {
    std::cerr << to_string(r.outcome) << ": " << r.message << "\n";
    return 1;
  }
  const Skeleton& s = *r.skeleton;
  std::cout << to_json(s);
  std::cout << "states: " << s.num_states() << ", membership queries: " << r.stats.membership_queries
            << ", equivalence queries: " << r.stats.equivalence_queries << "\n";
  std::cout << "model check: " << (model_check(s, f).holds ? "holds" : "fails") << "\n";

  // After a request the grant may not stay open.
  auto w = parse_word("{r1=1,r2=0|g1=0,g2=0} {r1=0,r2=0|g1=?,g2=?}", part);
  std::cout << to_string(w, part) << " is " << (is_bad_prefix(f, part, w).is_bad ? "bad" : "not bad") << "\n";

  InputLasso in = parse_input_lasso("{r1=0,r2=1} ({r1=1,r2=0})^w", part);
  std::cout << "min trace: " << to_string(*min_trace(f, part, in), part) << "\n";
  std::cout << "skeleton trace: " << to_string(trace_of(s, in), part) << "\n";
}
