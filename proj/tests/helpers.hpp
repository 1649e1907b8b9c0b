#pragma once

#include <string>

#include "admo/io.hpp"
#include "admo/rewriting.hpp"

namespace admo::testing {

// The four-rule arithmetic system with eq/2 and P/1 declared.
inline ProblemFile arith_problem() {
  return parse_problem(
      "sig 0/0, S/1, plus/2, times/2;\n"
      "pred P/1, eq/2;\n"
      "rules\n"
      "  plus(0, y) -> y\n"
      "  plus(S(x), y) -> S(plus(x, y))\n"
      "  times(0, y) -> 0\n"
      "  times(S(x), y) -> plus(times(x, y), y)\n"
      "end\n");
}

// a -> b, a -> b'
inline ProblemFile failure_problem() {
  return parse_problem("sig a/0, b/0, b'/0;\npred P/1;\nrules\n  a -> b\n  a -> b'\nend\n");
}

// a -> b, a -> c, b -> a, b -> d
inline ProblemFile loop_problem() {
  return parse_problem(
      "sig a/0, b/0, c/0, d/0;\npred P/1;\nrules\n  a -> b\n  a -> c\n  b -> a\n  b -> d\nend\n");
}

// The loop system extended with c -> e, d -> e: confluent but not normalizing.
inline ProblemFile loop_e_problem() {
  return parse_problem(
      "sig a/0, b/0, c/0, d/0, e/0;\npred P/1;\n"
      "rules\n  a -> b\n  a -> c\n  b -> a\n  b -> d\n  c -> e\n  d -> e\nend\n");
}

inline Term term_of(const RewriteSystem& R, const std::string& text) {
  Signature sig = R.signature;
  return parse_term(text, sig);
}

inline Proposition prop_of(const RewriteSystem& R, const std::string& text) {
  Signature sig = R.signature;
  return parse_proposition(text, sig);
}

inline Sequent sequent_of(const RewriteSystem& R, const std::string& text) {
  Signature sig = R.signature;
  return parse_sequent(text, sig);
}

}  // namespace admo::testing
