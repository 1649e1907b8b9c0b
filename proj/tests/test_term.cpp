#include <doctest.h>

#include <random>

#include "admo/io.hpp"
#include "admo/term.hpp"

using namespace admo;

namespace {

Signature arith_sig() {
  Signature sig;
  sig.declare_function("0", 0);
  sig.declare_function("S", 1);
  sig.declare_function("plus", 2);
  sig.declare_function("times", 2);
  sig.declare_predicate("P", 1);
  sig.declare_predicate("Q", 2);
  return sig;
}

Term T(const std::string& text) {
  Signature sig = arith_sig();
  return parse_term(text, sig);
}

Proposition Pr(const std::string& text) {
  Signature sig = arith_sig();
  return parse_proposition(text, sig);
}

// Small random proposition generator for the property checks.
struct PropGen {
  std::mt19937_64 rng;
  std::vector<std::string> vars{"x", "y", "z"};

  explicit PropGen(uint64_t seed) : rng(seed) {}

  Term term(int depth) {
    switch (rng() % (depth > 0 ? 3 : 2)) {
      case 0: return Term::var(vars[rng() % vars.size()]);
      case 1: return Term::app("0");
      default: return Term::app("S", {term(depth - 1)});
    }
  }

  Proposition prop(int depth) {
    if (depth == 0) return Proposition::atom("P", {term(1)});
    switch (rng() % 6) {
      case 0: return Proposition::atom("Q", {term(depth), term(depth)});
      case 1: return Proposition::bottom();
      case 2: return Proposition::implies(prop(depth - 1), prop(depth - 1));
      case 3: return Proposition::and_(prop(depth - 1), prop(depth - 1));
      case 4: return Proposition::forall(vars[rng() % vars.size()], prop(depth - 1));
      default: return Proposition::exists(vars[rng() % vars.size()], prop(depth - 1));
    }
  }
};

Substitution compose(const Substitution& s1, const Substitution& s2) {
  // (s2 . s1)(x) = s2(s1(x))
  Substitution out;
  for (const auto& [x, t] : s1.map) out.bind(x, substitute(t, s2));
  for (const auto& [x, t] : s2.map)
    if (!s1.lookup(x)) out.bind(x, t);
  return out;
}

}  // namespace

TEST_CASE("substitution: direct replacement") {
  Substitution s{{"x", T("0")}};
  CHECK(substitute(T("plus(x, y)"), s) == T("plus(0, y)"));
}

TEST_CASE("substitution: identity is a no-op") {
  Proposition p = Pr("P(times(x, y))");
  CHECK(substitute(p, Substitution{}) == p);
}

TEST_CASE("substitution avoids capture under binders") {
  // [x/y] (forall x. Q(x, y)) must rename the binder, not capture x.
  Proposition p = Pr("forall x. Q(x, y)");
  Substitution s{{"y", Term::var("x")}};
  Proposition got = substitute(p, s);
  Signature sig = arith_sig();
  Proposition expected = parse_proposition("forall x1. Q(x1, x)", sig);
  CHECK(alpha_equal(got, expected));
  CHECK(render(got, sig) == "forall x'. Q(x', x)");
}

TEST_CASE("alpha equality") {
  CHECK(alpha_equal(Pr("forall x. P(x)"), Pr("forall y. P(y)")));
  CHECK_FALSE(alpha_equal(Pr("forall x. P(x)"), Pr("forall x. Q(x, x)")));
  CHECK(alpha_equal(Pr("P(0)"), Pr("P(0)")));
}

TEST_CASE("matching") {
  auto m1 = match_pattern(T("plus(0, y)"), T("plus(0, S(0))"));
  REQUIRE(m1);
  CHECK(*m1->lookup("y") == T("S(0)"));

  CHECK_FALSE(match_pattern(T("plus(S(x), y)"), T("plus(0, 0)")));

  Signature sig = arith_sig();
  sig.declare_function("a", 0);
  sig.declare_function("b", 0);
  CHECK_FALSE(match_pattern(parse_term("times(x, x)", sig), parse_term("times(a, b)", sig)));
}

TEST_CASE("unification") {
  Signature sig;
  sig.declare_function("f", 1);
  sig.declare_function("g", 1);
  sig.declare_function("a", 0);
  auto u1 = unify(parse_term("f(x)", sig), parse_term("f(g(y))", sig));
  REQUIRE(u1);
  CHECK(*u1->lookup("x") == parse_term("g(y)", sig));

  CHECK_FALSE(unify(parse_term("x", sig), parse_term("f(x)", sig)));

  auto u3 = unify(parse_term("a", sig), parse_term("a", sig));
  REQUIRE(u3);
  CHECK(u3->empty());
}

TEST_CASE("replace_at") {
  auto r1 = replace_at(T("plus(0, y)"), Position{{0}}, T("S(0)"));
  REQUIRE(r1);
  CHECK(*r1 == T("plus(S(0), y)"));

  Proposition p = Pr("P(plus(0, 0))");
  auto r2 = replace_at(p, Position{{0, 0}}, T("0"));
  REQUIRE(r2);
  CHECK(*r2 == p);

  Signature sig = arith_sig();
  sig.declare_function("a", 0);
  CHECK_FALSE(replace_at(Pr("P(0)"), Position{{3}}, parse_term("a", sig)));
}

TEST_CASE("property: substitution composes") {
  PropGen gen(7);
  for (int i = 0; i < 200; ++i) {
    Proposition p = gen.prop(3);
    Substitution s1{{"x", gen.term(2)}};
    Substitution s2{{"y", gen.term(2)}, {"x", gen.term(1)}};
    Proposition lhs = substitute(substitute(p, s1), s2);
    Proposition rhs = substitute(p, compose(s1, s2));
    CHECK(alpha_equal(lhs, rhs));
  }
}

TEST_CASE("property: matching recovers a substitution instance") {
  PropGen gen(11);
  Signature sig = arith_sig();
  for (int i = 0; i < 200; ++i) {
    Term pattern = parse_term("plus(times(x, y), S(z))", sig);
    Substitution s{{"x", gen.term(2)}, {"y", gen.term(2)}, {"z", gen.term(2)}};
    Term subject = substitute(pattern, s);
    auto m = match_pattern(pattern, subject);
    REQUIRE(m);
    CHECK(substitute(pattern, *m) == subject);
    for (const auto& v : {"x", "y", "z"}) {
      const Term* got = m->lookup(v);
      const Term* want = s.lookup(v);
      Term g = got ? *got : Term::var(v);
      Term w = want ? *want : Term::var(v);
      CHECK(g == w);
    }
  }
}

TEST_CASE("property: unify returns a most general unifier") {
  PropGen gen(13);
  Signature sig = arith_sig();
  int unified = 0;
  for (int i = 0; i < 400; ++i) {
    // Random small terms over disjoint variables.
    Term t = gen.term(2);
    Term u = gen.term(2);
    Substitution rename{{"x", Term::var("x2")}, {"y", Term::var("y2")}, {"z", Term::var("z2")}};
    u = substitute(u, rename);
    auto mgu = unify(t, u);
    // Brute-force enumeration of small substitutions over the joint variables.
    std::vector<Term> cands{Term::app("0"), Term::app("S", {Term::app("0")}), Term::var("w")};
    std::vector<std::string> vars{"x", "y", "z", "x2", "y2", "z2"};
    bool any_unifier = false;
    std::vector<size_t> idx(vars.size(), 0);
    while (true) {
      Substitution theta;
      for (size_t k = 0; k < vars.size(); ++k) theta.bind(vars[k], cands[idx[k]]);
      if (substitute(t, theta) == substitute(u, theta)) {
        any_unifier = true;
        REQUIRE_MESSAGE(mgu.has_value(), "unify missed a unifiable pair");
        // theta must factor through the mgu: theta(mgu(v)) == theta(v).
        for (const auto& v : vars) {
          Term via = substitute(substitute(Term::var(v), *mgu), theta);
          CHECK(via == substitute(Term::var(v), theta));
        }
      }
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == cands.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    if (mgu) {
      ++unified;
      CHECK(substitute(t, *mgu) == substitute(u, *mgu));
    } else {
      CHECK_FALSE(any_unifier);
    }
  }
  CHECK(unified > 20);  // the generator produces enough unifiable pairs
}

TEST_CASE("property: alpha equality is an equivalence relation") {
  PropGen gen(17);
  std::vector<Proposition> props;
  for (int i = 0; i < 60; ++i) props.push_back(gen.prop(4));
  for (const auto& p : props) CHECK(alpha_equal(p, p));
  for (const auto& a : props)
    for (const auto& b : props)
      CHECK(alpha_equal(a, b) == alpha_equal(b, a));
  for (const auto& a : props)
    for (const auto& b : props)
      for (const auto& c : props)
        if (alpha_equal(a, b) && alpha_equal(b, c)) CHECK(alpha_equal(a, c));
}
