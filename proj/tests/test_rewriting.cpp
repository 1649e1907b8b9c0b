#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "admo/generator.hpp"
#include "admo/rewriting.hpp"
#include "helpers.hpp"

using namespace admo;
using namespace admo::testing;

namespace {

// Independent one-step oracle: naive recursive matcher and rewriter, sharing
// no code with the library's matching or position machinery.
bool oracle_match(const Term& pat, const Term& sub, std::map<std::string, Term>& binding) {
  if (pat.kind == Term::Kind::Var) {
    auto it = binding.find(pat.name);
    if (it != binding.end()) return it->second == sub;
    binding.emplace(pat.name, sub);
    return true;
  }
  if (pat.kind != sub.kind || pat.name != sub.name || pat.args.size() != sub.args.size())
    return pat.kind == Term::Kind::Bound && sub.kind == Term::Kind::Bound &&
           pat.index == sub.index;
  for (size_t i = 0; i < pat.args.size(); ++i)
    if (!oracle_match(pat.args[i], sub.args[i], binding)) return false;
  return true;
}

Term oracle_apply(const Term& t, const std::map<std::string, Term>& binding) {
  if (t.kind == Term::Kind::Var) {
    auto it = binding.find(t.name);
    return it == binding.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = oracle_apply(a, binding);
  return out;
}

void oracle_rewrites(const RewriteSystem& R, const Term& t, std::vector<Term>& out) {
  for (const auto& rule : R.rules) {
    std::map<std::string, Term> binding;
    if (oracle_match(rule.lhs, t, binding)) out.push_back(oracle_apply(rule.rhs, binding));
  }
  for (size_t i = 0; i < t.args.size(); ++i) {
    std::vector<Term> sub;
    oracle_rewrites(R, t.args[i], sub);
    for (const auto& s : sub) {
      Term copy = t;
      copy.args[i] = s;
      out.push_back(copy);
    }
  }
}

std::vector<Term> sorted_unique(std::vector<Term> v) {
  std::sort(v.begin(), v.end(), Less<Term>{});
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Term> one_step_terms(const RewriteSystem& R, const Term& t) {
  std::vector<Term> out;
  for (const auto& os : one_step_reducts(R, t)) out.push_back(os.result);
  return sorted_unique(std::move(out));
}

}  // namespace

TEST_CASE("one-step reducts match the spec examples and the oracle") {
  auto failure = failure_problem().system;
  Term a = term_of(failure, "a");
  CHECK(one_step_terms(failure, a) ==
        sorted_unique({term_of(failure, "b"), term_of(failure, "b'")}));

  auto arith = arith_problem().system;
  Term two_times_two = term_of(arith, "times(2, 2)");
  std::vector<Term> expect{term_of(arith, "plus(times(1, 2), 2)")};
  CHECK(one_step_terms(arith, two_times_two) == expect);

  CHECK(one_step_terms(arith, term_of(arith, "0")).empty());
}

TEST_CASE("property: one-step reducts agree with the brute-force oracle") {
  GeneratorParams params;
  for (uint64_t seed = 0; seed < 80; ++seed) {
    RewriteSystem R = generate_random_system(seed, params);
    for (const Term& t : default_universe(R, {}, 3)) {
      std::vector<Term> naive;
      oracle_rewrites(R, t, naive);
      CHECK(one_step_terms(R, t) == sorted_unique(std::move(naive)));
    }
  }
  // And on the arithmetic system, where rules have variables.
  auto arith = arith_problem().system;
  for (const char* text : {"times(2, 2)", "plus(plus(0, 1), times(1, 0))", "S(times(0, 2))"}) {
    Term t = term_of(arith, text);
    std::vector<Term> naive;
    oracle_rewrites(arith, t, naive);
    CHECK(one_step_terms(arith, t) == sorted_unique(std::move(naive)));
  }
}

TEST_CASE("reducts: bounded closure") {
  Budget budget;
  auto failure = failure_problem().system;
  auto rs = reducts(failure, term_of(failure, "a"), budget);
  CHECK(rs.complete);
  CHECK(rs.elements() ==
        sorted_unique({term_of(failure, "a"), term_of(failure, "b"), term_of(failure, "b'")}));

  auto loop = loop_problem().system;
  auto rl = reducts(loop, term_of(loop, "a"), budget);
  CHECK(rl.complete);
  CHECK(rl.size() == 4);  // {a, b, c, d} despite the a <-> b cycle

  auto arith = arith_problem().system;
  auto ra = reducts(arith, term_of(arith, "times(2, 2)"), budget);
  CHECK(ra.complete);
  CHECK(ra.contains(term_of(arith, "4")));
  auto d = ra.derivation_to(term_of(arith, "4"));
  CHECK(validate_derivation(arith, d));
}

TEST_CASE("reducts monotonicity and fixed point") {
  auto arith = arith_problem().system;
  Term seed = term_of(arith, "times(2, 2)");
  auto small = reducts(arith, seed, Budget{4, 64});
  auto large = reducts(arith, seed, Budget{10000, 64});
  CHECK_FALSE(small.complete);
  for (const auto& t : small.elements()) CHECK(large.contains(t));
  CHECK(large.complete);
  for (const auto& t : large.elements())
    for (const auto& os : one_step_reducts(arith, t)) CHECK(large.contains(os.result));
}

TEST_CASE("joinable") {
  Budget budget;
  auto failure = failure_problem().system;
  auto j1 = joinable(failure, term_of(failure, "b"), term_of(failure, "b'"), budget);
  CHECK_FALSE(j1.meet);
  CHECK(j1.exact);

  auto loop_e = loop_e_problem().system;
  auto j2 = joinable(loop_e, term_of(loop_e, "c"), term_of(loop_e, "d"), budget);
  REQUIRE(j2.meet);
  CHECK(*j2.meet == term_of(loop_e, "e"));
  CHECK(validate_derivation(loop_e, j2.from_left));
  CHECK(validate_derivation(loop_e, j2.from_right));

  Term t = term_of(failure, "b");
  auto j3 = joinable(failure, t, t, budget);
  REQUIRE(j3.meet);
  CHECK(*j3.meet == t);
}

TEST_CASE("convertible: peak through the failure system") {
  Budget budget;
  auto failure = failure_problem().system;
  auto conv = convertible(failure, term_of(failure, "b"), term_of(failure, "b'"), budget);
  REQUIRE(conv.seq);
  const auto& s = *conv.seq;
  REQUIRE(s.objects.size() == 3);
  CHECK(s.objects[0] == term_of(failure, "b"));
  CHECK(s.objects[1] == term_of(failure, "a"));
  CHECK(s.objects[2] == term_of(failure, "b'"));
  CHECK(s.steps[0].dir == Direction::Backward);
  CHECK(s.steps[1].dir == Direction::Forward);
  CHECK(validate_sequence(failure, s));
  CHECK(find_peaks(s) == std::vector<size_t>{1});
  CHECK_FALSE(is_valley(s));
}

TEST_CASE("convertible: backward-only chain in arithmetic") {
  Budget budget;
  auto arith = arith_problem().system;
  auto conv = convertible(arith, prop_of(arith, "eq(4, 4)"),
                          prop_of(arith, "eq(times(2, 2), 4)"), budget);
  REQUIRE(conv.seq);
  CHECK(conv.seq->objects.size() == 8);  // seven rewrite steps
  for (const auto& st : conv.seq->steps) CHECK(st.dir == Direction::Backward);
  CHECK(validate_sequence(arith, *conv.seq));
  CHECK(is_valley(*conv.seq));
}

TEST_CASE("convertible: distinct inert constants are not convertible") {
  Budget budget;
  auto pf = parse_problem("sig c0/0, d0/0;\n");
  auto conv = convertible(pf.system, term_of(pf.system, "c0"), term_of(pf.system, "d0"), budget);
  CHECK_FALSE(conv.seq);
  CHECK(conv.exact);
}

TEST_CASE("peaks and valleys") {
  Budget budget;
  auto failure = failure_problem().system;
  // a -> b alone is a valley.
  auto conv = convertible(failure, term_of(failure, "a"), term_of(failure, "b"), budget);
  REQUIRE(conv.seq);
  CHECK(conv.seq->steps.size() == 1);
  CHECK(find_peaks(*conv.seq).empty());
  CHECK(is_valley(*conv.seq));
  CHECK(valley_floor(*conv.seq) == term_of(failure, "b"));

  ConversionSequence<Term> single{{term_of(failure, "a")}, {}};
  CHECK(find_peaks(single).empty());
  CHECK(is_valley(single));
}

TEST_CASE("property: a sequence has no peak iff it is a valley") {
  GeneratorParams params;
  Budget budget{600, 24};
  int checked = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    RewriteSystem R = generate_random_system(seed, params);
    auto universe = default_universe(R, {}, 2);
    for (size_t i = 0; i < universe.size(); ++i) {
      for (size_t j = i + 1; j < universe.size() && checked < 400; ++j) {
        auto conv = convertible(R, universe[i], universe[j], budget);
        if (!conv.seq) continue;
        ++checked;
        CHECK(validate_sequence(R, *conv.seq));
        CHECK(find_peaks(*conv.seq).empty() == is_valley(*conv.seq));
      }
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("critical pairs") {
  auto failure = failure_problem().system;
  auto cps = critical_pairs(failure);
  REQUIRE(cps.size() == 1);
  CHECK(cps[0].source == term_of(failure, "a"));
  CHECK(cps[0].left == term_of(failure, "b"));
  CHECK(cps[0].right == term_of(failure, "b'"));

  auto arith = arith_problem().system;
  CHECK(critical_pairs(arith).empty());

  auto loop = loop_problem().system;
  auto lps = critical_pairs(loop);
  REQUIRE(lps.size() == 2);
  CHECK(lps[0].source == term_of(loop, "a"));
  CHECK(lps[0].left == term_of(loop, "b"));
  CHECK(lps[0].right == term_of(loop, "c"));
  CHECK(lps[1].source == term_of(loop, "b"));
  CHECK(lps[1].left == term_of(loop, "a"));
  CHECK(lps[1].right == term_of(loop, "d"));
}

TEST_CASE("local confluence analyzer") {
  Budget budget;
  auto failure = failure_problem().system;
  auto v1 = locally_confluent(failure, budget);
  CHECK(v1.fails());
  REQUIRE(v1.nonjoinable);
  CHECK(v1.nonjoinable->left == term_of(failure, "b"));
  CHECK(v1.nonjoinable->right == term_of(failure, "b'"));

  auto loop = loop_problem().system;
  CHECK(locally_confluent(loop, budget).holds());

  auto arith = arith_problem().system;
  CHECK(locally_confluent(arith, budget).holds());
}

TEST_CASE("confluence analyzer") {
  Budget budget;
  auto failure = failure_problem().system;
  auto universe = default_universe(failure, {}, 3);
  auto v1 = confluent(failure, universe, budget);
  CHECK(v1.fails());
  REQUIRE(v1.nonjoinable);
  CHECK(v1.nonjoinable->seed == term_of(failure, "a"));
  CHECK(v1.nonjoinable->left == term_of(failure, "b"));
  CHECK(v1.nonjoinable->right == term_of(failure, "b'"));
  CHECK(validate_derivation(failure, v1.nonjoinable->to_left));
  CHECK(validate_derivation(failure, v1.nonjoinable->to_right));

  auto loop = loop_problem().system;
  auto v2 = confluent(loop, default_universe(loop, {}, 3), budget);
  CHECK(v2.fails());
  REQUIRE(v2.nonjoinable);
  CHECK(v2.nonjoinable->left == term_of(loop, "c"));
  CHECK(v2.nonjoinable->right == term_of(loop, "d"));

  auto loop_e = loop_e_problem().system;
  CHECK(confluent(loop_e, default_universe(loop_e, {}, 3), budget).holds());
}

TEST_CASE("termination analyzer") {
  Budget budget;
  auto loop = loop_problem().system;
  auto v1 = terminating(loop, default_universe(loop, {}, 3), 50, budget);
  CHECK(v1.fails());
  REQUIRE(v1.nontermination);
  CHECK(v1.nontermination->is_cycle);
  const auto& cyc = v1.nontermination->derivation;
  CHECK(cyc.start == term_of(loop, "a"));
  REQUIRE(cyc.steps.size() == 2);
  CHECK(cyc.steps[0].result == term_of(loop, "b"));
  CHECK(cyc.steps[1].result == term_of(loop, "a"));
  CHECK(validate_derivation(loop, cyc));

  auto failure = failure_problem().system;
  CHECK(terminating(failure, default_universe(failure, {}, 3), 50, budget).holds());

  auto arith = arith_problem().system;
  std::vector<Term> numerals;
  Signature sig = arith.signature;
  for (int n = 0; n <= 12; ++n) numerals.push_back(parse_term(std::to_string(n), sig));
  CHECK(terminating(arith, numerals, 50, budget).holds());
  CHECK(terminating(arith, default_universe(arith, {}, 3), 200, budget).holds());
}

TEST_CASE("empirical reduction ordering") {
  Budget budget;
  auto failure = failure_problem().system;
  auto ord = empirical_ordering(failure, default_universe(failure, {}, 3), budget);
  REQUIRE(ord.order);
  CHECK(ord.order->greater(term_of(failure, "a"), term_of(failure, "b")));
  CHECK(ord.order->greater(term_of(failure, "a"), term_of(failure, "b'")));
  CHECK_FALSE(ord.order->greater(term_of(failure, "b"), term_of(failure, "b'")));
  CHECK_FALSE(ord.order->greater(term_of(failure, "b'"), term_of(failure, "b")));

  auto arith = arith_problem().system;
  Term t11 = term_of(arith, "times(1, 1)");
  auto orda = empirical_ordering(arith, std::vector<Term>{t11}, budget);
  REQUIRE(orda.order);
  for (const auto& os : one_step_reducts(arith, t11)) {
    CHECK(orda.order->greater(t11, os.result));
    CHECK_FALSE(orda.order->greater(os.result, t11));
  }
  CHECK(orda.order->greater(t11, term_of(arith, "1")));

  auto loop = loop_problem().system;
  auto ordl = empirical_ordering(loop, default_universe(loop, {}, 3), budget);
  CHECK(ordl.cycle_found);
  CHECK_FALSE(ordl.order);
}

TEST_CASE("multiset extension of the reduction ordering") {
  Budget budget;
  auto arith = arith_problem().system;
  Term t11 = term_of(arith, "times(1, 1)");
  Term t01 = term_of(arith, "times(0, 1)");
  auto ord = empirical_ordering(arith, std::vector<Term>{t11, t01}, budget);
  REQUIRE(ord.order);
  Term one = term_of(arith, "1");
  Term zero = term_of(arith, "0");
  CHECK(multiset_greater(*ord.order, {t11}, {one}));
  CHECK(multiset_greater(*ord.order, {t11}, {t01, zero}) ==
        (ord.order->greater(t11, t01) && ord.order->greater(t11, zero)));
  CHECK(multiset_greater(*ord.order, {t11, one}, {one}));       // removal decreases
  CHECK_FALSE(multiset_greater(*ord.order, {one}, {one}));      // irreflexive
  CHECK_FALSE(multiset_greater(*ord.order, {zero}, {t11}));
}

TEST_CASE("property: Newman's corollary on random ground systems") {
  GeneratorParams params;
  Budget budget{600, 24};
  int eligible = 0;
  for (uint64_t seed = 0; seed < 80; ++seed) {
    RewriteSystem R = generate_random_system(seed, params);
    auto universe = default_universe(R, {}, 3);
    auto lc = locally_confluent(R, budget);
    auto term = terminating(R, universe, 64, budget);
    if (!lc.holds() || !term.holds()) continue;
    ++eligible;
    auto conf = confluent(R, universe, budget);
    CHECK_MESSAGE(conf.holds(), "locally confluent and terminating system (seed ",
                  seed, ") must be confluent");
  }
  CHECK(eligible >= 20);
}

TEST_CASE("convertibility implies joinability on confluent systems") {
  GeneratorParams params;
  Budget budget{600, 24};
  int checked = 0;
  for (uint64_t seed = 0; seed < 60 && checked < 120; ++seed) {
    RewriteSystem R = generate_random_system(seed, params);
    auto universe = default_universe(R, {}, 3);
    auto conf = confluent(R, universe, budget);
    if (!conf.holds()) continue;
    for (size_t i = 0; i < universe.size(); ++i) {
      for (size_t j = i + 1; j < universe.size(); ++j) {
        auto conv = convertible(R, universe[i], universe[j], budget);
        if (!conv.seq) continue;
        auto join = joinable(R, universe[i], universe[j], budget);
        CHECK_MESSAGE(join.meet.has_value(), "seed ", seed, ": convertible pair not joinable");
        ++checked;
      }
    }
  }
  CHECK(checked >= 30);
}
