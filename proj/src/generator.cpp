#include "admo/generator.hpp"

#include <random>

namespace admo {

namespace {

// rng() % n is used instead of a distribution: mt19937_64 output is pinned by
// the standard, distributions are not.
uint64_t pick(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

Term gen_term(std::mt19937_64& rng, const GeneratorParams& params, int depth_left) {
  if (depth_left > 1 && pick(rng, 3) == 0)
    return Term::app("f", {gen_term(rng, params, depth_left - 1)});
  std::string name(1, static_cast<char>('a' + pick(rng, params.num_constants)));
  return Term::app(name);
}

}  // namespace

RewriteSystem generate_random_system(uint64_t seed, const GeneratorParams& params) {
  std::mt19937_64 rng(seed);
  RewriteSystem R;
  for (int i = 0; i < params.num_constants; ++i)
    R.signature.declare_function(std::string(1, static_cast<char>('a' + i)), 0);
  R.signature.declare_function("f", 1);
  R.signature.declare_predicate("P", 1);
  int count = params.min_rules +
              static_cast<int>(pick(rng, static_cast<uint64_t>(params.max_rules -
                                                               params.min_rules + 1)));
  for (int i = 0; i < count; ++i) {
    Term lhs = gen_term(rng, params, params.max_depth);
    Term rhs = gen_term(rng, params, params.max_depth);
    R.add_rule(std::move(lhs), std::move(rhs));
  }
  return R;
}

}  // namespace admo
