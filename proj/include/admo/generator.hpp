#pragma once

#include <cstdint>

#include "admo/rewriting.hpp"

namespace admo {

/// Parameters of the ground random-system generator used by the property
/// suites: constants a..e, one unary symbol f, small rule counts and depths.
struct GeneratorParams {
  int min_rules = 2;
  int max_rules = 6;
  int max_depth = 2;  // lhs/rhs depth
  int num_constants = 5;
};

/// Deterministic function of the seed; every emitted rule is well-formed and
/// ground with a non-variable left side.
RewriteSystem generate_random_system(uint64_t seed, const GeneratorParams& params = {});

}  // namespace admo
