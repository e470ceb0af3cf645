#pragma once

#include <cstdint>

#include "mcf4/forms.hpp"

// Independent reference computations: these deliberately avoid the closed-form
// paths they are used to cross-check.

namespace mcf4::oracles {

struct ComassSample {
  Vec4 u;
  Vec4 v;
  double value = 0.0;
};

struct ComassOracleResult {
  double sampled_max = 0.0;   // best value seen before polishing
  double comass = 0.0;        // after local maximization
  ComassSample argmax;        // polished maximizer
};

/// Comass by sampling unit simple 2-vectors u ^ v and polishing the best
/// candidates with a monotone alternating maximization.
ComassOracleResult comass_by_sampling(const forms::TwoForm4& form, int samples = 100000,
                                      std::uint64_t seed = 0x5eed, int polish_starts = 8,
                                      int polish_iters = 400);

}  // namespace mcf4::oracles
