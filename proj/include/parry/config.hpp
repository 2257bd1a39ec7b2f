#pragma once

#include <cstdint>

namespace parry {

// Resource caps for everything that materializes words or enumerates states.
// Defaults suit desk-scale runs. The CLI also reads PARRYAC_MAX_PREFIX,
// PARRYAC_MAX_STATES and PARRYAC_MAX_TRIPLES from the environment.
struct Limits {
  std::int64_t max_word_len = std::int64_t{1} << 22;
  std::int64_t max_states = 250000;
  // Memory guard: total triples stored across all admitted states.
  std::int64_t max_total_triples = std::int64_t{1} << 22;

  static Limits from_env();
};

}  // namespace parry
