#include "parry/config.hpp"

#include <cstdlib>

#include "parry/errors.hpp"

namespace parry {

Limits Limits::from_env() {
  Limits lim;
  if (const char* s = std::getenv("PARRYAC_MAX_PREFIX")) {
    lim.max_word_len = std::strtoll(s, nullptr, 10);
  }
  if (const char* s = std::getenv("PARRYAC_MAX_STATES")) {
    lim.max_states = std::strtoll(s, nullptr, 10);
  }
  if (const char* s = std::getenv("PARRYAC_MAX_TRIPLES")) {
    lim.max_total_triples = std::strtoll(s, nullptr, 10);
  }
  if (lim.max_word_len < 1 || lim.max_states < 1 || lim.max_total_triples < 1) {
    throw RangeError("resource caps must be positive");
  }
  return lim;
}

}  // namespace parry
