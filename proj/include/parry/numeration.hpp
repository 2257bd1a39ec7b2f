#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "parry/config.hpp"
#include "parry/substitution.hpp"

namespace parry {

// Digits of n in the base U_j, most significant first.
// The empty digit string represents 0.
struct NormalURep {
  std::vector<std::int64_t> digits;

  bool empty() const { return digits.empty(); }
  std::size_t size() const { return digits.size(); }
  bool operator==(const NormalURep&) const = default;
};

// Greedy expansion of n; digits land in {0,...,alpha_0} with no leading zero.
NormalURep greedy_urep(USequence& useq, const mpz_class& n);
NormalURep greedy_urep(USequence& useq, std::int64_t n);

// sum d_j U_j.  Accepts non-greedy digit strings; throws DigitRange when a
// digit leaves {0,...,alpha_0}.
mpz_class urep_value(USequence& useq, const NormalURep& rep);

// True iff rep is exactly the greedy expansion of its own value.
bool is_canonical_urep(USequence& useq, const NormalURep& rep);

// (phi^k(0))^{d_k} ... (phi(0))^{d_1} 0^{d_0}; equals the fixed-point prefix
// of length urep_value(rep) when rep is greedy.
Word prefix_from_digits(const ParrySubstitution& sub, const NormalURep& rep, Limits lim = {});

// Parikh vector of that prefix, computed as sum d_j Psi(phi^j(0)) without
// materializing the word.
std::vector<mpz_class> prefix_parikh(const ParrySubstitution& sub, const NormalURep& rep);

// Space-free decimal string when alpha_0 <= 9, comma-separated otherwise.
std::string format_digits(const NormalURep& rep, std::int64_t alpha0);
NormalURep parse_digits(const std::string& text, std::int64_t alpha0);

// Incremental recognizer for greedy-valid digit strings: a string is the
// greedy representation of its value iff it has no leading zero and every
// suffix is lexicographically dominated by the quasi-greedy expansion of 1.
// The state is the sorted set of expansion positions with a live equality run.
class GreedyValidity {
 public:
  using State = std::vector<std::size_t>;

  explicit GreedyValidity(const ParrySubstitution& sub);

  State initial() const { return {}; }
  // False when the appended digit makes some suffix exceed the expansion.
  bool step(const State& in, std::int64_t digit, State& out) const;
  bool accepts(const NormalURep& rep) const;

 private:
  std::vector<std::int64_t> dominant_;
  std::size_t wrap_ = 0;
};

}  // namespace parry
