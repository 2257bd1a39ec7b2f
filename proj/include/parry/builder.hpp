#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "parry/config.hpp"
#include "parry/oracle.hpp"
#include "parry/substitution.hpp"

namespace parry {

// Balance bound c plus the window constants H and L used by the state
// construction.  H bounds |sum of components of psi*M| over admissible psi;
// L guarantees |phi(w)| - |w| >= 2*alpha_0 + H for every factor w, |w| >= L.
struct ConstantsBundle {
  std::int64_t c = 0;
  std::int64_t H = 0;
  std::int64_t L = 0;
};

// Closed form: c * sum_l |phi(l)|.
std::int64_t compute_H(const ParrySubstitution& sub, std::int64_t c);
// Exhaustive maximum over all vectors with entries in {-c,...,c}; the oracle
// for the closed form on small alphabets.
std::int64_t compute_H_enumerated(const ParrySubstitution& sub, std::int64_t c);

// Smallest n whose length-n prefix contains at least 2 + H/alpha_0 + c zeros.
std::int64_t compute_L(const ParrySubstitution& sub, std::int64_t c, std::int64_t H,
                       Limits lim = {});

ConstantsBundle derive_constants(const ParrySubstitution& sub, std::int64_t c,
                                 Limits lim = {});

// One element of a state: the relative Parikh vector of a length-n factor,
// its first letter, and the length-(2L+1) context window centered on the
// letter following the factor.
struct STriple {
  RelParikhVector psi;
  Letter first = 0;
  Word window;

  auto operator<=>(const STriple&) const = default;
};

// Canonically ordered, duplicate-free; equality is order-independent by
// construction.
struct StateSet {
  std::vector<STriple> triples;

  std::size_t size() const { return triples.size(); }
  bool empty() const { return triples.empty(); }
  bool operator==(const StateSet&) const = default;
  auto operator<=>(const StateSet&) const = default;

  static StateSet canonicalize(std::vector<STriple> ts);
};

// Content hash over the canonical triple sequence.
struct StateSetHash {
  std::size_t operator()(const StateSet& s) const;
};

// S(n) gathered by scanning windows with start index j >= L over the fixed
// point, with the two-stable-doublings stop rule.  Also verifies the L
// implication on every scanned factor of length L (ConstantsTooSmall).
// No restriction on n; base_state_set() is the 1..alpha_0 entry point.
StateSet window_state_set(const ParrySubstitution& sub, const ConstantsBundle& consts,
                          std::int64_t n, Limits lim = {});

// Requires 1 <= n <= alpha_0.
StateSet base_state_set(const ParrySubstitution& sub, const ConstantsBundle& consts,
                        std::int64_t n, Limits lim = {});

struct StepStats {
  std::size_t emitted = 0;  // candidate triples before deduplication
};

// The digit-transition transform: S(n) -> S(N) for <N>_U = <n>_U d.
// Throws IndexOverflow when a y-subscript leaves [-r, s].
StateSet step_transform(const ParrySubstitution& sub, const ConstantsBundle& consts,
                        const StateSet& s, std::int64_t d, StepStats* stats = nullptr);

PrelSet project_prel(const StateSet& s);

struct FixpointResult {
  // states[0] is S_0 = empty; states[d] = S(d) for d = 1..alpha_0; the rest
  // in first-discovery order.
  std::vector<StateSet> states;
  // (states.size() + has_sink) rows, alpha_0 + 1 columns.
  std::vector<std::vector<std::int32_t>> delta;
  bool has_sink = false;
  std::int32_t sink = -1;
  std::size_t mem2_size = 0;
  std::size_t iterations = 0;              // rounds run, incl. the final zero-growth one
  std::vector<std::size_t> mem2_history;   // |Mem2| after each round
};

// The Mem1/Mem2 enumeration: seeds with the base sets, repeatedly transforms
// every newly admitted set by every digit, admits results whose psi entries
// are bounded by c, and stops on the first round in which |Mem2| does not grow.
FixpointResult fixpoint_enumerate(const ParrySubstitution& sub,
                                  const ConstantsBundle& consts, Limits lim = {});

struct OutputTables {
  std::vector<std::int64_t> tau_ac;
  std::vector<std::int64_t> tau_b;
};

// tau_ac[j] = #project_prel(S_j); tau_b[j] = max pairwise infinity-norm.
// Index 0 carries the (0, 0) sentinel.
OutputTables compute_outputs(const std::vector<StateSet>& states);

}  // namespace parry
