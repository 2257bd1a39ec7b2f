#pragma once

#include <cstdint>
#include <vector>

#include "parry/config.hpp"
#include "parry/substitution.hpp"

namespace parry {

// Letter counts of a finite word.
using ParikhVector = std::vector<std::int64_t>;
// Psi(w) minus the Parikh vector of the fixed point's prefix of length |w|.
// Components always sum to zero.
using RelParikhVector = std::vector<std::int64_t>;

// Canonically ordered, duplicate-free set of relative Parikh vectors.
struct PrelSet {
  std::vector<RelParikhVector> vectors;

  std::size_t size() const { return vectors.size(); }
  bool contains(const RelParikhVector& v) const;
  bool operator==(const PrelSet&) const = default;

  static PrelSet canonicalize(std::vector<RelParikhVector> vs);
};

ParikhVector parikh(const Word& w, std::size_t alphabet_size);

RelParikhVector rel_parikh(const ParrySubstitution& sub, const Word& w);

// Relative Parikh vectors of all length-n windows of the prefix of length
// scan_len, windows starting at j >= j_min.
PrelSet prel_set(const ParrySubstitution& sub, std::int64_t n, std::int64_t scan_len,
                 std::int64_t j_min = 0, Limits lim = {});

// Same but the scan length doubles until the set is unchanged across two
// consecutive doublings; throws ResourceLimit when the cap is hit first.
PrelSet prel_set_stable(const ParrySubstitution& sub, std::int64_t n, Limits lim = {});

// AC(n) and B(n) by sliding-window enumeration with the stabilization rule.
std::int64_t ac_bruteforce(const ParrySubstitution& sub, std::int64_t n, Limits lim = {});
std::int64_t balance_bruteforce(const ParrySubstitution& sub, std::int64_t n, Limits lim = {});

// Max pairwise infinity-norm distance within a set (0 for singletons/empty).
std::int64_t max_infinity_spread(const PrelSet& set);

enum class CEstimateStatus { Stable, StillGrowing };

struct CEstimate {
  std::int64_t c = 0;
  CEstimateStatus status = CEstimateStatus::StillGrowing;
};

struct CEstimateOptions {
  std::int64_t initial_scan = 4096;
  // Window lengths probed per round; larger catches late-growing imbalance
  // at proportional cost.
  std::int64_t max_window = 512;
};

// Empirical balance bound: max |component| of rel_parikh over scanned window
// lengths and positions.  The scan length doubles until the maximum is
// unchanged across two doublings (Stable) or cap_len is reached (StillGrowing).
CEstimate estimate_c(const ParrySubstitution& sub, std::int64_t cap_len,
                     CEstimateOptions opts = {});

}  // namespace parry
