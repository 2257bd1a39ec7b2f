#include "parry/oracle.hpp"

#include <algorithm>
#include <set>

#include "parry/numeration.hpp"

namespace parry {

bool PrelSet::contains(const RelParikhVector& v) const {
  return std::binary_search(vectors.begin(), vectors.end(), v);
}

PrelSet PrelSet::canonicalize(std::vector<RelParikhVector> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return PrelSet{std::move(vs)};
}

ParikhVector parikh(const Word& w, std::size_t alphabet_size) {
  ParikhVector counts(alphabet_size, 0);
  for (Letter l : w) {
    if (l >= alphabet_size) throw RangeError("letter out of range");
    ++counts[l];
  }
  return counts;
}

RelParikhVector rel_parikh(const ParrySubstitution& sub, const Word& w) {
  const std::size_t a = sub.alphabet_size();
  RelParikhVector rel = parikh(w, a);
  USequence useq(sub);
  const NormalURep rep = greedy_urep(useq, static_cast<std::int64_t>(w.size()));
  const auto prefix_counts = prefix_parikh(sub, rep);
  for (std::size_t l = 0; l < a; ++l) {
    // Counts are bounded by |w|, so the difference fits comfortably.
    rel[l] -= static_cast<std::int64_t>(prefix_counts[l].get_si());
  }
  return rel;
}

namespace {

// Slides length-n windows over u, feeding each window's relative Parikh
// vector (counts minus the counts of the length-n prefix) to the visitor.
// Keeps its own position so scans can be extended incrementally.
class WindowScanner {
 public:
  WindowScanner(const ParrySubstitution& sub, std::int64_t n, std::int64_t j_min)
      : stream_(sub),
        a_(sub.alphabet_size()),
        n_(n),
        next_j_(j_min),
        counts_(a_, 0),
        base_(a_, 0) {
    if (n_ < 1) throw RangeError("window length must be positive");
  }

  // Visits every window start j in [next_j_, scan_len - n] in order.
  template <typename Visit>
  void advance_to(std::int64_t scan_len, Limits lim, Visit&& visit) {
    if (scan_len - n_ < next_j_) {
      stream_.prefix(std::min(scan_len, lim.max_word_len), lim);
      return;
    }
    const Word& u = stream_.prefix(scan_len, lim);
    if (!primed_) {
      for (std::int64_t i = 0; i < n_; ++i) ++base_[u[static_cast<std::size_t>(i)]];
      for (std::int64_t i = 0; i < n_; ++i) {
        ++counts_[u[static_cast<std::size_t>(next_j_ + i)]];
      }
      primed_ = true;
    } else {
      // counts_ currently describes the window at next_j_ - 1.
      --counts_[u[static_cast<std::size_t>(next_j_ - 1)]];
      ++counts_[u[static_cast<std::size_t>(next_j_ - 1 + n_)]];
    }
    for (std::int64_t j = next_j_;; ++j) {
      visit(j, u, counts_, base_);
      if (j + n_ >= scan_len) {
        next_j_ = j + 1;
        break;
      }
      --counts_[u[static_cast<std::size_t>(j)]];
      ++counts_[u[static_cast<std::size_t>(j + n_)]];
    }
  }

 private:
  FixedPointStream stream_;
  std::size_t a_;
  std::int64_t n_;
  std::int64_t next_j_;
  bool primed_ = false;
  ParikhVector counts_;
  ParikhVector base_;
};

}  // namespace

PrelSet prel_set(const ParrySubstitution& sub, std::int64_t n, std::int64_t scan_len,
                 std::int64_t j_min, Limits lim) {
  if (scan_len < n) throw RangeError("scan length shorter than the window");
  std::set<RelParikhVector> found;
  RelParikhVector rel(sub.alphabet_size());
  WindowScanner scanner(sub, n, j_min);
  scanner.advance_to(scan_len, lim,
                     [&](std::int64_t, const Word&, const ParikhVector& counts,
                         const ParikhVector& base) {
                       for (std::size_t l = 0; l < rel.size(); ++l) {
                         rel[l] = counts[l] - base[l];
                       }
                       found.insert(rel);
                     });
  return PrelSet{std::vector<RelParikhVector>(found.begin(), found.end())};
}

PrelSet prel_set_stable(const ParrySubstitution& sub, std::int64_t n, Limits lim) {
  if (n < 1) throw RangeError("n must be positive");
  std::set<RelParikhVector> found;
  RelParikhVector rel(sub.alphabet_size());
  WindowScanner scanner(sub, n, 0);
  auto visit = [&](std::int64_t, const Word&, const ParikhVector& counts,
                   const ParikhVector& base) {
    for (std::size_t l = 0; l < rel.size(); ++l) rel[l] = counts[l] - base[l];
    found.insert(rel);
  };

  std::int64_t scan = std::min(std::max<std::int64_t>(8 * n, 4096), lim.max_word_len);
  scanner.advance_to(scan, lim, visit);
  int stable = 0;
  std::size_t last_size = found.size();
  while (stable < 2) {
    if (scan >= lim.max_word_len) {
      throw ResourceLimit("window set did not stabilize within the prefix cap");
    }
    scan = std::min(2 * scan, lim.max_word_len);
    scanner.advance_to(scan, lim, visit);
    stable = (found.size() == last_size) ? stable + 1 : 0;
    last_size = found.size();
  }
  return PrelSet{std::vector<RelParikhVector>(found.begin(), found.end())};
}

std::int64_t ac_bruteforce(const ParrySubstitution& sub, std::int64_t n, Limits lim) {
  return static_cast<std::int64_t>(prel_set_stable(sub, n, lim).size());
}

std::int64_t max_infinity_spread(const PrelSet& set) {
  if (set.vectors.size() < 2) return 0;
  const std::size_t a = set.vectors.front().size();
  std::int64_t spread = 0;
  for (std::size_t l = 0; l < a; ++l) {
    std::int64_t lo = set.vectors.front()[l];
    std::int64_t hi = lo;
    for (const auto& v : set.vectors) {
      lo = std::min(lo, v[l]);
      hi = std::max(hi, v[l]);
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

std::int64_t balance_bruteforce(const ParrySubstitution& sub, std::int64_t n, Limits lim) {
  return max_infinity_spread(prel_set_stable(sub, n, lim));
}

CEstimate estimate_c(const ParrySubstitution& sub, std::int64_t cap_len,
                     CEstimateOptions opts) {
  if (cap_len < 2) throw RangeError("cap too small");
  FixedPointStream stream(sub);

  Limits scan_lim;
  scan_lim.max_word_len = cap_len;

  // Max |counts - base| over all windows of length n within the first s letters.
  auto scan_round = [&](std::int64_t s) {
    const Word& u = stream.prefix(s, scan_lim);
    const std::size_t a = sub.alphabet_size();
    std::int64_t best = 0;
    const std::int64_t n_hi = std::min<std::int64_t>(s / 2, opts.max_window);
    std::vector<std::int64_t> diff(a);
    for (std::int64_t n = 1; n <= n_hi; ++n) {
      std::fill(diff.begin(), diff.end(), 0);
      for (std::int64_t j = 1; j + n <= s; ++j) {
        // Window j relative to window j-1: u[j-1] leaves, u[j+n-1] enters.
        const Letter out_l = u[static_cast<std::size_t>(j - 1)];
        const Letter in_l = u[static_cast<std::size_t>(j + n - 1)];
        if (out_l == in_l) continue;
        --diff[out_l];
        ++diff[in_l];
        best = std::max({best, std::abs(diff[out_l]), std::abs(diff[in_l])});
      }
    }
    return best;
  };

  std::int64_t scan = std::min(opts.initial_scan, cap_len);
  std::int64_t c = scan_round(scan);
  int stable = 0;
  while (stable < 2) {
    if (scan >= cap_len) return CEstimate{c, CEstimateStatus::StillGrowing};
    scan = std::min(2 * scan, cap_len);
    const std::int64_t next = scan_round(scan);
    stable = (next == c) ? stable + 1 : 0;
    c = next;
  }
  return CEstimate{c, CEstimateStatus::Stable};
}

}  // namespace parry
