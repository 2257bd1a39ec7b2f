#include "parry/builder.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace parry {

std::int64_t compute_H(const ParrySubstitution& sub, std::int64_t c) {
  if (c < 0) throw RangeError("c must be non-negative");
  // The component sum of v*M is sum_l v_l |phi(l)|; the coordinates are
  // independent, so the maximum is attained at v_l = c.
  std::int64_t total = 0;
  for (std::size_t l = 0; l < sub.alphabet_size(); ++l) {
    total += sub.image_length(static_cast<Letter>(l));
  }
  return c * total;
}

std::int64_t compute_H_enumerated(const ParrySubstitution& sub, std::int64_t c) {
  if (c < 0) throw RangeError("c must be non-negative");
  const std::size_t a = sub.alphabet_size();
  if (a > 6) throw RangeError("enumeration oracle is for small alphabets");
  const IncidenceMatrix m = sub.incidence_matrix();
  std::vector<std::int64_t> v(a, -c);
  std::int64_t best = 0;
  while (true) {
    std::int64_t sum = 0;
    for (std::size_t l = 0; l < a; ++l) {
      std::int64_t row_sum = 0;
      for (std::size_t j = 0; j < a; ++j) row_sum += m.rows[l][j];
      sum += v[l] * row_sum;
    }
    best = std::max(best, std::abs(sum));
    std::size_t i = 0;
    while (i < a && v[i] == c) v[i++] = -c;
    if (i == a) break;
    ++v[i];
  }
  return best;
}

std::int64_t compute_L(const ParrySubstitution& sub, std::int64_t c, std::int64_t H,
                       Limits lim) {
  const std::int64_t alpha0 = sub.alpha0();
  if (alpha0 < 1) throw RangeError("alpha_0 must be positive");
  // Zero-count threshold: |u_0...u_{n-1}|_0 >= 2 + H/alpha_0 + c, in integer
  // arithmetic zeros * gain >= 2*alpha_0 + H + c * gain with gain =
  // |phi(0)| - 1.  The gain is alpha_0 except when letter 0 maps to 0^alpha_0
  // (single-letter simple substitutions), where each zero only buys
  // alpha_0 - 1 letters of expansion.
  const std::int64_t gain = sub.image_length(0) - 1;
  if (gain < 1) throw RangeError("phi(0) does not expand");
  const std::int64_t rhs = 2 * alpha0 + H + c * gain;
  FixedPointStream stream(sub);
  std::int64_t zeros = 0;
  std::int64_t n = 0;
  std::int64_t have = 0;
  while (true) {
    const std::int64_t want = std::max<std::int64_t>(2 * have, 64);
    if (want > lim.max_word_len) {
      throw ResourceLimit("zero-count threshold not reached within the prefix cap");
    }
    const Word& u = stream.prefix(want, lim);
    have = static_cast<std::int64_t>(u.size());
    while (n < have) {
      if (u[static_cast<std::size_t>(n)] == 0) ++zeros;
      ++n;
      if (zeros * gain >= rhs) return n;
    }
  }
}

ConstantsBundle derive_constants(const ParrySubstitution& sub, std::int64_t c, Limits lim) {
  if (c < 1) throw RangeError("c must be positive");
  const std::int64_t h = compute_H(sub, c);
  // Cross-check the closed form against brute force while that is cheap.
  if (sub.alphabet_size() <= 4 && c <= 8 && compute_H_enumerated(sub, c) != h) {
    throw NumericalFailure("closed form for H disagrees with enumeration");
  }
  return ConstantsBundle{c, h, compute_L(sub, c, h, lim)};
}

StateSet StateSet::canonicalize(std::vector<STriple> ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return StateSet{std::move(ts)};
}

std::size_t StateSetHash::operator()(const StateSet& s) const {
  // FNV-1a over the canonical triple sequence.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(s.triples.size());
  for (const STriple& t : s.triples) {
    for (std::int64_t x : t.psi) mix(static_cast<std::uint64_t>(x));
    mix(t.first);
    for (Letter l : t.window) mix(l);
  }
  return static_cast<std::size_t>(h);
}

namespace {

// Expansion gap |phi(w)| - |w| for each length-L factor of the scanned prefix
// must reach 2*alpha_0 + H; this is the inequality guaranteed by the choice
// of L and relied on by the index bounds of the step transform.
void verify_L_gap(const ParrySubstitution& sub, const ConstantsBundle& consts,
                  const Word& u, std::int64_t from, std::int64_t upto) {
  const std::int64_t L = consts.L;
  const std::int64_t need = 2 * sub.alpha0() + consts.H;
  if (static_cast<std::int64_t>(u.size()) < L) return;
  std::vector<std::int64_t> growth(sub.alphabet_size());
  for (std::size_t l = 0; l < growth.size(); ++l) {
    growth[l] = sub.image_length(static_cast<Letter>(l)) - 1;
  }
  std::int64_t j = std::max<std::int64_t>(from, 0);
  const std::int64_t last = std::min<std::int64_t>(upto, static_cast<std::int64_t>(u.size()) - L);
  if (j > last) return;
  std::int64_t gap = 0;
  for (std::int64_t i = 0; i < L; ++i) gap += growth[u[static_cast<std::size_t>(j + i)]];
  while (true) {
    if (gap < need) {
      throw ConstantsTooSmall("length-L factor at position " + std::to_string(j) +
                              " violates the expansion gap; L is too small");
    }
    if (j == last) break;
    gap -= growth[u[static_cast<std::size_t>(j)]];
    gap += growth[u[static_cast<std::size_t>(j + L)]];
    ++j;
  }
}

}  // namespace

StateSet window_state_set(const ParrySubstitution& sub, const ConstantsBundle& consts,
                          std::int64_t n, Limits lim) {
  if (n < 1) throw RangeError("n must be positive");
  const std::int64_t L = consts.L;
  const std::size_t a = sub.alphabet_size();
  FixedPointStream stream(sub);

  std::set<STriple> found;
  ParikhVector base(a, 0);
  ParikhVector counts(a, 0);
  bool primed = false;
  std::int64_t next_j = L;
  std::int64_t checked_gap_upto = 0;

  // Triple at window start j needs letters up to j + n + L inclusive.
  auto scan_upto = [&](std::int64_t scan_len) {
    const Word& u = stream.prefix(scan_len, lim);
    verify_L_gap(sub, consts, u, checked_gap_upto, scan_len - L);
    checked_gap_upto = std::max<std::int64_t>(scan_len - L + 1, 0);
    const std::int64_t j_last = scan_len - 1 - n - L;
    if (j_last < next_j) return;
    if (!primed) {
      for (std::int64_t i = 0; i < n; ++i) ++base[u[static_cast<std::size_t>(i)]];
      for (std::int64_t i = 0; i < n; ++i) ++counts[u[static_cast<std::size_t>(L + i)]];
      primed = true;
    } else {
      --counts[u[static_cast<std::size_t>(next_j - 1)]];
      ++counts[u[static_cast<std::size_t>(next_j - 1 + n)]];
    }
    for (std::int64_t j = next_j;; ++j) {
      STriple t;
      t.psi.resize(a);
      for (std::size_t l = 0; l < a; ++l) t.psi[l] = counts[l] - base[l];
      t.first = u[static_cast<std::size_t>(j)];
      t.window.assign(u.begin() + (j + n - L), u.begin() + (j + n + L + 1));
      found.insert(std::move(t));
      if (j == j_last) {
        next_j = j + 1;
        break;
      }
      --counts[u[static_cast<std::size_t>(j)]];
      ++counts[u[static_cast<std::size_t>(j + n)]];
    }
  };

  std::int64_t scan =
      std::min(std::max<std::int64_t>(8 * (n + 2 * L + 1), 4096), lim.max_word_len);
  scan_upto(scan);
  int stable = 0;
  std::size_t last_size = found.size();
  while (stable < 2) {
    if (scan >= lim.max_word_len) {
      throw ResourceLimit("state set did not stabilize within the prefix cap");
    }
    scan = std::min(2 * scan, lim.max_word_len);
    scan_upto(scan);
    stable = (found.size() == last_size) ? stable + 1 : 0;
    last_size = found.size();
  }
  return StateSet{std::vector<STriple>(found.begin(), found.end())};
}

StateSet base_state_set(const ParrySubstitution& sub, const ConstantsBundle& consts,
                        std::int64_t n, Limits lim) {
  if (n < 1 || n > sub.alpha0()) {
    throw RangeError("base sets exist for n in 1..alpha_0");
  }
  return window_state_set(sub, consts, n, lim);
}

StateSet step_transform(const ParrySubstitution& sub, const ConstantsBundle& consts,
                        const StateSet& s, std::int64_t d, StepStats* stats) {
  if (d < 0 || d > sub.alpha0()) throw DigitRange("digit outside {0,...,alpha_0}");
  const std::size_t a = sub.alphabet_size();
  const std::int64_t L = consts.L;
  const IncidenceMatrix m = sub.incidence_matrix();

  std::vector<Word> images(a);
  for (std::size_t l = 0; l < a; ++l) images[l] = sub.image(static_cast<Letter>(l));

  std::vector<STriple> out;
  std::size_t emitted = 0;
  std::vector<std::int64_t> psi_m(a);
  Word y;  // phi(b_{-L} ... b_L); y_i lives at y[i + r]

  for (const STriple& t : s.triples) {
    // psi * M and its component sum h.
    std::fill(psi_m.begin(), psi_m.end(), 0);
    for (std::size_t l = 0; l < a; ++l) {
      if (t.psi[l] == 0) continue;
      for (std::size_t j = 0; j < a; ++j) psi_m[j] += t.psi[l] * m.rows[l][j];
    }
    std::int64_t h = 0;
    for (std::int64_t v : psi_m) h += v;

    const Word& x = images[t.first];
    const std::int64_t p = static_cast<std::int64_t>(x.size());

    y.clear();
    std::int64_t r = -1;  // y_{-r}..y_0 = phi(b_{-L}..b_{-1})
    for (std::int64_t i = 0; i < L; ++i) {
      const Word& img = images[t.window[static_cast<std::size_t>(i)]];
      y.insert(y.end(), img.begin(), img.end());
      r += static_cast<std::int64_t>(img.size());
    }
    for (std::int64_t i = L; i < 2 * L + 1; ++i) {
      const Word& img = images[t.window[static_cast<std::size_t>(i)]];
      y.insert(y.end(), img.begin(), img.end());
    }
    const std::int64_t s_hi = static_cast<std::int64_t>(y.size()) - 1 - r;  // y_1..y_{s_hi}
    auto y_at = [&](std::int64_t idx) -> Letter {
      return y[static_cast<std::size_t>(idx + r)];
    };

    for (std::int64_t offset = 0; offset < p; ++offset) {
      const std::int64_t shift = offset + d - h;  // N - |0^{-t} phi(factor)|
      if (shift + 1 - L < -r || shift + 1 + L > s_hi) {
        throw IndexOverflow("y-subscript outside [-r, s]; increase the constant L");
      }
      STriple nt;
      nt.psi = psi_m;
      nt.psi[0] -= offset + d;
      if (shift > 0) {
        for (std::int64_t i = 1; i <= shift; ++i) ++nt.psi[y_at(i)];
      } else if (shift < 0) {
        for (std::int64_t i = shift + 1; i <= 0; ++i) --nt.psi[y_at(i)];
      }
      nt.first = x[static_cast<std::size_t>(offset)];
      nt.window.reserve(static_cast<std::size_t>(2 * L + 1));
      for (std::int64_t i = shift + 1 - L; i <= shift + 1 + L; ++i) {
        nt.window.push_back(y_at(i));
      }
      ++emitted;
      out.push_back(std::move(nt));
    }
  }
  if (stats) stats->emitted = emitted;
  return StateSet::canonicalize(std::move(out));
}

PrelSet project_prel(const StateSet& s) {
  std::vector<RelParikhVector> vs;
  vs.reserve(s.triples.size());
  for (const STriple& t : s.triples) vs.push_back(t.psi);
  return PrelSet::canonicalize(std::move(vs));
}

namespace {

bool psi_bounded(const StateSet& s, std::int64_t c) {
  for (const STriple& t : s.triples) {
    for (std::int64_t v : t.psi) {
      if (v > c || v < -c) return false;
    }
  }
  return true;
}

// 128-bit content fingerprint; Mem2 only needs identity of the result sets,
// not their contents, so it stores fingerprints instead of full copies.
struct Fingerprint {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  bool operator==(const Fingerprint&) const = default;
};

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const {
    return static_cast<std::size_t>(f.a ^ (f.b * 0x9e3779b97f4a7c15ull));
  }
};

Fingerprint fingerprint(const StateSet& s) {
  auto mix = [](std::uint64_t& h, std::uint64_t prime, std::uint64_t v) {
    h ^= v;
    h *= prime;
  };
  Fingerprint f{1469598103934665603ull, 0x2d358dccaa6c78a5ull};
  auto feed = [&](std::uint64_t v) {
    mix(f.a, 1099511628211ull, v);
    mix(f.b, 0x8bb84b93962eacc9ull, v + 0x9e3779b97f4a7c15ull);
  };
  feed(s.triples.size());
  for (const STriple& t : s.triples) {
    for (std::int64_t x : t.psi) feed(static_cast<std::uint64_t>(x));
    feed(t.first);
    for (Letter l : t.window) feed(l);
  }
  return f;
}

}  // namespace

FixpointResult fixpoint_enumerate(const ParrySubstitution& sub,
                                  const ConstantsBundle& consts, Limits lim) {
  const std::int64_t alpha0 = sub.alpha0();
  const std::size_t digit_count = static_cast<std::size_t>(alpha0) + 1;
  constexpr std::int32_t kSink = -1;

  FixpointResult fix;
  fix.states.push_back(StateSet{});  // S_0
  fix.delta.emplace_back(digit_count, 0);
  for (std::int64_t dgt = 1; dgt <= alpha0; ++dgt) {
    fix.delta[0][static_cast<std::size_t>(dgt)] = static_cast<std::int32_t>(dgt);
  }

  // The registry holds state indices bucketed by hash; membership compares
  // against fix.states directly so every set is stored exactly once.
  std::unordered_map<std::size_t, std::vector<std::int32_t>> registry;
  auto registry_find = [&](const StateSet& s, std::size_t h) -> std::int32_t {
    auto it = registry.find(h);
    if (it == registry.end()) return -1;
    for (std::int32_t idx : it->second) {
      if (fix.states[static_cast<std::size_t>(idx)] == s) return idx;
    }
    return -1;
  };

  // Mem2 as (result fingerprint -> digits seen with it); its size is the sum
  // of flags.  Mem2 only drives the stop criterion.
  std::unordered_map<Fingerprint, std::vector<bool>, FingerprintHash> mem2;
  std::size_t mem2_count = 0;
  auto mem2_insert = [&](const StateSet& s, std::int64_t dgt) {
    auto& flags = mem2.try_emplace(fingerprint(s), digit_count, false).first->second;
    if (!flags[static_cast<std::size_t>(dgt)]) {
      flags[static_cast<std::size_t>(dgt)] = true;
      ++mem2_count;
      return true;
    }
    return false;
  };

  std::int64_t stored_triples = 0;
  auto admit = [&](StateSet&& s, std::size_t h) {
    const auto idx = static_cast<std::int32_t>(fix.states.size());
    if (idx > lim.max_states) {
      throw ResourceLimit("state cap exceeded during fixpoint enumeration");
    }
    stored_triples += static_cast<std::int64_t>(s.size());
    if (stored_triples > lim.max_total_triples) {
      throw ResourceLimit("stored-triples cap exceeded during fixpoint enumeration");
    }
    registry[h].push_back(idx);
    fix.states.push_back(std::move(s));
    fix.delta.emplace_back(digit_count, kSink);
    return idx;
  };

  // Base sets take indices 1..alpha_0 even if two of them coincide; the
  // registry keeps the first index so later transforms reuse it.
  std::vector<std::int32_t> wave;
  for (std::int64_t n = 1; n <= alpha0; ++n) {
    StateSet base = base_state_set(sub, consts, n, lim);
    if (!psi_bounded(base, consts.c)) {
      throw ConstantsTooSmall("base set S(" + std::to_string(n) +
                              ") exceeds the configured balance bound c");
    }
    const std::size_t h = StateSetHash{}(base);
    for (std::int64_t dgt = 0; dgt <= alpha0; ++dgt) mem2_insert(base, dgt);
    const bool duplicate = registry_find(base, h) >= 0;
    const std::int32_t idx = admit(std::move(base), h);
    if (duplicate) registry[h].pop_back();  // keep the first index authoritative
    wave.push_back(idx);
  }

  bool used_sink = false;
  while (true) {
    ++fix.iterations;
    bool grew = false;
    std::vector<std::int32_t> next_wave;
    for (std::int32_t j : wave) {
      for (std::int64_t dgt = 0; dgt <= alpha0; ++dgt) {
        StateSet result = step_transform(sub, consts, fix.states[static_cast<std::size_t>(j)], dgt);
        grew = mem2_insert(result, dgt) || grew;
        const std::size_t h = StateSetHash{}(result);
        std::int32_t target = registry_find(result, h);
        if (target < 0) {
          if (psi_bounded(result, consts.c)) {
            target = admit(std::move(result), h);
            next_wave.push_back(target);
          } else {
            target = kSink;
            used_sink = true;
          }
        }
        fix.delta[static_cast<std::size_t>(j)][static_cast<std::size_t>(dgt)] = target;
      }
    }
    fix.mem2_history.push_back(mem2_count);
    // Equivalent to "stop when |Mem2| stops growing"; the wave check keeps
    // delta total even if two distinct sets ever shared a fingerprint.
    if (!grew && next_wave.empty()) break;
    wave = std::move(next_wave);
  }
  fix.mem2_size = mem2_count;

  if (used_sink) {
    fix.has_sink = true;
    fix.sink = static_cast<std::int32_t>(fix.states.size());
    for (auto& row : fix.delta) {
      for (auto& target : row) {
        if (target == kSink) target = fix.sink;
      }
    }
    fix.delta.emplace_back(digit_count, fix.sink);
  }
  return fix;
}

OutputTables compute_outputs(const std::vector<StateSet>& states) {
  OutputTables tables;
  tables.tau_ac.reserve(states.size());
  tables.tau_b.reserve(states.size());
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (j == 0) {
      tables.tau_ac.push_back(0);
      tables.tau_b.push_back(0);
      continue;
    }
    const PrelSet prel = project_prel(states[j]);
    tables.tau_ac.push_back(static_cast<std::int64_t>(prel.size()));
    tables.tau_b.push_back(max_infinity_spread(prel));
  }
  return tables;
}

}  // namespace parry
