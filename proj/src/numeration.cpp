#include "parry/numeration.hpp"

#include <cassert>
#include <sstream>

namespace parry {

namespace {

// Fast path when n and every needed U_j fit in int64.
bool greedy_small(USequence& useq, std::int64_t n, NormalURep& out) {
  std::size_t k = 0;
  while (true) {
    const std::int64_t v = useq.value_i64(k + 1);
    if (v < 0) return false;  // U would overflow; caller falls back to mpz
    if (v > n) break;
    ++k;
  }
  std::int64_t rem = n;
  out.digits.resize(k + 1);
  for (std::size_t j = k + 1; j-- > 0;) {
    const std::int64_t u = useq.value_i64(j);
    const std::int64_t d = rem / u;
    out.digits[k - j] = d;
    rem -= d * u;
  }
  assert(rem == 0);
  return true;
}

}  // namespace

NormalURep greedy_urep(USequence& useq, const mpz_class& n) {
  if (n < 0) throw RangeError("n must be non-negative");
  NormalURep rep;
  if (n == 0) return rep;
  useq.extend_past(n);
  if (n.fits_slong_p()) {
    if (greedy_small(useq, static_cast<std::int64_t>(n.get_si()), rep)) return rep;
    rep.digits.clear();
  }
  std::size_t k = 0;
  while (useq.value(k + 1) <= n) ++k;
  mpz_class rem = n;
  mpz_class d;
  rep.digits.resize(k + 1);
  for (std::size_t j = k + 1; j-- > 0;) {
    d = rem / useq.value(j);
    rep.digits[k - j] = static_cast<std::int64_t>(d.get_si());
    rem -= d * useq.value(j);
  }
  assert(rem == 0);
  return rep;
}

NormalURep greedy_urep(USequence& useq, std::int64_t n) {
  return greedy_urep(useq, mpz_class(static_cast<long>(n)));
}

mpz_class urep_value(USequence& useq, const NormalURep& rep) {
  const std::int64_t alpha0 = useq.alpha0();
  for (std::int64_t d : rep.digits) {
    if (d < 0 || d > alpha0) {
      throw DigitRange("digit " + std::to_string(d) + " outside {0,...," +
                       std::to_string(alpha0) + "}");
    }
  }
  mpz_class total = 0;
  const std::size_t k = rep.digits.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t d = rep.digits[i];
    if (d != 0) total += d * useq.value(k - 1 - i);
  }
  return total;
}

bool is_canonical_urep(USequence& useq, const NormalURep& rep) {
  if (!rep.digits.empty() && rep.digits.front() == 0) return false;
  return greedy_urep(useq, urep_value(useq, rep)) == rep;
}

Word prefix_from_digits(const ParrySubstitution& sub, const NormalURep& rep, Limits lim) {
  USequence useq(sub);
  const mpz_class n = urep_value(useq, rep);
  if (n > lim.max_word_len) {
    throw ResourceLimit("prefix length exceeds the word length cap");
  }
  Word out;
  out.reserve(static_cast<std::size_t>(n.get_ui()));
  ImageCache cache(sub);
  const std::size_t k = rep.digits.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t d = rep.digits[i];
    if (d == 0) continue;
    const Word& block = cache.power(Letter{0}, k - 1 - i, lim);
    for (std::int64_t rep_count = 0; rep_count < d; ++rep_count) {
      out.insert(out.end(), block.begin(), block.end());
    }
  }
  return out;
}

std::vector<mpz_class> prefix_parikh(const ParrySubstitution& sub, const NormalURep& rep) {
  USequence useq(sub);
  const std::size_t a = sub.alphabet_size();
  std::vector<mpz_class> total(a, 0);
  const std::size_t k = rep.digits.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t d = rep.digits[i];
    if (d == 0) continue;
    const auto& row = useq.parikh_row(k - 1 - i);
    for (std::size_t l = 0; l < a; ++l) total[l] += d * row[l];
  }
  return total;
}

std::string format_digits(const NormalURep& rep, std::int64_t alpha0) {
  std::string out;
  if (alpha0 <= 9) {
    out.reserve(rep.digits.size());
    for (std::int64_t d : rep.digits) out.push_back(static_cast<char>('0' + d));
  } else {
    for (std::size_t i = 0; i < rep.digits.size(); ++i) {
      if (i) out.push_back(',');
      out += std::to_string(rep.digits[i]);
    }
  }
  return out;
}

GreedyValidity::GreedyValidity(const ParrySubstitution& sub)
    : dominant_(sub.alphas().begin(), sub.alphas().end()) {
  if (sub.kind() == Kind::Simple) {
    dominant_.back() -= 1;
    wrap_ = 0;
  } else {
    wrap_ = static_cast<std::size_t>(sub.m());
  }
}

bool GreedyValidity::step(const State& in, std::int64_t digit, State& out) const {
  out.clear();
  auto consider = [&](std::size_t pos) {
    if (digit > dominant_[pos]) return false;
    if (digit == dominant_[pos]) {
      out.push_back(pos + 1 < dominant_.size() ? pos + 1 : wrap_);
    }
    return true;
  };
  if (!consider(0)) return false;  // the comparison starting at this digit
  for (std::size_t pos : in) {
    if (!consider(pos)) return false;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return true;
}

bool GreedyValidity::accepts(const NormalURep& rep) const {
  if (rep.empty()) return true;  // n = 0
  if (rep.digits.front() < 1) return false;
  State state = initial();
  State next;
  for (std::int64_t d : rep.digits) {
    if (d < 0 || !step(state, d, next)) return false;
    state.swap(next);
  }
  return true;
}

NormalURep parse_digits(const std::string& text, std::int64_t alpha0) {
  NormalURep rep;
  if (text.empty()) return rep;
  if (alpha0 <= 9) {
    for (char ch : text) {
      if (ch < '0' || ch > '9') throw SyntaxError("bad digit character");
      rep.digits.push_back(ch - '0');
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        rep.digits.push_back(std::stoll(item));
      } catch (const std::exception&) {
        throw SyntaxError("bad digit: \"" + item + "\"");
      }
    }
  }
  for (std::int64_t d : rep.digits) {
    if (d < 0 || d > alpha0) throw DigitRange("digit outside {0,...,alpha_0}");
  }
  return rep;
}

}  // namespace parry
