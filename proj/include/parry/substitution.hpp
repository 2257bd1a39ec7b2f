#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "parry/config.hpp"
#include "parry/errors.hpp"

namespace parry {

// Letters are 0-based indices into the alphabet {0,...,A-1}.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

inline constexpr std::size_t kMaxAlphabet = 255;

enum class Kind { Simple, NonSimple };

// Row l is the Parikh vector of phi(l).
struct IncidenceMatrix {
  std::vector<std::vector<std::int64_t>> rows;

  std::size_t size() const { return rows.size(); }
  std::int64_t at(std::size_t r, std::size_t c) const { return rows[r][c]; }
  bool operator==(const IncidenceMatrix&) const = default;
};

// A substitution of the canonical simple/non-simple shape, parameterized by
// the exponent list alpha_0..alpha_{A-1}.  Construction checks only structural
// ranges (RangeError); the Parry exponent constraints live in validate().
class ParrySubstitution {
 public:
  ParrySubstitution(Kind kind, std::int64_t m, std::int64_t p,
                    std::vector<std::int64_t> alphas);

  // Canonical spec document (JSON text) or parsed JSON object.
  static ParrySubstitution parse(const std::string& text);
  static ParrySubstitution from_json(const nlohmann::json& doc);
  // CLI shorthand: "simple:1,1" or "nonsimple:m=1,p=1:2,1".
  static ParrySubstitution parse_shorthand(const std::string& text);
  nlohmann::json to_json() const;

  Kind kind() const { return kind_; }
  std::int64_t m() const { return m_; }
  std::int64_t p() const { return p_; }
  std::size_t alphabet_size() const { return alphas_.size(); }
  const std::vector<std::int64_t>& alphas() const { return alphas_; }
  std::int64_t alpha0() const { return alphas_[0]; }

  // Throws ConstraintViolation naming the failed constraint.
  void validate() const;

  // phi(l) and |phi(l)|.
  Word image(Letter l) const;
  std::int64_t image_length(Letter l) const;

  // Letterwise image of a word, concatenated in order.
  Word apply(const Word& w) const;

  IncidenceMatrix incidence_matrix() const;

  bool operator==(const ParrySubstitution&) const = default;

 private:
  Kind kind_;
  std::int64_t m_;
  std::int64_t p_;
  std::vector<std::int64_t> alphas_;
};

// Memoizes phi^k(l) across calls.  Not thread-safe; use one per thread.
class ImageCache {
 public:
  explicit ImageCache(const ParrySubstitution& sub) : sub_(sub) {}
  const Word& power(Letter l, std::size_t k, Limits lim = {});

 private:
  const ParrySubstitution& sub_;
  std::map<std::pair<Letter, std::size_t>, Word> memo_;
};

// |phi^k(l)| computed exactly without materializing the word.
mpz_class power_image_length(const ParrySubstitution& sub, Letter l, std::size_t k);

// phi^k(l); throws ResourceLimit if the result would exceed lim.max_word_len.
Word power_image(const ParrySubstitution& sub, Letter l, std::size_t k, Limits lim = {});

// Streams the fixed point u = lim phi^j(0) by reading its own output:
// the buffer starts as phi(0) and appends phi(u_p) for p = 1, 2, ...
class FixedPointStream {
 public:
  explicit FixedPointStream(const ParrySubstitution& sub);
  // Grows the buffer to at least len letters and returns it (possibly longer).
  const Word& prefix(std::int64_t len, Limits lim = {});
  const Word& current() const { return out_; }

 private:
  const ParrySubstitution& sub_;
  std::vector<Word> images_;  // phi(l) per letter
  Word out_;
  std::size_t read_pos_ = 1;
};

// u_0 ... u_{len-1}.  Requires validate() to have passed.
Word fixed_point_prefix(const ParrySubstitution& sub, std::int64_t len, Limits lim = {});

// Lengths U_j = |phi^j(0)| together with the Parikh vectors Psi(phi^j(0)),
// exact and grown on demand.  U_0 = 1 and the values strictly increase.
// References returned by value()/parikh_row() are invalidated by growth.
class USequence {
 public:
  explicit USequence(const ParrySubstitution& sub);

  std::size_t computed() const { return values_.size(); }
  const mpz_class& value(std::size_t j);
  // Parikh vector of phi^j(0); row 0 of M^j.
  const std::vector<mpz_class>& parikh_row(std::size_t j);
  // Ensures some computed value exceeds n.
  void extend_past(const mpz_class& n);
  // -1 when U_j does not fit in int64.
  std::int64_t value_i64(std::size_t j);

  std::int64_t alpha0() const { return alpha0_; }
  std::vector<mpz_class> values_upto(std::size_t k);

 private:
  void grow_one();

  IncidenceMatrix m_;
  std::int64_t alpha0_;
  std::vector<std::vector<mpz_class>> rows_;
  std::vector<mpz_class> values_;
};

// U_0..U_k, precomputed.
USequence u_sequence(const ParrySubstitution& sub, std::size_t k);

// Monic characteristic polynomial of M, exact integer coefficients,
// highest degree first (index 0 is the leading 1).
std::vector<mpz_class> characteristic_polynomial(const IncidenceMatrix& m);

enum class SpectralResult { Certified, Inconclusive };

// Certified iff every root of the characteristic polynomial except the one of
// largest modulus has modulus < 1 - tol.  Certified implies the fixed point is
// c-balanced for some c.  Moduli within tol of 1 are never certified.
SpectralResult spectral_balance_check(const ParrySubstitution& sub, double tol = 1e-9);

// Rendering helpers.  Words print compactly when the alphabet has at most
// 10 letters, comma-separated otherwise.
std::string format_word(const Word& w, std::size_t alphabet_size);

}  // namespace parry
