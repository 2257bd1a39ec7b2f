#include <doctest.h>

#include <random>

#include "parry/numeration.hpp"
#include "parry/oracle.hpp"

using namespace parry;

namespace {

Word word_of(const std::string& s) {
  Word w;
  for (char ch : s) w.push_back(static_cast<Letter>(ch - '0'));
  return w;
}

NormalURep rep_of(std::vector<std::int64_t> digits) { return NormalURep{std::move(digits)}; }

const ParrySubstitution& fibonacci() {
  static const ParrySubstitution sub(Kind::Simple, 2, 0, {1, 1});
  return sub;
}

const ParrySubstitution& tribonacci() {
  static const ParrySubstitution sub(Kind::Simple, 3, 0, {1, 1, 1});
  return sub;
}

const ParrySubstitution& nonsimple21() {
  static const ParrySubstitution sub(Kind::NonSimple, 1, 1, {2, 1});
  return sub;
}

}  // namespace

TEST_CASE("greedy_urep: examples") {
  USequence fib(fibonacci());
  CHECK(greedy_urep(fib, 7) == rep_of({1, 0, 1, 0}));
  CHECK(greedy_urep(fib, 0) == rep_of({}));
  CHECK(greedy_urep(fib, 1) == rep_of({1}));

  USequence ns(nonsimple21());
  CHECK(greedy_urep(ns, 5) == rep_of({1, 2}));

  // Very large n goes through the arbitrary-precision path.
  const mpz_class big("123456789012345678901234567890");
  USequence fib2(fibonacci());
  const auto rep = greedy_urep(fib2, big);
  CHECK(urep_value(fib2, rep) == big);
}

TEST_CASE("urep_value: examples and digit range") {
  USequence fib(fibonacci());
  CHECK(urep_value(fib, rep_of({1, 0, 1, 0})) == 7);
  CHECK(urep_value(fib, rep_of({1})) == 1);
  CHECK(urep_value(fib, rep_of({})) == 0);
  CHECK_THROWS_AS(urep_value(fib, rep_of({2, 0})), DigitRange);
  CHECK_THROWS_AS(urep_value(fib, rep_of({-1})), DigitRange);
}

TEST_CASE("canonicity predicate") {
  USequence fib(fibonacci());
  CHECK(is_canonical_urep(fib, rep_of({1, 0, 1, 0})));
  CHECK(is_canonical_urep(fib, rep_of({})));
  // "11" values to 3 but greedy(3) is "100".
  CHECK_FALSE(is_canonical_urep(fib, rep_of({1, 1})));
  CHECK(urep_value(fib, rep_of({1, 1})) == 3);
  CHECK_FALSE(is_canonical_urep(fib, rep_of({0, 1})));
}

TEST_CASE("prefix_from_digits: examples") {
  CHECK(prefix_from_digits(fibonacci(), rep_of({1, 0, 1, 0})) == word_of("0100101"));
  CHECK(prefix_from_digits(fibonacci(), rep_of({1})) == word_of("0"));
  CHECK(prefix_from_digits(fibonacci(), rep_of({})) == Word{});

  Limits tiny;
  tiny.max_word_len = 6;
  CHECK_THROWS_AS(prefix_from_digits(fibonacci(), rep_of({1, 0, 1, 0}), tiny), ResourceLimit);
}

TEST_CASE("prefix_parikh: examples") {
  CHECK(prefix_parikh(fibonacci(), rep_of({1, 0, 1, 0})) == std::vector<mpz_class>{4, 3});
  CHECK(prefix_parikh(fibonacci(), rep_of({1})) == std::vector<mpz_class>{1, 0});
  CHECK(prefix_parikh(tribonacci(), rep_of({1, 0})) == std::vector<mpz_class>{1, 1, 0});
}

TEST_CASE("prefix_parikh agrees with the materialized prefix") {
  for (const auto& sub : {fibonacci(), tribonacci(), nonsimple21()}) {
    USequence useq(sub);
    const std::int64_t hi = (&sub == &fibonacci()) ? 10000 : 3000;
    for (std::int64_t n = 0; n <= hi; ++n) {
      const auto rep = greedy_urep(useq, n);
      const auto counted = parikh(prefix_from_digits(sub, rep), sub.alphabet_size());
      const auto computed = prefix_parikh(sub, rep);
      for (std::size_t l = 0; l < counted.size(); ++l) {
        REQUIRE(computed[l] == counted[l]);
      }
    }
  }
}

TEST_CASE("property: round trip, digit bounds, no leading zeros") {
  std::mt19937_64 rng(97);
  for (const auto& sub : {fibonacci(), tribonacci(), nonsimple21()}) {
    USequence useq(sub);
    std::uniform_int_distribution<std::int64_t> pick(0, 1000000);
    for (int trial = 0; trial < 20000; ++trial) {
      const std::int64_t n = pick(rng);
      const auto rep = greedy_urep(useq, n);
      CHECK(urep_value(useq, rep) == n);
      if (n > 0) CHECK(rep.digits.front() >= 1);
      for (std::int64_t d : rep.digits) {
        CHECK(d >= 0);
        CHECK(d <= sub.alpha0());
      }
    }
  }
}

TEST_CASE("property: appending a digit maps the prefix through phi") {
  // When <n>_U d is itself a greedy representation of some N, then
  // u_0...u_{N-1} = phi(u_0...u_{n-1}) 0^d.
  for (const auto& sub : {fibonacci(), nonsimple21()}) {
    USequence useq(sub);
    int exercised = 0;
    for (std::int64_t n = 1; n <= 300; ++n) {
      auto rep = greedy_urep(useq, n);
      const Word prefix_n = prefix_from_digits(sub, rep);
      for (std::int64_t d = 0; d <= sub.alpha0(); ++d) {
        rep.digits.push_back(d);
        if (is_canonical_urep(useq, rep)) {
          const mpz_class big_n = urep_value(useq, rep);
          Word expected = sub.apply(prefix_n);
          expected.insert(expected.end(), static_cast<std::size_t>(d), Letter{0});
          CHECK(fixed_point_prefix(sub, static_cast<std::int64_t>(big_n.get_si())) == expected);
          ++exercised;
        }
        rep.digits.pop_back();
      }
    }
    CHECK(exercised >= 300);  // appending 0 keeps a greedy string greedy
  }
}

TEST_CASE("digit string formatting") {
  CHECK(format_digits(rep_of({1, 0, 1, 0}), 1) == "1010");
  CHECK(format_digits(rep_of({}), 1) == "");
  CHECK(format_digits(rep_of({10, 3, 0}), 12) == "10,3,0");
  CHECK(parse_digits("1010", 1) == rep_of({1, 0, 1, 0}));
  CHECK(parse_digits("10,3,0", 12) == rep_of({10, 3, 0}));
  CHECK_THROWS_AS(parse_digits("19", 1), DigitRange);
  CHECK_THROWS_AS(parse_digits("1x", 1), SyntaxError);

  // A substitution with alpha_0 > 9 exercising the comma rendering end to end.
  ParrySubstitution wide(Kind::Simple, 2, 0, {12, 1});
  wide.validate();
  USequence useq(wide);
  const auto rep = greedy_urep(useq, 137);
  CHECK(urep_value(useq, parse_digits(format_digits(rep, 12), 12)) == 137);
}

TEST_CASE("greedy validity recognizer matches the canonicity predicate") {
  std::mt19937_64 rng(1234);
  for (const auto& sub : {fibonacci(), tribonacci(), nonsimple21()}) {
    USequence useq(sub);
    const GreedyValidity validity(sub);
    // Exhaustively: every greedy representation is accepted.
    for (std::int64_t n = 0; n <= 5000; ++n) {
      CHECK(validity.accepts(greedy_urep(useq, n)));
    }
    // Random digit strings: acceptance coincides with being the greedy
    // representation of the string's own value.
    std::uniform_int_distribution<std::int64_t> digit(0, sub.alpha0());
    std::uniform_int_distribution<int> length(1, 12);
    for (int trial = 0; trial < 4000; ++trial) {
      NormalURep rep;
      rep.digits.resize(static_cast<std::size_t>(length(rng)));
      for (auto& d : rep.digits) d = digit(rng);
      CHECK(validity.accepts(rep) == is_canonical_urep(useq, rep));
    }
  }
}
