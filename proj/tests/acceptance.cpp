// Acceptance suite: one pass/fail line per criterion, exact tolerances.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "parry/builder.hpp"
#include "parry/dfao.hpp"
#include "parry/numeration.hpp"
#include "parry/oracle.hpp"
#include "parry/substitution.hpp"

using namespace parry;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  int id;
  std::string title;
  std::function<std::string()> run;  // returns detail text; throws on failure
};

struct Failure {
  std::string reason;
};

void require(bool ok, const std::string& reason) {
  if (!ok) throw Failure{reason};
}

struct TestSystem {
  std::string name;
  ParrySubstitution sub;
  BuildReport report;
};

std::vector<TestSystem>& systems() {
  static std::vector<TestSystem> built = [] {
    std::vector<TestSystem> out;
    BuildOptions opts;
    opts.reproducible = true;
    out.push_back({"fibonacci", ParrySubstitution(Kind::Simple, 2, 0, {1, 1}), {}});
    out.push_back({"tribonacci", ParrySubstitution(Kind::Simple, 3, 0, {1, 1, 1}), {}});
    out.push_back({"nonsimple(2,1)", ParrySubstitution(Kind::NonSimple, 1, 1, {2, 1}), {}});
    for (auto& sys : out) sys.report = build_dfao(sys.sub, opts);
    return out;
  }();
  return built;
}

std::string check_oracle_range(const TestSystem& sys, std::int64_t upto) {
  USequence useq(sys.sub);
  for (std::int64_t n = 1; n <= upto; ++n) {
    const auto digits = greedy_urep(useq, n);
    const auto ac = eval_digits(sys.report.dfao, digits, OutputFn::AC);
    const auto b = eval_digits(sys.report.dfao, digits, OutputFn::Balance);
    const auto ac_o = ac_bruteforce(sys.sub, n);
    const auto b_o = balance_bruteforce(sys.sub, n);
    require(ac == ac_o, sys.name + ": AC mismatch at n=" + std::to_string(n) + " (" +
                            std::to_string(ac) + " vs oracle " + std::to_string(ac_o) + ")");
    require(b == b_o, sys.name + ": B mismatch at n=" + std::to_string(n));
  }
  std::ostringstream detail;
  detail << sys.name << ": AC and B equal brute force for n in 1.." << upto;
  return detail.str();
}

}  // namespace

int main() {
  std::vector<Criterion> criteria;

  criteria.push_back({1, "Fibonacci: AC(n)=2 for n in 1..1e5; oracle match 1..2000", [] {
    const auto t0 = Clock::now();
    BuildOptions opts;
    opts.reproducible = true;
    const ParrySubstitution fib(Kind::Simple, 2, 0, {1, 1});
    const auto report = build_dfao(fib, opts);
    const double build_s = seconds_since(t0);
    require(build_s < 10.0, "build took " + std::to_string(build_s) + " s (limit 10)");

    const auto t1 = Clock::now();
    USequence useq(fib);
    for (std::int64_t n = 1; n <= 100000; ++n) {
      require(eval_n(report.dfao, useq, n, OutputFn::AC) == 2,
              "AC != 2 at n=" + std::to_string(n));
    }
    for (std::int64_t n = 1; n <= 2000; ++n) {
      require(eval_n(report.dfao, useq, n, OutputFn::AC) == ac_bruteforce(fib, n),
              "oracle AC mismatch at n=" + std::to_string(n));
      require(eval_n(report.dfao, useq, n, OutputFn::Balance) == balance_bruteforce(fib, n),
              "oracle B mismatch at n=" + std::to_string(n));
    }
    const double eval_s = seconds_since(t1);
    require(eval_s < 5.0, "evaluation suite took " + std::to_string(eval_s) + " s (limit 5)");
    std::ostringstream detail;
    detail << "build " << build_s << " s, evaluation suite " << eval_s << " s";
    return detail.str();
  }});

  criteria.push_back({2, "Tribonacci: oracle equality for n in 1..1000; AC(1)=3", [] {
    const auto& sys = systems()[1];
    USequence useq(sys.sub);
    require(eval_n(sys.report.dfao, useq, std::int64_t{1}, OutputFn::AC) == 3, "AC(1) != 3");
    return check_oracle_range(sys, 1000);
  }});

  criteria.push_back({3, "Non-simple (m=1,p=1,alphas=2,1): Certified; oracle match 1..500", [] {
    const auto& sys = systems()[2];
    require(spectral_balance_check(sys.sub) == SpectralResult::Certified,
            "spectral check not Certified");
    return check_oracle_range(sys, 500);
  }});

  criteria.push_back({4, "Matrix identity Psi(phi(w)) = Psi(w) M on 1000 random factors", [] {
    std::mt19937_64 rng(1928);
    for (const auto& sys : systems()) {
      const auto m = sys.sub.incidence_matrix();
      const std::size_t a = sys.sub.alphabet_size();
      const Word u = fixed_point_prefix(sys.sub, 1 << 16);
      std::uniform_int_distribution<std::size_t> start(0, u.size() - 1);
      std::uniform_int_distribution<std::size_t> len(0, 512);
      for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t j = start(rng);
        const std::size_t n = std::min(len(rng), u.size() - j);
        const Word w(u.begin() + static_cast<std::ptrdiff_t>(j),
                     u.begin() + static_cast<std::ptrdiff_t>(j + n));
        const auto before = parikh(w, a);
        const auto after = parikh(sys.sub.apply(w), a);
        for (std::size_t col = 0; col < a; ++col) {
          std::int64_t acc = 0;
          for (std::size_t row = 0; row < a; ++row) acc += before[row] * m.rows[row][col];
          require(after[col] == acc, sys.name + ": identity failed on a factor");
        }
      }
    }
    return std::string("3 substitutions x 1000 factors, exact integer equality");
  }});

  criteria.push_back({5, "Prefix formula equals the streamed fixed point for n <= 5000", [] {
    for (const auto& sys : systems()) {
      USequence useq(sys.sub);
      const Word u = fixed_point_prefix(sys.sub, 5000);
      for (std::int64_t n = 0; n <= 5000; ++n) {
        const Word via_digits = prefix_from_digits(sys.sub, greedy_urep(useq, n));
        require(static_cast<std::int64_t>(via_digits.size()) == n,
                sys.name + ": prefix length mismatch at n=" + std::to_string(n));
        require(std::equal(via_digits.begin(), via_digits.end(), u.begin()),
                sys.name + ": prefix content mismatch at n=" + std::to_string(n));
      }
    }
    return std::string("3 substitutions, n in 0..5000, letter-exact");
  }});

  criteria.push_back({6, "Numeration round trip and digit bounds on n <= 1e6", [] {
    for (const auto& sys : systems()) {
      USequence useq(sys.sub);
      const std::int64_t alpha0 = sys.sub.alpha0();
      for (std::int64_t n = 0; n <= 1000000; ++n) {
        const auto rep = greedy_urep(useq, n);
        if (n > 0) {
          require(rep.digits.front() >= 1, sys.name + ": leading zero at n=" + std::to_string(n));
        }
        for (std::int64_t d : rep.digits) {
          require(d >= 0 && d <= alpha0, sys.name + ": digit out of range");
        }
        require(urep_value(useq, rep) == n, sys.name + ": round trip failed at n=" + std::to_string(n));
      }
    }
    return std::string("identity, digits in {0..alpha_0}, leading digit nonzero");
  }});

  criteria.push_back({7, "Zero-sum and c-boundedness of every built state", [] {
    for (const auto& sys : systems()) {
      const auto consts = sys.report.consts;
      const FixpointResult fix = fixpoint_enumerate(sys.sub, consts);
      for (const StateSet& s : fix.states) {
        for (const STriple& t : s.triples) {
          std::int64_t sum = 0;
          for (std::int64_t v : t.psi) {
            sum += v;
            require(v <= consts.c && v >= -consts.c, sys.name + ": psi entry exceeds c");
          }
          require(sum == 0, sys.name + ": psi does not sum to zero");
        }
      }
    }
    return std::string("all states of all three builds");
  }});

  criteria.push_back({8, "Fixpoint stop criterion: Mem2 growth is monotone, halts on flat round", [] {
    std::ostringstream detail;
    for (const auto& sys : systems()) {
      const FixpointResult fix = fixpoint_enumerate(sys.sub, sys.report.consts);
      const auto& hist = fix.mem2_history;
      require(!hist.empty(), sys.name + ": empty history");
      for (std::size_t i = 1; i < hist.size(); ++i) {
        require(hist[i] >= hist[i - 1], sys.name + ": Mem2 shrank");
        if (i + 1 < hist.size()) {
          require(hist[i] > hist[i - 1], sys.name + ": flat round before the last");
        }
      }
      require(hist.size() >= 2 && hist.back() == hist[hist.size() - 2],
              sys.name + ": loop did not end on a zero-growth round");
      detail << sys.name << " M=" << fix.states.size() - 1 << " |Mem2|=" << fix.mem2_size
             << " rounds=" << fix.iterations << "; ";
    }
    return detail.str();
  }});

  criteria.push_back({9, "O(log n): transition count = digit count; n=1e12 under 1 ms", [] {
    const auto& sys = systems()[0];
    USequence useq(sys.sub);
    for (std::int64_t n : {1, 2, 3, 1000, 65536, 999999, 123456789}) {
      const auto rep = greedy_urep(useq, n);
      const auto trace = eval_digits_traced(sys.report.dfao, rep, OutputFn::AC);
      require(trace.transitions == rep.size(), "transition count != digit count");
    }
    const mpz_class big("1000000000000");
    useq.extend_past(big);
    double best = 1e9;
    std::int64_t value = 0;
    for (int rep = 0; rep < 5; ++rep) {
      const auto t0 = Clock::now();
      value = eval_n(sys.report.dfao, useq, big, OutputFn::AC);
      best = std::min(best, seconds_since(t0));
    }
    require(value == 2, "AC(1e12) != 2");
    require(best < 1e-3, "eval took " + std::to_string(best * 1e3) + " ms (limit 1)");
    std::ostringstream detail;
    detail << "eval_n(1e12) best of 5: " << best * 1e6 << " us";
    return detail.str();
  }});

  criteria.push_back({10, "Minimization: 1e4 fuzzed strings per substitution; idempotent", [] {
    std::mt19937_64 rng(777);
    for (const auto& sys : systems()) {
      const Dfao mini = minimize(sys.report.dfao);
      const Dfao again = minimize(mini);
      require(again.num_states == mini.num_states, sys.name + ": minimize not idempotent");
      require(again.delta == mini.delta && again.tau_ac == mini.tau_ac &&
                  again.tau_b == mini.tau_b,
              sys.name + ": re-minimization changed tables");
      std::uniform_int_distribution<std::int64_t> digit(0, sys.report.dfao.alphabet_max_digit);
      std::uniform_int_distribution<int> length(1, 30);
      for (int trial = 0; trial < 10000; ++trial) {
        NormalURep rep;
        rep.digits.resize(static_cast<std::size_t>(length(rng)));
        for (auto& d : rep.digits) d = digit(rng);
        require(eval_digits(sys.report.dfao, rep, OutputFn::AC) ==
                    eval_digits(mini, rep, OutputFn::AC),
                sys.name + ": AC diverged on a fuzzed string");
        require(eval_digits(sys.report.dfao, rep, OutputFn::Balance) ==
                    eval_digits(mini, rep, OutputFn::Balance),
                sys.name + ": B diverged on a fuzzed string");
      }
    }
    return std::string("AC and B preserved on 3 x 10000 digit strings");
  }});

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string detail;
    bool ok = true;
    try {
      detail = criterion.run();
    } catch (const Failure& f) {
      ok = false;
      detail = f.reason;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  %2d  %s%s%s\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.title.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
