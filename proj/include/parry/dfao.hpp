#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "parry/builder.hpp"
#include "parry/config.hpp"
#include "parry/numeration.hpp"
#include "parry/oracle.hpp"
#include "parry/substitution.hpp"

namespace parry {

struct DfaoMeta {
  std::int64_t c = 0;
  std::int64_t H = 0;
  std::int64_t L = 0;
  std::int64_t state_count = 0;  // states excluding the initial one and the sink
  std::int64_t built_unix = 0;   // 0 under --reproducible
  nlohmann::json substitution;

  bool operator==(const DfaoMeta&) const = default;
};

// Deterministic finite automaton with two output tables on a shared
// transition function: tau_ac for abelian complexity, tau_b for the balance
// function.  State 0 is initial; state 0 and the sink carry sentinel outputs 0.
struct Dfao {
  std::int64_t num_states = 0;
  std::int64_t alphabet_max_digit = 0;  // alpha_0
  std::vector<std::vector<std::int32_t>> delta;
  std::vector<std::int64_t> tau_ac;
  std::vector<std::int64_t> tau_b;
  std::int32_t sink = -1;  // -1 when absent
  DfaoMeta meta;

  bool operator==(const Dfao&) const = default;
};

enum class OutputFn { AC, Balance };

Dfao assemble(const FixpointResult& fix, const OutputTables& outputs, DfaoMeta meta);

// Folds delta from state 0 over the digits, then applies the selected output.
// Throws EmptyInput on the empty string and DigitRange on bad digits.
std::int64_t eval_digits(const Dfao& dfao, const NormalURep& digits, OutputFn which);

struct EvalTrace {
  std::int64_t value = 0;
  std::size_t transitions = 0;
};

EvalTrace eval_digits_traced(const Dfao& dfao, const NormalURep& digits, OutputFn which);

// eval_digits over the greedy representation of n; O(log n) transitions.
std::int64_t eval_n(const Dfao& dfao, USequence& useq, const mpz_class& n, OutputFn which);
std::int64_t eval_n(const Dfao& dfao, USequence& useq, std::int64_t n, OutputFn which);

enum class MinimizeGoal { Both, ACOnly, BalanceOnly };

// Moore minimization by partition refinement, initially colored by the output
// pair (or a single table under ACOnly/BalanceOnly, which invalidates the
// other table on merged states).
Dfao minimize(const Dfao& dfao, MinimizeGoal goal = MinimizeGoal::Both);

// Drops states unreachable via digit strings that are greedy-valid (every
// suffix lexicographically dominated by the quasi-greedy expansion of 1);
// transitions into dropped states are re-routed to the sink.
Dfao prune_unreachable(const Dfao& dfao);

nlohmann::json export_json(const Dfao& dfao);
Dfao import_json(const nlohmann::json& doc);
Dfao load_dfao(const std::string& path);

std::string export_dot(const Dfao& dfao);

struct BuildOptions {
  std::optional<std::int64_t> c;  // overrides the estimate
  std::int64_t c_margin = 0;      // slack added on top
  bool minimize = false;
  MinimizeGoal goal = MinimizeGoal::Both;
  bool prune = false;
  bool reproducible = false;
  Limits limits{};
  CEstimateOptions estimate{};
};

struct BuildReport {
  Dfao dfao;
  ConstantsBundle consts;
  CEstimate c_estimate;
  SpectralResult spectral = SpectralResult::Inconclusive;
  std::size_t states_before_minimize = 0;
  std::size_t mem2_size = 0;
  std::size_t iterations = 0;
};

// End-to-end: validate, spectral check, c estimate, constants, fixpoint,
// outputs, optional prune/minimize.
BuildReport build_dfao(const ParrySubstitution& sub, const BuildOptions& opts = {});

}  // namespace parry
