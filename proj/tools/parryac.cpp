// parryac: build, evaluate, and cross-check abelian-complexity automata for
// fixed points of Parry substitutions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "parry/builder.hpp"
#include "parry/dfao.hpp"
#include "parry/numeration.hpp"
#include "parry/oracle.hpp"
#include "parry/substitution.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConstraint = 2;
constexpr int kExitBuildFailure = 3;
constexpr int kExitOracleMismatch = 4;

parry::ParrySubstitution load_substitution(const std::string& arg) {
  if (arg.rfind("simple:", 0) == 0 || arg.rfind("nonsimple:", 0) == 0 ||
      (!arg.empty() && arg.front() == '{')) {
    return parry::ParrySubstitution::parse(arg);
  }
  std::ifstream in(arg);
  if (!in) throw parry::SyntaxError("cannot open spec file " + arg);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parry::ParrySubstitution::parse(text);
}

bool looks_like_automaton(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) return false;
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  return doc.is_object() && doc.contains("format_version");
}

mpz_class parse_big(const std::string& text) {
  try {
    return mpz_class(text);
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError("N", "not a decimal integer: " + text);
  }
}

struct TableArgs {
  std::string source;
  std::int64_t from = 1;
  std::int64_t to = 10;
  bool oracle = false;
};

int run_table(const TableArgs& args, const parry::Limits& lim) {
  parry::Dfao dfao;
  if (looks_like_automaton(args.source)) {
    dfao = parry::load_dfao(args.source);
  } else {
    const auto sub = load_substitution(args.source);
    parry::BuildOptions opts;
    opts.limits = lim;
    dfao = parry::build_dfao(sub, opts).dfao;
  }
  const auto sub = parry::ParrySubstitution::from_json(dfao.meta.substitution);
  sub.validate();
  parry::USequence useq(sub);

  if (args.from < 1 || args.to < args.from) {
    throw CLI::ValidationError("--from/--to", "need 1 <= from <= to");
  }
  std::cout << "n\turep\tac\tb";
  if (args.oracle) std::cout << "\tac_oracle\tb_oracle\tmatch";
  std::cout << "\n";
  bool all_match = true;
  for (std::int64_t n = args.from; n <= args.to; ++n) {
    const auto digits = parry::greedy_urep(useq, n);
    const auto ac = parry::eval_digits(dfao, digits, parry::OutputFn::AC);
    const auto b = parry::eval_digits(dfao, digits, parry::OutputFn::Balance);
    std::cout << n << '\t' << parry::format_digits(digits, sub.alpha0()) << '\t' << ac
              << '\t' << b;
    if (args.oracle) {
      const auto ac_oracle = parry::ac_bruteforce(sub, n, lim);
      const auto b_oracle = parry::balance_bruteforce(sub, n, lim);
      const bool match = ac == ac_oracle && b == b_oracle;
      all_match = all_match && match;
      std::cout << '\t' << ac_oracle << '\t' << b_oracle << '\t' << (match ? "yes" : "no");
    }
    std::cout << "\n";
  }
  return all_match ? 0 : kExitOracleMismatch;
}

}  // namespace

namespace {

int run_app(int argc, char** argv) {
  CLI::App app{"abelian complexity and balance automata for Parry substitution fixed points"};
  app.require_subcommand(1);
  const parry::Limits lim = parry::Limits::from_env();

  std::string spec_arg;
  std::string automaton_arg;
  std::string out_path;

  auto* cmd_validate = app.add_subcommand("validate", "check the Parry exponent constraints");
  cmd_validate->add_option("spec", spec_arg, "spec file, JSON, or shorthand")->required();

  std::int64_t prefix_len = 0;
  auto* cmd_prefix = app.add_subcommand("prefix", "print a prefix of the fixed point");
  cmd_prefix->add_option("spec", spec_arg)->required();
  cmd_prefix->add_option("-n,--length", prefix_len, "prefix length")->required();

  std::string n_arg;
  auto* cmd_urep = app.add_subcommand("urep", "print the greedy U-representation of N");
  cmd_urep->add_option("spec", spec_arg)->required();
  cmd_urep->add_option("N", n_arg)->required();

  std::int64_t balance_cap = 0;
  auto* cmd_balance = app.add_subcommand("balance", "spectral balance check and empirical c");
  cmd_balance->add_option("spec", spec_arg)->required();
  cmd_balance->add_option("--cap", balance_cap, "scan cap in letters");

  std::optional<std::int64_t> c_override;
  std::int64_t c_margin = 0;
  bool do_minimize = false;
  bool do_prune = false;
  bool reproducible = false;
  std::string minimize_fn = "both";
  auto* cmd_build = app.add_subcommand("build", "compile the substitution into an automaton");
  cmd_build->add_option("spec", spec_arg)->required();
  cmd_build->add_option("--c", c_override, "balance bound (skips the estimate)");
  cmd_build->add_option("--c-margin", c_margin, "slack added to the balance bound");
  cmd_build->add_flag("--minimize", do_minimize, "minimize the automaton");
  cmd_build->add_option("--minimize-fn", minimize_fn, "both|ac|balance")
      ->check(CLI::IsMember({"both", "ac", "balance"}));
  cmd_build->add_flag("--prune", do_prune, "drop states unreachable via greedy digit strings");
  cmd_build->add_flag("--reproducible", reproducible, "zero the timestamp for byte-stable output");
  cmd_build->add_option("-o,--output", out_path, "output automaton JSON")->required();

  std::string fn_arg = "ac";
  auto* cmd_eval = app.add_subcommand("eval", "evaluate AC(N) or B(N) via the automaton");
  cmd_eval->add_option("automaton", automaton_arg, "automaton JSON file")->required();
  cmd_eval->add_option("N", n_arg)->required();
  cmd_eval->add_option("--fn", fn_arg, "ac|balance")->check(CLI::IsMember({"ac", "balance"}));

  TableArgs table_args;
  auto* cmd_table = app.add_subcommand("table", "emit a TSV table of values");
  cmd_table->add_option("source", table_args.source, "spec or automaton JSON")->required();
  cmd_table->add_option("--from", table_args.from)->required();
  cmd_table->add_option("--to", table_args.to)->required();
  cmd_table->add_flag("--oracle", table_args.oracle, "cross-check against brute force");

  std::string dot_path;
  auto* cmd_export = app.add_subcommand("export", "export the automaton");
  cmd_export->add_option("automaton", automaton_arg)->required();
  cmd_export->add_option("--dot", dot_path, "write a Graphviz transition diagram")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cmd_validate->parsed()) {
      const auto sub = load_substitution(spec_arg);
      sub.validate();
      std::cout << "ok: " << sub.to_json().dump() << "\n";
      return 0;
    }
    if (cmd_prefix->parsed()) {
      const auto sub = load_substitution(spec_arg);
      sub.validate();
      const auto w = parry::fixed_point_prefix(sub, prefix_len, lim);
      std::cout << parry::format_word(w, sub.alphabet_size()) << "\n";
      return 0;
    }
    if (cmd_urep->parsed()) {
      const auto sub = load_substitution(spec_arg);
      sub.validate();
      parry::USequence useq(sub);
      const auto rep = parry::greedy_urep(useq, parse_big(n_arg));
      std::cout << parry::format_digits(rep, sub.alpha0()) << "\n";
      return 0;
    }
    if (cmd_balance->parsed()) {
      const auto sub = load_substitution(spec_arg);
      sub.validate();
      const auto spectral = parry::spectral_balance_check(sub);
      std::cout << "spectral: "
                << (spectral == parry::SpectralResult::Certified ? "Certified" : "Inconclusive")
                << "\n";
      const std::int64_t cap = balance_cap > 0 ? balance_cap : lim.max_word_len;
      const auto est = parry::estimate_c(sub, cap);
      std::cout << "c: " << est.c << " ("
                << (est.status == parry::CEstimateStatus::Stable ? "Stable" : "StillGrowing")
                << ")\n";
      return 0;
    }
    if (cmd_build->parsed()) {
      const auto sub = load_substitution(spec_arg);
      parry::BuildOptions opts;
      opts.c = c_override;
      opts.c_margin = c_margin;
      opts.minimize = do_minimize;
      opts.goal = minimize_fn == "ac"        ? parry::MinimizeGoal::ACOnly
                  : minimize_fn == "balance" ? parry::MinimizeGoal::BalanceOnly
                                             : parry::MinimizeGoal::Both;
      opts.prune = do_prune;
      opts.reproducible = reproducible;
      opts.limits = lim;
      const auto report = parry::build_dfao(sub, opts);
      if (report.spectral != parry::SpectralResult::Certified) {
        std::cerr << "warning: spectral balance check inconclusive; the build may not terminate "
                     "within the state cap\n";
      }
      std::ofstream out(out_path);
      if (!out) throw parry::SyntaxError("cannot write " + out_path);
      out << parry::export_json(report.dfao).dump(2) << "\n";
      std::cout << "states: " << report.dfao.num_states << " (before minimize: "
                << report.states_before_minimize << ")\n"
                << "c: " << report.consts.c << " H: " << report.consts.H
                << " L: " << report.consts.L << "\n"
                << "mem2: " << report.mem2_size << " rounds: " << report.iterations << "\n";
      return 0;
    }
    if (cmd_eval->parsed()) {
      const auto dfao = parry::load_dfao(automaton_arg);
      const auto sub = parry::ParrySubstitution::from_json(dfao.meta.substitution);
      sub.validate();
      parry::USequence useq(sub);
      const auto which = fn_arg == "balance" ? parry::OutputFn::Balance : parry::OutputFn::AC;
      std::cout << parry::eval_n(dfao, useq, parse_big(n_arg), which) << "\n";
      return 0;
    }
    if (cmd_table->parsed()) {
      return run_table(table_args, lim);
    }
    if (cmd_export->parsed()) {
      const auto dfao = parry::load_dfao(automaton_arg);
      std::ofstream out(dot_path);
      if (!out) throw parry::SyntaxError("cannot write " + dot_path);
      out << parry::export_dot(dfao);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const parry::SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const parry::ConstraintViolation& e) {
    std::cerr << "constraint violated (" << e.constraint << "): " << e.what() << "\n";
    return kExitConstraint;
  } catch (const parry::RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConstraint;
  } catch (const parry::DigitRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConstraint;
  } catch (const parry::EmptyInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConstraint;
  } catch (const parry::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBuildFailure;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const parry::ConstraintViolation& e) {
    std::cerr << "constraint violated (" << e.constraint << "): " << e.what() << "\n";
    return kExitConstraint;
  } catch (const parry::RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConstraint;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBuildFailure;
  } catch (...) {
    std::cerr << "error: unknown failure\n";
    return kExitBuildFailure;
  }
}
