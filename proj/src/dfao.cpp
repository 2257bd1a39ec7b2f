#include "parry/dfao.hpp"

#include <algorithm>
#include <ctime>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace parry {

Dfao assemble(const FixpointResult& fix, const OutputTables& outputs, DfaoMeta meta) {
  const std::size_t content_states = fix.states.size();
  const std::size_t total = content_states + (fix.has_sink ? 1 : 0);
  if (fix.delta.size() != total) {
    throw ShapeMismatch("delta row count does not match the state count");
  }
  if (outputs.tau_ac.size() != content_states || outputs.tau_b.size() != content_states) {
    throw ShapeMismatch("output tables do not match the state count");
  }
  if (fix.delta.empty() || fix.delta.front().empty()) {
    throw ShapeMismatch("empty transition table");
  }
  const std::size_t digit_count = fix.delta.front().size();
  for (const auto& row : fix.delta) {
    if (row.size() != digit_count) throw ShapeMismatch("ragged transition table");
    for (std::int32_t target : row) {
      if (target < 0 || static_cast<std::size_t>(target) >= total) {
        throw ShapeMismatch("transition target out of range");
      }
    }
  }

  Dfao dfao;
  dfao.num_states = static_cast<std::int64_t>(total);
  dfao.alphabet_max_digit = static_cast<std::int64_t>(digit_count) - 1;
  dfao.delta = fix.delta;
  dfao.tau_ac = outputs.tau_ac;
  dfao.tau_b = outputs.tau_b;
  if (fix.has_sink) {
    dfao.sink = fix.sink;
    dfao.tau_ac.push_back(0);
    dfao.tau_b.push_back(0);
  }
  meta.state_count = static_cast<std::int64_t>(content_states) - 1;
  dfao.meta = std::move(meta);
  return dfao;
}

EvalTrace eval_digits_traced(const Dfao& dfao, const NormalURep& digits, OutputFn which) {
  if (digits.empty()) throw EmptyInput("n = 0 has no defined value");
  std::int32_t state = 0;
  std::size_t steps = 0;
  for (std::int64_t d : digits.digits) {
    if (d < 0 || d > dfao.alphabet_max_digit) {
      throw DigitRange("digit outside {0,...,alpha_0}");
    }
    state = dfao.delta[static_cast<std::size_t>(state)][static_cast<std::size_t>(d)];
    ++steps;
  }
  const auto& table = which == OutputFn::AC ? dfao.tau_ac : dfao.tau_b;
  return EvalTrace{table[static_cast<std::size_t>(state)], steps};
}

std::int64_t eval_digits(const Dfao& dfao, const NormalURep& digits, OutputFn which) {
  return eval_digits_traced(dfao, digits, which).value;
}

std::int64_t eval_n(const Dfao& dfao, USequence& useq, const mpz_class& n, OutputFn which) {
  return eval_digits(dfao, greedy_urep(useq, n), which);
}

std::int64_t eval_n(const Dfao& dfao, USequence& useq, std::int64_t n, OutputFn which) {
  return eval_digits(dfao, greedy_urep(useq, n), which);
}

Dfao minimize(const Dfao& dfao, MinimizeGoal goal) {
  const std::size_t n = static_cast<std::size_t>(dfao.num_states);
  const std::size_t digit_count = static_cast<std::size_t>(dfao.alphabet_max_digit) + 1;

  // Initial coloring by the selected output(s), ids by first occurrence.
  std::vector<std::int32_t> block(n);
  {
    std::map<std::pair<std::int64_t, std::int64_t>, std::int32_t> color_ids;
    for (std::size_t s = 0; s < n; ++s) {
      std::pair<std::int64_t, std::int64_t> key{0, 0};
      switch (goal) {
        case MinimizeGoal::Both:
          key = {dfao.tau_ac[s], dfao.tau_b[s]};
          break;
        case MinimizeGoal::ACOnly:
          key = {dfao.tau_ac[s], 0};
          break;
        case MinimizeGoal::BalanceOnly:
          key = {dfao.tau_b[s], 0};
          break;
      }
      auto [it, inserted] = color_ids.try_emplace(key, static_cast<std::int32_t>(color_ids.size()));
      block[s] = it->second;
    }
  }

  while (true) {
    std::map<std::vector<std::int32_t>, std::int32_t> sig_ids;
    std::vector<std::int32_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::int32_t> sig;
      sig.reserve(digit_count + 1);
      sig.push_back(block[s]);
      for (std::size_t d = 0; d < digit_count; ++d) {
        sig.push_back(block[static_cast<std::size_t>(dfao.delta[s][d])]);
      }
      auto [it, inserted] = sig_ids.try_emplace(std::move(sig), static_cast<std::int32_t>(sig_ids.size()));
      next[s] = it->second;
    }
    bool changed = next != block;
    block = std::move(next);
    if (!changed) break;
  }

  // Renumber blocks by first occurrence so state 0 stays initial.
  std::int32_t block_count = 0;
  std::vector<std::int32_t> renum(n, -1);
  std::vector<std::size_t> rep;
  for (std::size_t s = 0; s < n; ++s) {
    if (renum[static_cast<std::size_t>(block[s])] < 0) {
      renum[static_cast<std::size_t>(block[s])] = block_count++;
      rep.push_back(s);
    }
  }
  for (auto& b : block) b = renum[static_cast<std::size_t>(b)];

  Dfao out;
  out.num_states = block_count;
  out.alphabet_max_digit = dfao.alphabet_max_digit;
  out.delta.resize(static_cast<std::size_t>(block_count));
  out.tau_ac.resize(static_cast<std::size_t>(block_count));
  out.tau_b.resize(static_cast<std::size_t>(block_count));
  for (std::int32_t b = 0; b < block_count; ++b) {
    const std::size_t s = rep[static_cast<std::size_t>(b)];
    auto& row = out.delta[static_cast<std::size_t>(b)];
    row.resize(digit_count);
    for (std::size_t d = 0; d < digit_count; ++d) {
      row[d] = block[static_cast<std::size_t>(dfao.delta[s][d])];
    }
    out.tau_ac[static_cast<std::size_t>(b)] = dfao.tau_ac[s];
    out.tau_b[static_cast<std::size_t>(b)] = dfao.tau_b[s];
  }
  out.sink = dfao.sink >= 0 ? block[static_cast<std::size_t>(dfao.sink)] : -1;
  out.meta = dfao.meta;
  out.meta.state_count = out.num_states - 1 - (out.sink >= 0 ? 1 : 0);
  return out;
}

Dfao prune_unreachable(const Dfao& dfao) {
  if (!dfao.meta.substitution.is_object()) {
    throw ShapeMismatch("pruning needs the substitution recorded in meta");
  }
  const ParrySubstitution sub = ParrySubstitution::from_json(dfao.meta.substitution);
  const GreedyValidity validity(sub);
  const std::size_t n = static_cast<std::size_t>(dfao.num_states);

  // Product search over (automaton state, validity state); a state survives
  // iff some greedy-valid digit string reaches it.
  std::vector<bool> keep(n, false);
  keep[0] = true;
  std::set<std::pair<std::int32_t, GreedyValidity::State>> visited;
  std::deque<std::pair<std::int32_t, GreedyValidity::State>> queue;
  GreedyValidity::State next_active;
  for (std::int64_t d = 1; d <= dfao.alphabet_max_digit; ++d) {
    if (!validity.step(validity.initial(), d, next_active)) continue;
    const std::int32_t target = dfao.delta[0][static_cast<std::size_t>(d)];
    keep[static_cast<std::size_t>(target)] = true;
    auto key = std::make_pair(target, next_active);
    if (visited.insert(key).second) queue.push_back(std::move(key));
  }
  while (!queue.empty()) {
    auto [state, active] = std::move(queue.front());
    queue.pop_front();
    for (std::int64_t d = 0; d <= dfao.alphabet_max_digit; ++d) {
      if (!validity.step(active, d, next_active)) continue;
      const std::int32_t target = dfao.delta[static_cast<std::size_t>(state)][static_cast<std::size_t>(d)];
      keep[static_cast<std::size_t>(target)] = true;
      auto key = std::make_pair(target, next_active);
      if (visited.insert(key).second) queue.push_back(key);
    }
  }

  bool dropped_any = false;
  for (std::size_t s = 0; s < n; ++s) {
    if (!keep[s] && static_cast<std::int32_t>(s) != dfao.sink) dropped_any = true;
  }
  if (!dropped_any) return dfao;

  // Dropped states are only enterable through non-greedy strings, so their
  // incoming transitions legally re-route to the sink.
  std::vector<std::int32_t> remap(n, -1);
  std::int32_t next_id = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (keep[s] && static_cast<std::int32_t>(s) != dfao.sink) {
      remap[s] = next_id++;
    }
  }
  const std::int32_t sink_id = next_id;

  Dfao out;
  out.num_states = sink_id + 1;
  out.alphabet_max_digit = dfao.alphabet_max_digit;
  out.sink = sink_id;
  out.meta = dfao.meta;
  out.meta.state_count = out.num_states - 2;
  const std::size_t digit_count = static_cast<std::size_t>(dfao.alphabet_max_digit) + 1;
  out.delta.assign(static_cast<std::size_t>(out.num_states),
                   std::vector<std::int32_t>(digit_count, sink_id));
  out.tau_ac.assign(static_cast<std::size_t>(out.num_states), 0);
  out.tau_b.assign(static_cast<std::size_t>(out.num_states), 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (remap[s] < 0) continue;
    const auto to = static_cast<std::size_t>(remap[s]);
    out.tau_ac[to] = dfao.tau_ac[s];
    out.tau_b[to] = dfao.tau_b[s];
    for (std::size_t d = 0; d < digit_count; ++d) {
      const std::int32_t old_target = dfao.delta[s][d];
      out.delta[to][d] = remap[static_cast<std::size_t>(old_target)] >= 0
                             ? remap[static_cast<std::size_t>(old_target)]
                             : sink_id;
    }
  }
  return out;
}

nlohmann::json export_json(const Dfao& dfao) {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["substitution"] = dfao.meta.substitution;
  doc["meta"] = {
      {"c", dfao.meta.c},
      {"H", dfao.meta.H},
      {"L", dfao.meta.L},
      {"states", dfao.meta.state_count},
      {"built_unix", dfao.meta.built_unix},
  };
  doc["alphabet_max_digit"] = dfao.alphabet_max_digit;
  doc["delta"] = dfao.delta;
  doc["tau_ac"] = dfao.tau_ac;
  doc["tau_b"] = dfao.tau_b;
  doc["sink"] = dfao.sink;
  return doc;
}

Dfao import_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("format_version")) {
    throw SyntaxError("not an automaton document");
  }
  if (doc["format_version"].get<int>() != 1) {
    throw SyntaxError("unsupported format_version");
  }
  Dfao dfao;
  try {
    dfao.alphabet_max_digit = doc.at("alphabet_max_digit").get<std::int64_t>();
    dfao.delta = doc.at("delta").get<std::vector<std::vector<std::int32_t>>>();
    dfao.tau_ac = doc.at("tau_ac").get<std::vector<std::int64_t>>();
    dfao.tau_b = doc.at("tau_b").get<std::vector<std::int64_t>>();
    dfao.sink = doc.at("sink").get<std::int32_t>();
    const auto& meta = doc.at("meta");
    dfao.meta.c = meta.at("c").get<std::int64_t>();
    dfao.meta.H = meta.at("H").get<std::int64_t>();
    dfao.meta.L = meta.at("L").get<std::int64_t>();
    dfao.meta.state_count = meta.at("states").get<std::int64_t>();
    dfao.meta.built_unix = meta.at("built_unix").get<std::int64_t>();
    dfao.meta.substitution = doc.at("substitution");
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(std::string("malformed automaton document: ") + e.what());
  }
  dfao.num_states = static_cast<std::int64_t>(dfao.delta.size());
  if (dfao.num_states == 0 || dfao.alphabet_max_digit < 1) {
    throw ShapeMismatch("degenerate automaton");
  }
  if (dfao.tau_ac.size() != dfao.delta.size() || dfao.tau_b.size() != dfao.delta.size()) {
    throw ShapeMismatch("output tables do not match the state count");
  }
  const std::size_t digit_count = static_cast<std::size_t>(dfao.alphabet_max_digit) + 1;
  for (const auto& row : dfao.delta) {
    if (row.size() != digit_count) throw ShapeMismatch("ragged transition table");
    for (std::int32_t target : row) {
      if (target < 0 || target >= dfao.num_states) {
        throw ShapeMismatch("transition target out of range");
      }
    }
  }
  if (dfao.sink >= dfao.num_states || dfao.sink < -1) {
    throw ShapeMismatch("sink index out of range");
  }
  return dfao;
}

Dfao load_dfao(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SyntaxError("cannot open " + path);
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw SyntaxError("malformed JSON in " + path);
  return import_json(doc);
}

std::string export_dot(const Dfao& dfao) {
  std::ostringstream out;
  out << "digraph dfao {\n  rankdir=LR;\n";
  for (std::int64_t s = 0; s < dfao.num_states; ++s) {
    out << "  " << s << " [shape=" << (s == 0 ? "doublecircle" : "circle")
        << ", label=\"" << s << " / τ=" << dfao.tau_ac[static_cast<std::size_t>(s)]
        << " τ_B=" << dfao.tau_b[static_cast<std::size_t>(s)] << "\"];\n";
  }
  for (std::int64_t s = 0; s < dfao.num_states; ++s) {
    for (std::int64_t d = 0; d <= dfao.alphabet_max_digit; ++d) {
      out << "  " << s << " -> "
          << dfao.delta[static_cast<std::size_t>(s)][static_cast<std::size_t>(d)]
          << " [label=\"" << d << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

BuildReport build_dfao(const ParrySubstitution& sub, const BuildOptions& opts) {
  sub.validate();
  BuildReport report;
  report.spectral = spectral_balance_check(sub);
  report.c_estimate = estimate_c(sub, opts.limits.max_word_len);
  std::int64_t c = opts.c ? *opts.c : std::max<std::int64_t>(report.c_estimate.c, 1);
  c += opts.c_margin;
  if (c < 1) throw RangeError("balance bound c must be positive");

  report.consts = derive_constants(sub, c, opts.limits);
  FixpointResult fix = fixpoint_enumerate(sub, report.consts, opts.limits);
  report.states_before_minimize = fix.states.size() + (fix.has_sink ? 1 : 0);
  report.mem2_size = fix.mem2_size;
  report.iterations = fix.iterations;
  const OutputTables outputs = compute_outputs(fix.states);

  DfaoMeta meta;
  meta.c = report.consts.c;
  meta.H = report.consts.H;
  meta.L = report.consts.L;
  meta.substitution = sub.to_json();
  meta.built_unix = opts.reproducible ? 0 : static_cast<std::int64_t>(std::time(nullptr));
  report.dfao = assemble(fix, outputs, std::move(meta));
  if (opts.prune) report.dfao = prune_unreachable(report.dfao);
  if (opts.minimize) report.dfao = minimize(report.dfao, opts.goal);
  return report;
}

}  // namespace parry
