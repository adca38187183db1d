// Batch commands behind the `presup` executable. Argument parsing lives in
// tools/presup.cpp; everything that shapes output is here so it can be
// tested without a process boundary.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "presup/bench.hpp"
#include "presup/formulas.hpp"
#include "presup/proof_check.hpp"
#include "presup/projection.hpp"
#include "presup/syntax.hpp"
#include "presup/tableau.hpp"

namespace presup::cli {

enum class Command { parse, translate, prove, project, bench };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::parse: return "parse";
    case Command::translate: return "translate";
    case Command::prove: return "prove";
    case Command::project: return "project";
    case Command::bench: return "bench";
  }
  return "?";
}

enum ExitStatus : int {
  kSuccess = 0,
  kParseError = 1,
  kResourceOut = 2,
  kDisagreement = 3,
};

struct FamilySpec {
  unsigned n = 1;
  unsigned k = 1;
  std::uint64_t seed = 0;
};

struct CliConfig {
  Command command = Command::parse;
  ProofLimits limits;
  bool json = false;
  bool trace = false;
  bool check = false;
  std::optional<FamilySpec> family;
};

namespace detail {

inline std::string format_stats(const ProofStats& s) {
  std::string out;
  auto line = [&out](const std::string& k, std::uint64_t v) {
    out += k + ": " + std::to_string(v) + "\n";
  };
  line("nodes created", s.nodes_created);
  line("branches opened", s.branches_opened);
  line("branches closed", s.branches_closed);
  line("formula expansions", s.formula_expansions);
  line("unification attempts", s.unification_attempts);
  for (auto r : kExpansionRules)
    if (s[r]) line(std::string("rule ") + rule_name(r), s[r]);
  return out;
}

inline nlohmann::json trace_json(const Proof& proof) {
  std::map<NodeId, const Closure*> by_leaf;
  for (const auto& c : proof.closures) by_leaf[c.leaf] = &c;
  auto id = [](NodeId n) { return n == kNoNode ? nlohmann::json(nullptr) : nlohmann::json(n); };
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : proof.nodes) {
    nlohmann::json j = {{"id", n.id},           {"label", render(n.label)},
                        {"formula", render(n.formula)}, {"rule", rule_name(n.rule)},
                        {"premise", id(n.premise)},     {"parent", id(n.parent)}};
    auto it = by_leaf.find(n.id);
    j["closure"] = it == by_leaf.end()
                       ? nlohmann::json(nullptr)
                       : nlohmann::json::array({it->second->positive, it->second->negative});
    nodes.push_back(j);
  }
  return nodes;
}

inline nlohmann::json error_json(Command c, const ParseError& e) {
  return {{"command", command_name(c)},
          {"error",
           {{"message", e.message()},
            {"start", e.span().start},
            {"end", e.span().end},
            {"expected", e.expected()}}}};
}

inline int parse_command(const CliConfig& cfg, std::string_view input, std::ostream& out) {
  std::string rendered;
  const char* language = "pre";
  try {
    rendered = render(parse_pre(input));
  } catch (const ParseError& pre_error) {
    try {
      rendered = render(parse_con(input));
      language = "con";
    } catch (const ParseError& con_error) {
      throw con_error.span().start > pre_error.span().start ? con_error : pre_error;
    }
  }
  if (cfg.json)
    out << nlohmann::json{{"command", "parse"}, {"language", language}, {"formula", rendered}}
        << '\n';
  else
    out << rendered << '\n';
  return kSuccess;
}

inline int translate_command(const CliConfig& cfg, std::string_view input, std::ostream& out,
                             std::ostream& err) {
  PreFormula f = parse_pre(input);
  Translation t = translate(f);
  std::string rendered = render(simplify_top(t.formula));
  if (cfg.json) {
    out << nlohmann::json{{"command", "translate"},
                          {"formula", render(f)},
                          {"translation", rendered},
                          {"warnings", t.warnings}}
        << '\n';
  } else {
    for (const auto& w : t.warnings) err << "warning: " << w << '\n';
    out << rendered << '\n';
  }
  return kSuccess;
}

inline int prove_command(const CliConfig& cfg, std::string_view input, std::ostream& out) {
  ConFormula goal = parse_con(input);
  ProofResult r = prove(goal, cfg.limits);
  std::optional<bool> verified;
  if (r.proof) verified = check_proof(*r.proof).empty();
  if (cfg.json) {
    nlohmann::json j = {{"command", "prove"},
                        {"goal", render(goal)},
                        {"verdict", verdict_name(r.verdict)},
                        {"stats", to_json(r.stats)}};
    if (verified) j["verified"] = *verified;
    if (cfg.trace && r.proof) j["trace"] = trace_json(*r.proof);
    out << j << '\n';
  } else {
    out << verdict_name(r.verdict) << '\n' << format_stats(r.stats);
    if (verified) out << "verified: " << (*verified ? "yes" : "no") << '\n';
    if (cfg.trace && r.proof) out << render_trace(*r.proof);
  }
  return r.verdict == ProofVerdict::resource_out ? kResourceOut : kSuccess;
}

inline int project_command(const CliConfig& cfg, std::string_view input, std::ostream& out,
                           std::ostream& err) {
  PreFormula f = parse_pre(input);
  PresuppositionSet set = pres(f, {}, cfg.limits);
  std::optional<ContextualRun> contextual;
  int status = kSuccess;
  if (cfg.check) {
    contextual = run_contextual(f, cfg.limits);
    bool undecided =
        set.any_unknown() || contextual->verdict == ProofVerdict::resource_out;
    if (!undecided && set.none_project() != contextual->none_project) status = kDisagreement;
  }
  if (cfg.json) {
    nlohmann::json j = to_json(set);
    j["command"] = "project";
    j["formula"] = render(f);
    if (contextual)
      j["contextual_check"] = {
          {"translation", render(contextual->translation)},
          {"none_project", contextual->none_project},
          {"agrees", status == kSuccess}};
    out << j << '\n';
  } else {
    out << format_presuppositions(set);
    if (contextual)
      err << "contextual check: " << (status == kSuccess ? "agrees" : "DISAGREES") << '\n';
  }
  return status;
}

inline int bench_command(const CliConfig& cfg, std::string_view input, std::ostream& out,
                         std::ostream& err) {
  PreFormula f = cfg.family ? generate_family(cfg.family->n, cfg.family->k, cfg.family->seed)
                            : parse_pre(input);
  BenchReport report = [&] {
    try {
      return compare(f, cfg.limits);
    } catch (const DisagreementError& e) {
      err << "error: " << e.what() << '\n';
      throw;
    }
  }();
  if (cfg.json)
    out << to_json(report) << '\n';
  else
    out << to_table(report);
  return report.decided ? kSuccess : kResourceOut;
}

}  // namespace detail

// Runs one command on `input` (ignored by `bench --family`).
inline int run(const CliConfig& cfg, std::string_view input, std::ostream& out,
               std::ostream& err) {
  try {
    cfg.limits.validate();
    switch (cfg.command) {
      case Command::parse: return detail::parse_command(cfg, input, out);
      case Command::translate: return detail::translate_command(cfg, input, out, err);
      case Command::prove: return detail::prove_command(cfg, input, out);
      case Command::project: return detail::project_command(cfg, input, out, err);
      case Command::bench: return detail::bench_command(cfg, input, out, err);
    }
  } catch (const ParseError& e) {
    if (cfg.json) {
      out << detail::error_json(cfg.command, e) << '\n';
    } else {
      err << "error: " << e.what() << '\n';
      err << "  " << input << '\n';
      err << "  " << std::string(e.span().start, ' ')
          << std::string(std::max<std::size_t>(1, e.span().end - e.span().start), '^') << '\n';
    }
    return kParseError;
  } catch (const DisagreementError&) {
    return kDisagreement;
  }
  return kSuccess;
}

}  // namespace presup::cli
