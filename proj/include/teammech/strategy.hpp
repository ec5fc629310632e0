#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "teammech/game.hpp"

namespace teammech {

// What an agent knows when acting: his own type history, every past public
// report (round 0 = the publicly known initial types), the public types
// revealed so far, decision history, and - only under the sequential
// mechanism - the same-round reports already made. When a scenario enables
// the revelation variant, past true types of the others are visible too.
struct Observation {
  const GameSpec* spec = nullptr;
  AgentId agent = 0;
  int round = 0;  // the round being reported / decided

  std::vector<std::string> own_types;                  // rounds 0..round
  std::vector<std::vector<std::string>> reports;       // rounds 0..round-1, [0..n]
  std::string current_public_type;                     // revealed before reports
  std::vector<std::string> public_decisions;           // rounds 1..round-1
  std::vector<std::string> own_private_decisions;      // rounds 1..round-1
  std::map<AgentId, std::string> same_round_reports;   // sequential order only
  std::vector<std::vector<std::string>> revealed;      // rounds 0..round-1 true types,
                                                       // empty unless reveal_past_types

  // Filled only for the private-decision phase.
  bool decide_phase = false;
  std::vector<std::string> current_reports;  // round-`round` reports, [0..n]
  std::string public_decision;               // the announced x0 of this round
  std::string recommended;                   // policy recommendation for this agent
};

struct Strategy {
  std::string name;
  // Distribution over the agent's round-t type labels; weights sum to 1.
  std::function<Distribution(const Observation&)> report;
  // Private decision; empty function means "follow the recommendation".
  std::function<std::string(const Observation&)> decide;
};

// profile[a] for a = 1..n; slot 0 unused.
using StrategyProfile = std::vector<Strategy>;

struct StrategySet {
  AgentId agent = 0;
  std::vector<Strategy> items;
};

Strategy truthful_strategy();

// ---------------------------------------------------------------------------
// Script mini-language (shared with scenario files; grammar in FORMAT.md).
//
//   rule      := "round" (INT | "odd" | "even") ":" action | "default:" action
//   action    := "report" target
//              | "mix" "{" target ":" RAT ("," target ":" RAT)* "}"
//              | "if" cond "then" action "else" action
//   target    := "truth" | "high" | "low" | "mirror"
//              | "label" LABEL | "unlike" value | "like" value
//   cond      := disjunctions/conjunctions of atoms with "and", "or", "not",
//                parentheses; atom := value "is" ("high"|"low"|LABEL)
//              | "ann" value OP RAT   with OP in == != <= >= < >
//   value     := "rep(" AGENT "," INT ")" | "own(" INT ")"
//              | "seen(" AGENT "," INT ")"     (revelation variant only)
//
// Decision rules use "decide" in place of "round" prefixes and actions
//   "choose" LABEL | "recommended" | if/then/else.
//
// "high"/"low" pick the maximal/minimal annotated label of the round's space;
// "mirror" picks the label annotated 1 - (own current annotation); "unlike x"
// picks the label on the opposite side of 1/2 from x's annotation, "like x"
// the same side. Scripts referencing anything outside the observation throw
// SpecError{UnboundScriptReference}.
// ---------------------------------------------------------------------------

struct ScriptedStrategy {
  std::string name;
  std::string source;  // the script text, one rule per line
};

// Compiles a script for `agent`. Binding checks label references against the
// spec; unknown names surface as UnboundScriptReference at evaluation time
// (conditions may reference rounds generically, so some checks are dynamic).
Strategy compile_script(const GameSpec& spec, AgentId agent, const std::string& name,
                        const std::string& source);

}  // namespace teammech
