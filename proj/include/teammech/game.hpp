#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "teammech/rational.hpp"

namespace teammech {

// Agents are indexed 0..n where 0 is the public agent (its type is revealed,
// it never receives transfers). Agents 1..n report and are priced.
using AgentId = int;
constexpr AgentId kPublicAgent = 0;

// Sentinel decision label used where a round has no decision (and as the
// "previous decision" of round 1).
inline const std::string kNoDecision = "-";

struct SpecError : std::runtime_error {
  std::string kind;
  SpecError(std::string k, const std::string& what)
      : std::runtime_error(k + ": " + what), kind(std::move(k)) {}
};

struct AgentType {
  std::string label;
  std::optional<Rat> prob;  // annotation: probability the final type is HIGH

  bool operator==(const AgentType& o) const {
    return label == o.label && prob == o.prob;
  }
};

// Kernel rows are keyed by the state just before a draw: the agent's previous
// type, the previous public type, and the decisions taken since then.
struct KernelKey {
  AgentId agent = 0;
  int round_to = 0;  // round of the drawn type (1..T)
  std::string from_type;
  std::string pub_type;
  std::string x0;  // public decision of round_to - 1 (kNoDecision for round 1)
  std::string xi;  // agent's private decision of round_to - 1

  auto tie() const { return std::tie(agent, round_to, from_type, pub_type, x0, xi); }
  bool operator<(const KernelKey& o) const { return tie() < o.tie(); }
  bool operator==(const KernelKey& o) const { return tie() == o.tie(); }
  std::string str() const;
};

using Distribution = std::vector<std::pair<std::string, Rat>>;

// Additive utility rule: the round utility of an agent is the sum of the
// values of all matching rules. Patterns match a whole label, "*", or
// per-component on '|' for product decision spaces.
struct UtilityRule {
  AgentId agent = 0;
  int round = -1;  // -1 matches every round
  std::string pub_decision = "*";
  std::string own_decision = "*";
  std::string own_type = "*";
  std::string pub_type = "*";
  Rat value;

  bool operator==(const UtilityRule& o) const {
    return agent == o.agent && round == o.round && pub_decision == o.pub_decision &&
           own_decision == o.own_decision && own_type == o.own_type &&
           pub_type == o.pub_type && value == o.value;
  }
};

// Fully realized play: types for rounds 0..T, reports and decisions for
// rounds 1..T. Index [t][agent]; agent slot 0 is the public agent, whose
// "report" is its revealed type.
struct PathState {
  std::vector<std::vector<std::string>> types;              // [0..T][0..n]
  std::vector<std::vector<std::string>> reports;            // [0..T][0..n]
  std::vector<std::string> public_decisions;                // [1..T] at index t-1
  std::vector<std::vector<std::string>> private_decisions;  // [1..T][0..n]
  Rat prob = 1;

  const std::string& public_decision(int t) const { return public_decisions[t - 1]; }
  const std::string& private_decision(int t, AgentId i) const {
    return private_decisions[t - 1][i];
  }
};

// View of a path prefix used by custom (non-Markov) utility evaluators:
// everything realized up to and including round t.
struct PathPrefix {
  const std::vector<std::vector<std::string>>* types = nullptr;
  const std::vector<std::vector<std::string>>* reports = nullptr;
  const std::vector<std::string>* public_decisions = nullptr;
  const std::vector<std::vector<std::string>>* private_decisions = nullptr;
  int rounds = 0;  // decisions available for rounds 1..rounds
};

using CustomRoundUtility =
    std::function<Rat(const struct GameSpec&, const PathPrefix&, int t, AgentId agent)>;

struct GameSpec {
  std::string name;
  int n = 0;  // reporting agents 1..n
  int rounds = 0;
  std::vector<std::string> agent_names;  // size n+1, index 0 = public agent

  // type_spaces[agent][round] for rounds 0..T; declaration order is the
  // deterministic tie-break and report-enumeration order.
  std::vector<std::vector<std::vector<AgentType>>> type_spaces;
  std::vector<std::string> initial_types;  // [0..n], labels of round-0 types

  // Decision spaces per round 1..T (index t-1). Singleton {kNoDecision} when
  // a round has nothing to decide.
  std::vector<std::vector<std::string>> public_decision_spaces;
  std::vector<std::vector<std::vector<std::string>>> private_decision_spaces;  // [agent][t-1]

  std::map<KernelKey, Distribution> kernel;

  std::vector<UtilityRule> utility_rules;
  CustomRoundUtility custom_utility;  // optional; disables Markov-only shortcuts
  bool markov_utilities = true;

  // Scenario toggle for the Appendix-style revelation variant: agents observe
  // each other's past true types (a verifiable disclosure channel).
  bool reveal_past_types = false;

  int num_agents() const { return n + 1; }
  const std::vector<AgentType>& space(AgentId a, int round) const {
    return type_spaces[a][round];
  }
  const AgentType* find_type(AgentId a, int round, const std::string& label) const;
  std::optional<Rat> annotation(AgentId a, int round, const std::string& label) const;
  const std::vector<std::string>& public_decisions_at(int t) const {
    return public_decision_spaces[t - 1];
  }
  const std::vector<std::string>& private_decisions_at(AgentId a, int t) const {
    return private_decision_spaces[a][t - 1];
  }

  // Round utility of `agent` in round t along a realized or pretend prefix.
  Rat round_utility(const PathPrefix& prefix, int t, AgentId agent) const;

  bool operator==(const GameSpec& o) const;
};

// validate() returns the spec unchanged iff every invariant holds and throws
// SpecError{DanglingKernelEntry|NonUnitDistribution|MissingUtility|...}
// naming the first offending state otherwise.
const GameSpec& validate(const GameSpec& spec);

// Exact successor distribution; throws SpecError{UndefinedKernelEntry}.
const Distribution& successors(const GameSpec& spec, AgentId agent, int round_to,
                               const std::string& from_type, const std::string& pub_type,
                               const std::string& x0, const std::string& xi);

struct MartingaleViolation {
  AgentId agent;
  int round;
  std::string label;
  Rat annotated;
  Rat expected;  // expectation of successor annotations
  std::string context;
};

// Checks every annotated type with an outgoing kernel row: the annotation must
// equal the expectation of the successor annotations, exactly.
std::vector<MartingaleViolation> check_martingale_annotations(const GameSpec& spec);

bool pattern_matches(const std::string& pattern, const std::string& label);

}  // namespace teammech
