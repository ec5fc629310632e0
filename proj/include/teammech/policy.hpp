#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "teammech/game.hpp"

namespace teammech {

// A trustful stage inside round t: agents flagged in `updated` have made their
// round-t report; the rest still stand at round t-1. Row `t` of `reports`
// holds the round-t reports of updated agents (slot 0 carries the realized
// public type of round t, which is revealed before anyone reports).
// The stage carries the pretend decision history for rounds 1..t-1: public
// decisions are the ones the mechanism actually made, private decisions are
// the policy recommendations (the designer prices trustfully, as if
// recommendations were followed).
struct Stage {
  int t = 1;
  std::vector<bool> updated;                      // size n+1; slot 0 always true
  std::vector<std::vector<std::string>> reports;  // rows 0..t, [0..n]
  std::vector<std::string> x0s;                   // rounds 1..t-1
  std::vector<std::vector<std::string>> xis;      // rounds 1..t-1, [0..n]

  std::string key() const;
};

struct DecisionChoice {
  std::string x0;
  std::vector<std::string> xi;  // recommendations, size n+1 (slot 0 = kNoDecision)
};

// Backward-induction engine over the trustful measure. Computes the efficient
// decision policy (ties broken by declaration order: the first maximizer in
// the enumeration of the decision product wins) and the expected remaining
// utility vector at every reachable stage, exactly.
class TrustfulEngine {
 public:
  explicit TrustfulEngine(const GameSpec& spec) : spec_(&spec) {}

  const GameSpec& spec() const { return *spec_; }

  // Expected remaining utility (rounds t..T) per agent, including agent 0.
  const std::vector<Rat>& value(const Stage& stage);

  // Efficient decision at a fully updated stage.
  const DecisionChoice& decision(const Stage& stage);

  // Value before round 1: expectation over the public draw and everything
  // after. Equals Upsilon_{0,0} in the fixed-mechanism notation.
  std::vector<Rat> initial_value();

  std::size_t table_size() const { return values_.size(); }

 private:
  std::vector<Rat> continuation(const Stage& full_stage, const DecisionChoice& d);

  const GameSpec* spec_;
  std::map<std::string, std::vector<Rat>> values_;
  std::map<std::string, DecisionChoice> decisions_;
};

// Pretend prefix assembled from a stage (reports as types plus the carried
// decision history), for round-utility evaluation.
struct PretendPrefix {
  std::vector<std::vector<std::string>> types;
  std::vector<std::vector<std::string>> reports;
  std::vector<std::string> public_decisions;
  std::vector<std::vector<std::string>> private_decisions;

  PathPrefix view(int rounds) const {
    return PathPrefix{&types, &reports, &public_decisions, &private_decisions, rounds};
  }
};

bool stage_all_updated(const Stage& stage);

}  // namespace teammech
