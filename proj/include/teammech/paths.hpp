#pragma once

#include <functional>
#include <vector>

#include "teammech/policy.hpp"
#include "teammech/strategy.hpp"

namespace teammech {

struct EnumOptions {
  // When set, reports happen one agent at a time in this order and later
  // reporters observe the earlier same-round reports (the sequential-update
  // information structure). Empty = simultaneous reports.
  std::vector<AgentId> sequential_order;
};

// Streams every terminal path of the game under `profile`; emitted
// probabilities sum exactly to 1. Decisions follow the efficient policy of
// `engine`; private decisions follow the strategies (recommendation by
// default). Throws SpecError{UnreachableObservation} on partial strategies.
void enumerate_paths(TrustfulEngine& engine, const StrategyProfile& profile,
                     const std::function<void(const PathState&)>& emit,
                     const EnumOptions& options = {});

std::vector<PathState> collect_paths(TrustfulEngine& engine, const StrategyProfile& profile,
                                     const EnumOptions& options = {});

// Realized total utility of every agent along a path (no transfers).
std::vector<Rat> path_utilities(const GameSpec& spec, const PathState& path);

}  // namespace teammech
