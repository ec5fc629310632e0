#include "teammech/game.hpp"

#include <algorithm>
#include <sstream>

namespace teammech {

std::string KernelKey::str() const {
  std::ostringstream os;
  os << "agent " << agent << " round " << round_to << " (" << from_type << ", " << pub_type
     << ", " << x0 << ", " << xi << ")";
  return os.str();
}

const AgentType* GameSpec::find_type(AgentId a, int round, const std::string& label) const {
  for (const auto& t : type_spaces[a][round])
    if (t.label == label) return &t;
  return nullptr;
}

std::optional<Rat> GameSpec::annotation(AgentId a, int round, const std::string& label) const {
  const AgentType* t = find_type(a, round, label);
  if (t == nullptr) return std::nullopt;
  return t->prob;
}

bool pattern_matches(const std::string& pattern, const std::string& label) {
  if (pattern == "*" || pattern == label) return true;
  if (pattern.find('|') == std::string::npos) return false;
  // Component-wise match for product decision labels like "b4:0%|r4:0%|YES".
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      auto bar = s.find('|', start);
      parts.push_back(s.substr(start, bar == std::string::npos ? bar : bar - start));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    return parts;
  };
  auto p = split(pattern), l = split(label);
  if (p.size() != l.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != "*" && p[i] != l[i]) return false;
  return true;
}

Rat GameSpec::round_utility(const PathPrefix& prefix, int t, AgentId agent) const {
  if (custom_utility) return custom_utility(*this, prefix, t, agent);
  Rat total = 0;
  const std::string& x0 = (*prefix.public_decisions)[t - 1];
  const std::string& xi = (*prefix.private_decisions)[t - 1][agent];
  const std::string& own = (*prefix.types)[t][agent];
  const std::string& pub = (*prefix.types)[t][kPublicAgent];
  for (const auto& rule : utility_rules) {
    if (rule.agent != agent) continue;
    if (rule.round != -1 && rule.round != t) continue;
    if (!pattern_matches(rule.pub_decision, x0)) continue;
    if (!pattern_matches(rule.own_decision, xi)) continue;
    if (!pattern_matches(rule.own_type, own)) continue;
    if (!pattern_matches(rule.pub_type, pub)) continue;
    total += rule.value;
  }
  return total;
}

bool GameSpec::operator==(const GameSpec& o) const {
  return name == o.name && n == o.n && rounds == o.rounds && agent_names == o.agent_names &&
         type_spaces == o.type_spaces && initial_types == o.initial_types &&
         public_decision_spaces == o.public_decision_spaces &&
         private_decision_spaces == o.private_decision_spaces && kernel == o.kernel &&
         utility_rules == o.utility_rules && reveal_past_types == o.reveal_past_types;
}

const Distribution& successors(const GameSpec& spec, AgentId agent, int round_to,
                               const std::string& from_type, const std::string& pub_type,
                               const std::string& x0, const std::string& xi) {
  KernelKey key{agent, round_to, from_type, pub_type, x0, xi};
  auto it = spec.kernel.find(key);
  if (it == spec.kernel.end())
    throw SpecError("UndefinedKernelEntry", key.str());
  return it->second;
}

namespace {

// Walks every state reachable by *some* combination of reports/decisions and
// applies `visit` to the kernel key needed there. Report combinations matter
// because mechanisms price arbitrary reports, so every kernel row a lying
// agent could expose must exist.
void for_each_needed_kernel_key(const GameSpec& spec,
                                const std::function<void(const KernelKey&)>& visit) {
  for (AgentId a = 0; a < spec.num_agents(); ++a) {
    for (int t = 1; t <= spec.rounds; ++t) {
      // Any type of round t-1 can be a reported (pretend) predecessor.
      for (const auto& from : spec.space(a, t - 1)) {
        for (const auto& pub : spec.space(kPublicAgent, t - 1)) {
          std::vector<std::string> x0s, xis;
          if (t == 1) {
            x0s = {kNoDecision};
            xis = {kNoDecision};
          } else {
            x0s = spec.public_decisions_at(t - 1);
            xis = spec.private_decisions_at(a, t - 1);
          }
          for (const auto& x0 : x0s)
            for (const auto& xi : xis) visit(KernelKey{a, t, from.label, pub.label, x0, xi});
        }
      }
    }
  }
}

}  // namespace

const GameSpec& validate(const GameSpec& spec) {
  if (spec.n < 0 || spec.rounds < 0)
    throw SpecError("InvalidSpec", "negative agent or round count");
  if (static_cast<int>(spec.agent_names.size()) != spec.num_agents())
    throw SpecError("InvalidSpec", "agent_names size mismatch");
  if (static_cast<int>(spec.type_spaces.size()) != spec.num_agents())
    throw SpecError("InvalidSpec", "type_spaces size mismatch");
  for (AgentId a = 0; a < spec.num_agents(); ++a) {
    if (static_cast<int>(spec.type_spaces[a].size()) != spec.rounds + 1)
      throw SpecError("InvalidSpec",
                      "agent " + spec.agent_names[a] + " needs spaces for rounds 0.." +
                          std::to_string(spec.rounds));
    for (int t = 0; t <= spec.rounds; ++t) {
      if (spec.type_spaces[a][t].empty())
        throw SpecError("InvalidSpec", "empty type space, agent " + spec.agent_names[a] +
                                           " round " + std::to_string(t));
      std::set<std::string> seen;
      for (const auto& ty : spec.type_spaces[a][t]) {
        if (!seen.insert(ty.label).second)
          throw SpecError("InvalidSpec", "duplicate type label " + ty.label);
        if (ty.prob && (*ty.prob < 0 || *ty.prob > 1))
          throw SpecError("InvalidSpec", "annotation outside [0,1] on " + ty.label);
      }
    }
  }
  if (static_cast<int>(spec.initial_types.size()) != spec.num_agents())
    throw SpecError("InvalidSpec", "initial_types size mismatch");
  for (AgentId a = 0; a < spec.num_agents(); ++a)
    if (spec.find_type(a, 0, spec.initial_types[a]) == nullptr)
      throw SpecError("InvalidSpec", "initial type " + spec.initial_types[a] +
                                         " not in round-0 space of " + spec.agent_names[a]);
  if (static_cast<int>(spec.public_decision_spaces.size()) != spec.rounds)
    throw SpecError("InvalidSpec", "public decision spaces must cover rounds 1..T");
  if (static_cast<int>(spec.private_decision_spaces.size()) != spec.num_agents())
    throw SpecError("InvalidSpec", "private decision spaces size mismatch");
  for (AgentId a = 0; a < spec.num_agents(); ++a)
    if (static_cast<int>(spec.private_decision_spaces[a].size()) != spec.rounds)
      throw SpecError("InvalidSpec", "private decision spaces must cover rounds 1..T");

  // Every distribution must sum to exactly 1 with support in the right space.
  for (const auto& [key, dist] : spec.kernel) {
    Rat total = 0;
    for (const auto& [label, w] : dist) {
      if (w < 0) throw SpecError("NonUnitDistribution", key.str() + " has negative weight");
      if (spec.find_type(key.agent, key.round_to, label) == nullptr)
        throw SpecError("DanglingKernelEntry",
                        key.str() + " -> " + label + " not a round-" +
                            std::to_string(key.round_to) + " type");
      total += w;
    }
    if (total != 1)
      throw SpecError("NonUnitDistribution", key.str() + " sums to " + rat_str(total));
  }

  for_each_needed_kernel_key(spec, [&](const KernelKey& key) {
    if (spec.kernel.find(key) == spec.kernel.end())
      throw SpecError("DanglingKernelEntry", "missing kernel row for " + key.str());
  });

  // Utility rules must reference declared agents; rounds must exist.
  for (const auto& rule : spec.utility_rules) {
    if (rule.agent < 0 || rule.agent >= spec.num_agents())
      throw SpecError("MissingUtility", "utility rule names unknown agent " +
                                            std::to_string(rule.agent));
    if (rule.round != -1 && (rule.round < 1 || rule.round > spec.rounds))
      throw SpecError("MissingUtility",
                      "utility rule names round " + std::to_string(rule.round));
  }
  return spec;
}

std::vector<MartingaleViolation> check_martingale_annotations(const GameSpec& spec) {
  std::vector<MartingaleViolation> out;
  for (const auto& [key, dist] : spec.kernel) {
    auto from_ann = spec.annotation(key.agent, key.round_to - 1, key.from_type);
    if (!from_ann) continue;
    Rat expectation = 0;
    bool all_annotated = true;
    for (const auto& [label, w] : dist) {
      auto ann = spec.annotation(key.agent, key.round_to, label);
      if (!ann) {
        all_annotated = false;
        break;
      }
      expectation += w * (*ann);
    }
    if (!all_annotated) continue;
    if (expectation != *from_ann)
      out.push_back({key.agent, key.round_to - 1, key.from_type, *from_ann, expectation,
                     key.str()});
  }
  return out;
}

}  // namespace teammech
