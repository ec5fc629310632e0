#include "teammech/policy.hpp"

#include <algorithm>
#include <sstream>

namespace teammech {

std::string Stage::key() const {
  std::ostringstream os;
  os << t << '#';
  for (std::size_t a = 1; a < updated.size(); ++a) os << (updated[a] ? '1' : '0');
  for (const auto& row : reports) {
    os << '#';
    for (const auto& r : row) os << r << ';';
  }
  os << '@';
  for (std::size_t s = 0; s < x0s.size(); ++s) {
    os << x0s[s] << '!';
    for (const auto& d : xis[s]) os << d << ';';
  }
  return os.str();
}

bool stage_all_updated(const Stage& stage) {
  for (std::size_t a = 1; a < stage.updated.size(); ++a)
    if (!stage.updated[a]) return false;
  return true;
}

namespace {

PretendPrefix stage_prefix(const Stage& stage) {
  PretendPrefix pre;
  pre.types = stage.reports;
  pre.reports = stage.reports;
  pre.public_decisions = stage.x0s;
  pre.private_decisions = stage.xis;
  return pre;
}

}  // namespace

const std::vector<Rat>& TrustfulEngine::value(const Stage& stage) {
  std::string k = stage.key();
  auto it = values_.find(k);
  if (it != values_.end()) return it->second;

  const GameSpec& spec = *spec_;
  const int n1 = spec.num_agents();
  std::vector<Rat> out;

  if (stage.t > spec.rounds) {
    out.assign(n1, Rat(0));
  } else if (!stage_all_updated(stage)) {
    // Integrate pending agents one at a time; independence makes the order
    // irrelevant, so take the lowest id.
    AgentId a = 1;
    while (stage.updated[a]) ++a;
    const std::string& from = stage.reports[stage.t - 1][a];
    const std::string& pub_prev = stage.reports[stage.t - 1][kPublicAgent];
    std::string x0 = kNoDecision, xi = kNoDecision;
    if (stage.t > 1) {
      x0 = stage.x0s[stage.t - 2];
      xi = stage.xis[stage.t - 2][a];
    }
    const Distribution& dist = successors(spec, a, stage.t, from, pub_prev, x0, xi);
    out.assign(n1, Rat(0));
    for (const auto& [label, w] : dist) {
      Stage next = stage;
      next.updated[a] = true;
      next.reports[stage.t][a] = label;
      const std::vector<Rat>& sub = value(next);
      for (int i = 0; i < n1; ++i) out[i] += w * sub[i];
    }
  } else {
    const DecisionChoice& best = decision(stage);
    out = continuation(stage, best);
  }
  return values_.emplace(std::move(k), std::move(out)).first->second;
}

// Round-t utilities under a concrete decision plus the expected remainder.
std::vector<Rat> TrustfulEngine::continuation(const Stage& stage, const DecisionChoice& d) {
  const GameSpec& spec = *spec_;
  const int n1 = spec.num_agents();
  const int t = stage.t;

  PretendPrefix pre = stage_prefix(stage);
  pre.public_decisions.push_back(d.x0);
  pre.private_decisions.push_back(d.xi);
  PathPrefix view = pre.view(t);
  std::vector<Rat> out(n1, Rat(0));
  for (int i = 0; i < n1; ++i) out[i] = spec.round_utility(view, t, i);

  if (t < spec.rounds) {
    const std::string& pub_now = stage.reports[t][kPublicAgent];
    const Distribution& pub_dist =
        successors(spec, kPublicAgent, t + 1, pub_now, pub_now, d.x0, d.xi[kPublicAgent]);
    for (const auto& [pub_label, w] : pub_dist) {
      Stage next;
      next.t = t + 1;
      next.updated.assign(n1, false);
      next.updated[kPublicAgent] = true;
      next.reports = stage.reports;
      next.reports.push_back(std::vector<std::string>(n1));
      next.reports[t + 1][kPublicAgent] = pub_label;
      next.x0s = stage.x0s;
      next.x0s.push_back(d.x0);
      next.xis = stage.xis;
      next.xis.push_back(d.xi);
      const std::vector<Rat>& sub = value(next);
      for (int i = 0; i < n1; ++i) out[i] += w * sub[i];
    }
  }
  return out;
}

const DecisionChoice& TrustfulEngine::decision(const Stage& stage) {
  std::string k = stage.key();
  auto it = decisions_.find(k);
  if (it != decisions_.end()) return it->second;

  const GameSpec& spec = *spec_;
  const int n1 = spec.num_agents();
  const int t = stage.t;

  std::vector<std::vector<std::string>> choices;
  choices.push_back(spec.public_decisions_at(t));
  for (AgentId a = 0; a < n1; ++a) {
    if (a == kPublicAgent)
      choices.push_back({kNoDecision});
    else
      choices.push_back(spec.private_decisions_at(a, t));
  }

  std::vector<std::size_t> idx(choices.size(), 0);
  bool have_best = false;
  Rat best_total = 0;
  DecisionChoice best;

  while (true) {
    DecisionChoice cand;
    cand.x0 = choices[0][idx[0]];
    cand.xi.resize(n1);
    for (int a = 0; a < n1; ++a) cand.xi[a] = choices[a + 1][idx[a + 1]];

    std::vector<Rat> vals = continuation(stage, cand);
    Rat total = 0;
    for (const Rat& v : vals) total += v;
    if (!have_best || total > best_total) {
      have_best = true;
      best_total = total;
      best = cand;
    }

    std::size_t pos = choices.size();
    bool done = false;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < choices[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) done = true;
    }
    if (done) break;
  }
  return decisions_.emplace(std::move(k), std::move(best)).first->second;
}

std::vector<Rat> TrustfulEngine::initial_value() {
  const GameSpec& spec = *spec_;
  const int n1 = spec.num_agents();
  if (spec.rounds == 0) return std::vector<Rat>(n1, Rat(0));
  const std::string& pub0 = spec.initial_types[kPublicAgent];
  const Distribution& pub_dist =
      successors(spec, kPublicAgent, 1, pub0, pub0, kNoDecision, kNoDecision);
  std::vector<Rat> out(n1, Rat(0));
  for (const auto& [pub_label, w] : pub_dist) {
    Stage st;
    st.t = 1;
    st.updated.assign(n1, false);
    st.updated[kPublicAgent] = true;
    st.reports.push_back(spec.initial_types);
    st.reports.push_back(std::vector<std::string>(n1));
    st.reports[1][kPublicAgent] = pub_label;
    const std::vector<Rat>& sub = value(st);
    for (int i = 0; i < n1; ++i) out[i] += w * sub[i];
  }
  return out;
}

}  // namespace teammech
