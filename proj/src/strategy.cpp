#include "teammech/strategy.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace teammech {

Strategy truthful_strategy() {
  Strategy s;
  s.name = "truthful";
  s.report = [](const Observation& obs) {
    return Distribution{{obs.own_types[obs.round], Rat(1)}};
  };
  s.decide = nullptr;  // follow recommendations
  return s;
}

namespace {

[[noreturn]] void unbound(const std::string& what) {
  throw SpecError("UnboundScriptReference", what);
}

// --- tokens ---------------------------------------------------------------

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '(' || c == ')' || c == ',' || c == '{' || c == '}' || c == '@') {
      flush();
      out.push_back(std::string(1, c));
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

struct Cursor {
  const std::vector<std::string>* toks;
  std::size_t pos = 0;
  bool done() const { return pos >= toks->size(); }
  const std::string& peek() const {
    static const std::string empty;
    return done() ? empty : (*toks)[pos];
  }
  std::string next() {
    if (done()) unbound("unexpected end of script rule");
    return (*toks)[pos++];
  }
  void expect(const std::string& tok) {
    if (next() != tok) unbound("expected '" + tok + "'");
  }
};

// --- AST ------------------------------------------------------------------

struct ValueRef {
  enum Kind { Rep, Own, Seen } kind = Own;
  std::string agent_name;
  int round = 0;
};

struct Cond;
using CondPtr = std::shared_ptr<Cond>;

struct Cond {
  enum Kind { IsHigh, IsLow, IsLabel, AnnCmp, And, Or, Not } kind;
  ValueRef value;
  std::string label;
  std::string op;
  Rat rhs;
  CondPtr a, b;
};

struct Action;
using ActionPtr = std::shared_ptr<Action>;

struct Target {
  enum Kind { Truth, High, Low, Mirror, Label, Unlike, Like, Recommended, Choose } kind;
  std::string label;
  ValueRef ref;
};

struct Action {
  enum Kind { Simple, Mix, If } kind = Simple;
  Target target;
  std::vector<std::pair<Target, Rat>> mix;
  CondPtr cond;
  ActionPtr then_branch, else_branch;
};

struct Rule {
  enum Selector { Exact, Odd, Even, Default } selector = Default;
  int round = 0;
  bool decide = false;
  ActionPtr action;
};

// --- parser ---------------------------------------------------------------

ValueRef parse_value(Cursor& c) {
  std::string head = c.next();
  ValueRef v;
  if (head == "rep" || head == "seen") {
    v.kind = head == "rep" ? ValueRef::Rep : ValueRef::Seen;
    c.expect("(");
    v.agent_name = c.next();
    c.expect(",");
    v.round = std::stoi(c.next());
    c.expect(")");
  } else if (head == "own") {
    v.kind = ValueRef::Own;
    c.expect("(");
    v.round = std::stoi(c.next());
    c.expect(")");
  } else {
    unbound("unknown value '" + head + "'");
  }
  return v;
}

CondPtr parse_cond(Cursor& c);

CondPtr parse_cond_atom(Cursor& c) {
  if (c.peek() == "(") {
    c.next();
    CondPtr inner = parse_cond(c);
    c.expect(")");
    return inner;
  }
  if (c.peek() == "not") {
    c.next();
    auto n = std::make_shared<Cond>();
    n->kind = Cond::Not;
    n->a = parse_cond_atom(c);
    return n;
  }
  if (c.peek() == "ann") {
    c.next();
    auto n = std::make_shared<Cond>();
    n->kind = Cond::AnnCmp;
    n->value = parse_value(c);
    n->op = c.next();
    n->rhs = rat_parse(c.next());
    return n;
  }
  auto n = std::make_shared<Cond>();
  n->value = parse_value(c);
  c.expect("is");
  std::string what = c.next();
  if (what == "high")
    n->kind = Cond::IsHigh;
  else if (what == "low")
    n->kind = Cond::IsLow;
  else {
    n->kind = Cond::IsLabel;
    n->label = what;
  }
  return n;
}

CondPtr parse_cond_and(Cursor& c) {
  CondPtr left = parse_cond_atom(c);
  while (c.peek() == "and") {
    c.next();
    auto n = std::make_shared<Cond>();
    n->kind = Cond::And;
    n->a = left;
    n->b = parse_cond_atom(c);
    left = n;
  }
  return left;
}

CondPtr parse_cond(Cursor& c) {
  CondPtr left = parse_cond_and(c);
  while (c.peek() == "or") {
    c.next();
    auto n = std::make_shared<Cond>();
    n->kind = Cond::Or;
    n->a = left;
    n->b = parse_cond_and(c);
    left = n;
  }
  return left;
}

Target parse_target(Cursor& c, bool decide) {
  std::string head = c.next();
  Target t;
  if (decide) {
    if (head == "recommended") {
      t.kind = Target::Recommended;
    } else if (head == "choose") {
      t.kind = Target::Choose;
      t.label = c.next();
    } else {
      unbound("unknown decision target '" + head + "'");
    }
    return t;
  }
  if (head == "truth")
    t.kind = Target::Truth;
  else if (head == "high")
    t.kind = Target::High;
  else if (head == "low")
    t.kind = Target::Low;
  else if (head == "mirror")
    t.kind = Target::Mirror;
  else if (head == "label") {
    t.kind = Target::Label;
    t.label = c.next();
  } else if (head == "unlike") {
    t.kind = Target::Unlike;
    t.ref = parse_value(c);
  } else if (head == "like") {
    t.kind = Target::Like;
    t.ref = parse_value(c);
  } else {
    unbound("unknown report target '" + head + "'");
  }
  return t;
}

ActionPtr parse_action(Cursor& c, bool decide) {
  auto act = std::make_shared<Action>();
  std::string head = c.peek();
  if (head == "if") {
    c.next();
    act->kind = Action::If;
    act->cond = parse_cond(c);
    c.expect("then");
    act->then_branch = parse_action(c, decide);
    c.expect("else");
    act->else_branch = parse_action(c, decide);
    return act;
  }
  if (head == "mix") {
    c.next();
    act->kind = Action::Mix;
    c.expect("{");
    while (true) {
      Target t = parse_target(c, decide);
      c.expect("@");
      Rat w = rat_parse(c.next());
      act->mix.emplace_back(t, w);
      std::string sep = c.next();
      if (sep == "}") break;
      if (sep != ",") unbound("expected ',' or '}' in mix");
    }
    return act;
  }
  if (!decide) c.expect("report");
  act->kind = Action::Simple;
  act->target = parse_target(c, decide);
  return act;
}

std::vector<Rule> parse_script(const std::string& source) {
  std::vector<Rule> rules;
  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) unbound("rule needs a ':' separator: " + line);
    std::string sel_text = line.substr(0, colon);
    std::string act_text = line.substr(colon + 1);

    auto sel_toks = tokenize(sel_text);
    Rule rule;
    std::size_t i = 0;
    if (i < sel_toks.size() && sel_toks[i] == "decide") {
      rule.decide = true;
      ++i;
    } else if (i < sel_toks.size() && sel_toks[i] == "round") {
      ++i;
    }
    if (i >= sel_toks.size()) unbound("incomplete selector: " + sel_text);
    const std::string& which = sel_toks[i];
    if (which == "default")
      rule.selector = Rule::Default;
    else if (which == "odd")
      rule.selector = Rule::Odd;
    else if (which == "even")
      rule.selector = Rule::Even;
    else {
      rule.selector = Rule::Exact;
      rule.round = std::stoi(which);
    }

    auto act_toks = tokenize(act_text);
    Cursor c{&act_toks};
    rule.action = parse_action(c, rule.decide);
    if (!c.done()) unbound("trailing tokens in rule: " + line);
    rules.push_back(std::move(rule));
  }
  return rules;
}

// --- evaluation -----------------------------------------------------------

struct Resolved {
  std::string label;
  std::optional<Rat> ann;
};

AgentId agent_by_name(const GameSpec& spec, const std::string& name) {
  for (AgentId a = 0; a < spec.num_agents(); ++a)
    if (spec.agent_names[a] == name) return a;
  unbound("unknown agent '" + name + "'");
}

Resolved resolve_value(const GameSpec& spec, const Observation& obs, const ValueRef& v) {
  switch (v.kind) {
    case ValueRef::Own: {
      if (v.round < 0 || v.round > obs.round)
        unbound("own(" + std::to_string(v.round) + ") not observed yet");
      const std::string& label = obs.own_types[v.round];
      return {label, spec.annotation(obs.agent, v.round, label)};
    }
    case ValueRef::Rep: {
      AgentId a = agent_by_name(spec, v.agent_name);
      std::string label;
      if (v.round <= obs.round - 1 && v.round >= 0) {
        label = obs.reports[v.round][a];
      } else if (v.round == obs.round) {
        auto it = obs.same_round_reports.find(a);
        if (it == obs.same_round_reports.end())
          unbound("rep(" + v.agent_name + "," + std::to_string(v.round) +
                  ") is simultaneous and not observable");
        label = it->second;
      } else {
        unbound("rep(" + v.agent_name + "," + std::to_string(v.round) + ") is in the future");
      }
      return {label, spec.annotation(a, v.round, label)};
    }
    case ValueRef::Seen: {
      AgentId a = agent_by_name(spec, v.agent_name);
      if (!spec.reveal_past_types)
        unbound("seen() requires the revelation variant");
      if (v.round > obs.round - 1 || obs.revealed.empty())
        unbound("seen(" + v.agent_name + "," + std::to_string(v.round) + ") not observed");
      const std::string& label = obs.revealed[v.round][a];
      return {label, spec.annotation(a, v.round, label)};
    }
  }
  unbound("unreachable value kind");
}

Rat require_ann(const Resolved& r, const std::string& what) {
  if (!r.ann) unbound(what + " needs an annotated type (" + r.label + " has none)");
  return *r.ann;
}

bool eval_cond(const GameSpec& spec, const Observation& obs, const Cond& c) {
  switch (c.kind) {
    case Cond::IsHigh:
      return require_ann(resolve_value(spec, obs, c.value), "is high") > Rat(1, 2);
    case Cond::IsLow:
      return require_ann(resolve_value(spec, obs, c.value), "is low") < Rat(1, 2);
    case Cond::IsLabel:
      return resolve_value(spec, obs, c.value).label == c.label;
    case Cond::AnnCmp: {
      Rat lhs = require_ann(resolve_value(spec, obs, c.value), "ann");
      if (c.op == "==") return lhs == c.rhs;
      if (c.op == "!=") return lhs != c.rhs;
      if (c.op == "<=") return lhs <= c.rhs;
      if (c.op == ">=") return lhs >= c.rhs;
      if (c.op == "<") return lhs < c.rhs;
      if (c.op == ">") return lhs > c.rhs;
      unbound("unknown comparison '" + c.op + "'");
    }
    case Cond::And:
      return eval_cond(spec, obs, *c.a) && eval_cond(spec, obs, *c.b);
    case Cond::Or:
      return eval_cond(spec, obs, *c.a) || eval_cond(spec, obs, *c.b);
    case Cond::Not:
      return !eval_cond(spec, obs, *c.a);
  }
  unbound("unreachable condition kind");
}

std::string resolve_target(const GameSpec& spec, const Observation& obs, const Target& t) {
  const auto& space = spec.space(obs.agent, obs.round);
  switch (t.kind) {
    case Target::Truth:
      return obs.own_types[obs.round];
    case Target::High:
    case Target::Low: {
      const AgentType* best = nullptr;
      for (const auto& ty : space) {
        if (!ty.prob) continue;
        if (best == nullptr || (t.kind == Target::High ? *ty.prob > *best->prob
                                                       : *ty.prob < *best->prob))
          best = &ty;
      }
      if (best == nullptr) unbound("round space has no annotated types");
      return best->label;
    }
    case Target::Mirror: {
      Rat own = require_ann(
          {obs.own_types[obs.round], spec.annotation(obs.agent, obs.round,
                                                     obs.own_types[obs.round])},
          "mirror");
      Rat want = Rat(1) - own;
      for (const auto& ty : space)
        if (ty.prob && *ty.prob == want) return ty.label;
      unbound("no label annotated " + rat_str(want) + " for mirror");
    }
    case Target::Label: {
      for (const auto& ty : space)
        if (ty.label == t.label) return ty.label;
      unbound("label '" + t.label + "' not in the round space");
    }
    case Target::Unlike:
    case Target::Like: {
      Rat ref = require_ann(resolve_value(spec, obs, t.ref), "unlike/like");
      if (ref == Rat(1, 2)) unbound("unlike/like reference sits exactly at 1/2");
      bool ref_high = ref > Rat(1, 2);
      bool want_high = t.kind == Target::Like ? ref_high : !ref_high;
      for (const auto& ty : space)
        if (ty.prob && (*ty.prob > Rat(1, 2)) == want_high && *ty.prob != Rat(1, 2))
          return ty.label;
      unbound("no label on the requested side of 1/2");
    }
    case Target::Recommended:
      return obs.recommended;
    case Target::Choose:
      return t.label;
  }
  unbound("unreachable target kind");
}

Distribution eval_action(const GameSpec& spec, const Observation& obs, const Action& act) {
  switch (act.kind) {
    case Action::Simple:
      return {{resolve_target(spec, obs, act.target), Rat(1)}};
    case Action::Mix: {
      Distribution d;
      for (const auto& [target, w] : act.mix)
        d.emplace_back(resolve_target(spec, obs, target), w);
      return d;
    }
    case Action::If:
      return eval_cond(spec, obs, *act.cond) ? eval_action(spec, obs, *act.then_branch)
                                             : eval_action(spec, obs, *act.else_branch);
  }
  unbound("unreachable action kind");
}

const Action* match_rule(const std::vector<Rule>& rules, int round, bool decide) {
  for (const auto& r : rules) {
    if (r.decide != decide) continue;
    switch (r.selector) {
      case Rule::Exact:
        if (r.round == round) return r.action.get();
        break;
      case Rule::Odd:
        if (round % 2 == 1) return r.action.get();
        break;
      case Rule::Even:
        if (round % 2 == 0) return r.action.get();
        break;
      case Rule::Default:
        return r.action.get();
    }
  }
  return nullptr;
}

}  // namespace

Strategy compile_script(const GameSpec& spec, AgentId agent, const std::string& name,
                        const std::string& source) {
  auto rules = std::make_shared<std::vector<Rule>>(parse_script(source));
  (void)agent;
  Strategy s;
  s.name = name;
  s.report = [rules, &spec](const Observation& obs) -> Distribution {
    const Action* act = match_rule(*rules, obs.round, false);
    if (act == nullptr)
      throw SpecError("UnreachableObservation",
                      "no report rule for round " + std::to_string(obs.round));
    return eval_action(*obs.spec, obs, *act);
  };
  s.decide = [rules](const Observation& obs) -> std::string {
    const Action* act = match_rule(*rules, obs.round, true);
    if (act == nullptr) return obs.recommended;
    Distribution d = eval_action(*obs.spec, obs, *act);
    return d.front().first;
  };
  return s;
}

}  // namespace teammech
