#include "cgs/structures.hpp"

#include <sstream>

namespace cgs {

Mask StrategyProfile::action(AgentId i, Mask s) const {
  auto a = assignments.find(i);
  if (a == assignments.end())
    throw InputError("strategy does not cover agent " + std::to_string(i));
  auto e = a->second.find(s);
  if (e == a->second.end())
    throw InputError("strategy for agent " + std::to_string(i) +
                     " undefined at a reachable state");
  return e->second;
}

std::set<AgentId> StrategyProfile::agents() const {
  std::set<AgentId> out;
  for (const auto& [i, _] : assignments) out.insert(i);
  return out;
}

const char* diag_code_name(DiagCode c) {
  switch (c) {
    case DiagCode::NonDisjointControl: return "NonDisjointControl";
    case DiagCode::IncompleteControl: return "IncompleteControl";
    case DiagCode::ControlOutOfUniverse: return "ControlOutOfUniverse";
    case DiagCode::EmptyProtocol: return "EmptyProtocol";
    case DiagCode::ActionOutOfRange: return "ActionOutOfRange";
    case DiagCode::MissingProtocolEntry: return "MissingProtocolEntry";
    case DiagCode::NonTotalTable: return "NonTotalTable";
    case DiagCode::BadThreshold: return "BadThreshold";
    case DiagCode::CapExceeded: return "CapExceeded";
    case DiagCode::NoAgents: return "NoAgents";
  }
  return "?";
}

namespace {

// States to check protocol/table totality against: the reachable set from a
// declared initial state when present, otherwise all of S.
std::vector<Mask> totality_domain(const GameStructure& g) {
  if (!g.initial) {
    std::vector<Mask> all;
    all.reserve(std::size_t{1} << g.atoms.size());
    for (Mask s = 0; s <= g.atoms.universe(); ++s) all.push_back(s);
    return all;
  }
  std::vector<Mask> order{*g.initial};
  std::set<Mask> seen{*g.initial};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (Mask t : successors(g, order[k]))
      if (seen.insert(t).second) order.push_back(t);
  }
  return order;
}

}  // namespace

std::vector<Diagnostic> validate(const GameStructure& g) {
  std::vector<Diagnostic> out;
  auto diag = [&](DiagCode c, const std::string& m) { out.push_back({c, m}); };

  if (g.atoms.size() > g.limits.max_atoms) {
    diag(DiagCode::CapExceeded,
         "universe has " + std::to_string(g.atoms.size()) +
             " atoms, cap is " + std::to_string(g.limits.max_atoms));
    return out;  // everything below enumerates 2^atoms in the worst case
  }
  if (g.n_agents < 1) diag(DiagCode::NoAgents, "structure has no agents");
  if (static_cast<int>(g.control.size()) != g.n_agents) {
    diag(DiagCode::IncompleteControl, "control map does not cover 1..n");
    return out;
  }

  for (int i = 0; i < g.n_agents; ++i)
    if (g.control[i] & ~g.atoms.universe())
      diag(DiagCode::ControlOutOfUniverse,
           "agent " + std::to_string(i + 1) + " controls atoms outside the universe");

  if (g.transition.kind == TransitionKind::ExclusiveUnion) {
    Mask seen = 0;
    bool disjoint = true;
    for (Mask c : g.control) {
      if (seen & c) disjoint = false;
      seen |= c;
    }
    if (!disjoint)
      diag(DiagCode::NonDisjointControl,
           "exclusive transition requires pairwise disjoint control sets");
    if (seen != g.atoms.universe())
      diag(DiagCode::IncompleteControl,
           "exclusive transition requires control sets covering the universe");
  }

  if (g.transition.kind == TransitionKind::Threshold) {
    for (const auto& [p, m] : g.transition.thresholds) {
      if (p < 0 || p >= g.atoms.size())
        diag(DiagCode::BadThreshold, "threshold on unknown atom index " + std::to_string(p));
      else if (m < 0)
        diag(DiagCode::BadThreshold, "negative threshold for " + g.atoms.name(p));
    }
  }

  if (g.protocol.kind == ProtocolKind::Explicit) {
    for (const auto& [key, actions] : g.protocol.table) {
      auto [i, s] = key;
      if (actions.empty())
        diag(DiagCode::EmptyProtocol,
             "d(" + std::to_string(i) + "," + g.atoms.format(s) + ") is empty");
      if (!g.has_agent(i)) {
        diag(DiagCode::ActionOutOfRange, "protocol entry for unknown agent " + std::to_string(i));
        continue;
      }
      for (Mask a : actions)
        if (a & ~g.control[i - 1])
          diag(DiagCode::ActionOutOfRange,
               "action " + g.atoms.format(a) + " of agent " + std::to_string(i) +
                   " sets atoms outside its control set");
    }
    for (Mask s : totality_domain(g))
      for (AgentId i = 1; i <= g.n_agents; ++i)
        if (!g.protocol.table.count({i, s}))
          diag(DiagCode::MissingProtocolEntry,
               "no protocol entry for agent " + std::to_string(i) + " at " + g.atoms.format(s));
  }

  if (g.transition.kind == TransitionKind::Table && out.empty()) {
    for (Mask s : totality_domain(g))
      for (const JointAction& a : enabled_joint(g, s))
        if (!g.transition.table.count({s, a}))
          diag(DiagCode::NonTotalTable,
               "transition table has no row for state " + g.atoms.format(s));
  }

  return out;
}

bool is_exclusive(const GameStructure& g) {
  Mask seen = 0;
  for (Mask c : g.control) {
    if (seen & c) return false;
    seen |= c;
  }
  return seen == g.atoms.universe();
}

std::vector<Mask> enabled(const GameStructure& g, AgentId i, Mask s) {
  if (!g.has_agent(i))
    throw InputError("unknown agent " + std::to_string(i));
  if (s & ~g.atoms.universe()) throw InputError("state outside the universe");
  switch (g.protocol.kind) {
    case ProtocolKind::Full:
      return submasks(g.control[i - 1]);
    case ProtocolKind::Explicit: {
      auto it = g.protocol.table.find({i, s});
      if (it == g.protocol.table.end())
        throw InputError("protocol has no entry for agent " + std::to_string(i) +
                         " at " + g.atoms.format(s));
      return it->second;
    }
    case ProtocolKind::Computed:
      return g.protocol.compute(i, s);
  }
  return {};
}

std::vector<JointAction> enabled_joint(const GameStructure& g, Mask s) {
  std::vector<std::vector<Mask>> per_agent;
  per_agent.reserve(g.n_agents);
  for (AgentId i = 1; i <= g.n_agents; ++i) per_agent.push_back(enabled(g, i, s));

  std::vector<JointAction> out{{}};
  for (const auto& acts : per_agent) {
    std::vector<JointAction> next;
    next.reserve(out.size() * acts.size());
    for (const auto& partial : out)
      for (Mask a : acts) {
        JointAction j = partial;
        j.push_back(a);
        next.push_back(std::move(j));
      }
    out = std::move(next);
  }
  return out;
}

Mask apply_raw(const GameStructure& g, Mask s, const JointAction& alpha) {
  if (static_cast<int>(alpha.size()) != g.n_agents)
    throw InputError("joint action has wrong arity");
  switch (g.transition.kind) {
    case TransitionKind::ExclusiveUnion: {
      Mask t = 0;
      for (Mask a : alpha) t |= a;
      return t;
    }
    case TransitionKind::Threshold: {
      Mask t = s & g.uncontrolled();  // uncontrolled atoms keep their value
      Mask controlled = g.controlled_union();
      for (int p = 0; p < g.atoms.size(); ++p) {
        Mask bit = Mask{1} << p;
        if (!(controlled & bit)) continue;
        int votes = 0;
        for (Mask a : alpha)
          if (a & bit) ++votes;
        auto it = g.transition.thresholds.find(p);
        int m = it == g.transition.thresholds.end() ? 0 : it->second;
        if (votes > m) t |= bit;
      }
      return t;
    }
    case TransitionKind::Table: {
      auto it = g.transition.table.find({s, alpha});
      if (it == g.transition.table.end())
        throw InputError("transition table has no row for state " + g.atoms.format(s));
      return it->second;
    }
    case TransitionKind::Hosted:
      return g.transition.hosted(s, alpha);
  }
  return 0;
}

Mask apply(const GameStructure& g, Mask s, const JointAction& alpha) {
  if (static_cast<int>(alpha.size()) != g.n_agents)
    throw InputError("joint action has wrong arity");
  for (AgentId i = 1; i <= g.n_agents; ++i) {
    auto acts = enabled(g, i, s);
    if (std::find(acts.begin(), acts.end(), alpha[i - 1]) == acts.end())
      throw InputError("action " + g.atoms.format(alpha[i - 1]) + " of agent " +
                       std::to_string(i) + " is not enabled at " + g.atoms.format(s));
  }
  return apply_raw(g, s, alpha);
}

std::vector<Mask> successors(const GameStructure& g, Mask s) {
  std::vector<Mask> out;
  for (const JointAction& a : enabled_joint(g, s)) out.push_back(apply_raw(g, s, a));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LassoPath run(const GameStructure& g, Mask s, const StrategyProfile& sigma) {
  for (AgentId i = 1; i <= g.n_agents; ++i)
    if (!sigma.covers(i))
      throw InputError("run requires a full profile; agent " + std::to_string(i) +
                       " is not covered");

  std::vector<Mask> states;
  std::vector<JointAction> actions;
  std::map<Mask, std::size_t> pos;
  Mask cur = s;
  while (!pos.count(cur)) {
    pos[cur] = states.size();
    states.push_back(cur);
    JointAction a;
    a.reserve(g.n_agents);
    for (AgentId i = 1; i <= g.n_agents; ++i) a.push_back(sigma.action(i, cur));
    Mask next = apply(g, cur, a);  // checks enabledness of the strategy
    actions.push_back(std::move(a));
    cur = next;
  }
  std::size_t loop = pos[cur];
  LassoPath lasso;
  lasso.prefix.assign(states.begin(), states.begin() + loop);
  lasso.cycle.assign(states.begin() + loop, states.end());
  lasso.prefix_actions.assign(actions.begin(), actions.begin() + loop);
  lasso.cycle_actions.assign(actions.begin() + loop, actions.end());
  return lasso;
}

}  // namespace cgs
