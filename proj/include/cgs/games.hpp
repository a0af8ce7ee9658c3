#pragma once

#include "cgs/checker.hpp"
#include "cgs/structures.hpp"

namespace cgs {

// Per-agent LTL goals.
using GoalTable = std::map<AgentId, FormulaPtr>;

struct EncodedGame {
  GameStructure structure;
  GoalTable goals;
  Mask initial = 0;
};

std::string op_atom_name(AgentId i, const std::string& issue);
std::string vis_atom_name(AgentId i, const std::string& issue);

// Iterated boolean game with shared control: trivial (full) protocol, the
// supplied transition rule resolving conflicts.
EncodedGame build_ibg(const std::vector<std::string>& atoms,
                      const std::map<AgentId, std::vector<std::string>>& control,
                      TransitionSpec transition, GoalTable goals,
                      Mask initial = 0);

struct InfluenceGameSpec {
  int n_agents = 0;
  std::vector<std::string> issues;
  std::set<std::pair<AgentId, AgentId>> edges;  // (from, to), irreflexive
  std::set<std::pair<AgentId, std::string>> opinions;     // B_i(p) = 1
  std::set<std::pair<AgentId, std::string>> visibility;   // V_i(p) = 1
  GoalTable goals;
};

// Opinion-diffusion encoding: op atoms are uncontrolled, vis atoms belong to
// their agent, and the hosted rule copies visibility choices and updates
// opinions by unanimity over revealed influencer opinions (an agent with no
// revealing influencer on an issue keeps its opinion).
EncodedGame build_influence(const InfluenceGameSpec& spec);

struct AggregationRule {
  // p becomes true iff at least `quota` agents set it; a quota of n is the
  // unanimous rule.  Default: strict majority, ties resolving to false.
  static AggregationRule majority(int n_agents);
  static AggregationRule quota(int q);
  // Arbitrary issue-wise rule over the per-agent votes.
  static AggregationRule custom(std::function<bool(const std::vector<bool>&)> f);

  std::optional<int> quota_value;
  std::function<bool(const std::vector<bool>&)> fn;
};

struct AggregationGameSpec {
  int n_agents = 0;
  std::vector<std::string> issues;
  AggregationRule rule;
  GoalTable goals;
};

// Every agent controls every issue; the successor depends on the action
// profile only.
EncodedGame build_aggregation(const AggregationGameSpec& spec);

// Does agent i have a memoryless winning strategy for its goal at s?
EwinResult winning_strategy_query(const EncodedGame& game, AgentId i, Mask s,
                                  const CheckOptions& opts = {});

}  // namespace cgs
