#include "cgs/games.hpp"

namespace cgs {

std::string op_atom_name(AgentId i, const std::string& issue) {
  return "op_" + std::to_string(i) + "_" + issue;
}

std::string vis_atom_name(AgentId i, const std::string& issue) {
  return "vis_" + std::to_string(i) + "_" + issue;
}

EncodedGame build_ibg(const std::vector<std::string>& atoms,
                      const std::map<AgentId, std::vector<std::string>>& control,
                      TransitionSpec transition, GoalTable goals, Mask initial) {
  EncodedGame game;
  GameStructure& g = game.structure;
  g.atoms = AtomTable(atoms);
  g.n_agents = control.empty() ? 0 : control.rbegin()->first;
  g.control.assign(g.n_agents, 0);
  for (const auto& [i, set] : control) {
    if (i < 1) throw InputError("agent ids start at 1");
    g.control[i - 1] = g.atoms.mask_of(set);
  }
  g.protocol = Protocol::full();
  g.transition = std::move(transition);
  g.initial = initial;
  for (const auto& [i, goal] : goals)
    if (classify(goal) != FragmentTag::LTL)
      throw InputError("goal of agent " + std::to_string(i) + " is not LTL");
  game.goals = std::move(goals);
  game.initial = initial;
  auto diags = validate(g);
  if (!diags.empty()) throw InputError("invalid game: " + diags.front().message);
  return game;
}

EncodedGame build_influence(const InfluenceGameSpec& spec) {
  for (const auto& [a, b] : spec.edges) {
    if (a == b) throw InputError("influence network must be irreflexive");
    if (a < 1 || a > spec.n_agents || b < 1 || b > spec.n_agents)
      throw InputError("influence edge references an unknown agent");
  }

  std::vector<std::string> atoms;
  for (AgentId i = 1; i <= spec.n_agents; ++i)
    for (const auto& p : spec.issues) {
      atoms.push_back(op_atom_name(i, p));
      atoms.push_back(vis_atom_name(i, p));
    }

  EncodedGame game;
  GameStructure& g = game.structure;
  g.atoms = AtomTable(atoms);
  g.n_agents = spec.n_agents;
  g.control.assign(spec.n_agents, 0);
  for (AgentId i = 1; i <= spec.n_agents; ++i)
    for (const auto& p : spec.issues)
      g.control[i - 1] |= Mask{1} << g.atoms.index(vis_atom_name(i, p));
  g.protocol = Protocol::full();

  // Bit tables for the hosted rule.
  int n = spec.n_agents;
  int m = static_cast<int>(spec.issues.size());
  std::vector<std::vector<int>> op_bit(n, std::vector<int>(m));
  std::vector<std::vector<int>> vis_bit(n, std::vector<int>(m));
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < m; ++p) {
      op_bit[i][p] = g.atoms.index(op_atom_name(i + 1, spec.issues[p]));
      vis_bit[i][p] = g.atoms.index(vis_atom_name(i + 1, spec.issues[p]));
    }
  std::vector<std::vector<int>> influencers(n);
  for (const auto& [from, to] : spec.edges) influencers[to - 1].push_back(from - 1);

  g.transition.kind = TransitionKind::Hosted;
  g.transition.hosted = [n, m, op_bit, vis_bit, influencers](
                            Mask s, const JointAction& alpha) -> Mask {
    Mask t = 0;
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < m; ++p) {
        // Visibility follows the chosen action bit.
        if ((alpha[i] >> vis_bit[i][p]) & 1) t |= Mask{1} << vis_bit[i][p];
        // Opinion: unanimity over the influencers that reveal p.
        bool cur = (s >> op_bit[i][p]) & 1;
        bool have_reveal = false, all_true = true, all_false = true;
        for (int k : influencers[i]) {
          if (!((alpha[k] >> vis_bit[k][p]) & 1)) continue;  // hidden: '?'
          have_reveal = true;
          if ((s >> op_bit[k][p]) & 1)
            all_false = false;
          else
            all_true = false;
        }
        bool next = cur;
        if (have_reveal && all_true) next = true;
        if (have_reveal && all_false) next = false;
        if (next) t |= Mask{1} << op_bit[i][p];
      }
    return t;
  };

  Mask init = 0;
  for (const auto& [i, p] : spec.opinions) init |= Mask{1} << g.atoms.index(op_atom_name(i, p));
  for (const auto& [i, p] : spec.visibility)
    init |= Mask{1} << g.atoms.index(vis_atom_name(i, p));
  g.initial = init;
  game.initial = init;
  for (const auto& [i, goal] : spec.goals)
    if (classify(goal) != FragmentTag::LTL)
      throw InputError("goal of agent " + std::to_string(i) + " is not LTL");
  game.goals = spec.goals;
  auto diags = validate(g);
  if (!diags.empty()) throw InputError("invalid game: " + diags.front().message);
  return game;
}

AggregationRule AggregationRule::majority(int n_agents) {
  return quota(n_agents / 2 + 1);
}

AggregationRule AggregationRule::quota(int q) {
  AggregationRule r;
  r.quota_value = q;
  r.fn = [q](const std::vector<bool>& votes) {
    int count = 0;
    for (bool v : votes)
      if (v) ++count;
    return count >= q;
  };
  return r;
}

AggregationRule AggregationRule::custom(
    std::function<bool(const std::vector<bool>&)> f) {
  AggregationRule r;
  r.fn = std::move(f);
  return r;
}

EncodedGame build_aggregation(const AggregationGameSpec& spec) {
  if (!spec.rule.fn) throw InputError("aggregation rule is not total");
  EncodedGame game;
  GameStructure& g = game.structure;
  g.atoms = AtomTable(spec.issues);
  g.n_agents = spec.n_agents;
  g.control.assign(spec.n_agents, g.atoms.universe());
  g.protocol = Protocol::full();

  int n = spec.n_agents;
  int m = g.atoms.size();
  auto rule = spec.rule.fn;
  g.transition.kind = TransitionKind::Hosted;
  // Issue-wise aggregation of the action profile; the current state is
  // deliberately ignored.
  g.transition.hosted = [n, m, rule](Mask, const JointAction& alpha) -> Mask {
    Mask t = 0;
    for (int p = 0; p < m; ++p) {
      std::vector<bool> votes(n);
      for (int i = 0; i < n; ++i) votes[i] = (alpha[i] >> p) & 1;
      if (rule(votes)) t |= Mask{1} << p;
    }
    return t;
  };
  for (const auto& [i, goal] : spec.goals)
    if (classify(goal) != FragmentTag::LTL)
      throw InputError("goal of agent " + std::to_string(i) + " is not LTL");
  game.goals = spec.goals;
  auto diags = validate(g);
  if (!diags.empty()) throw InputError("invalid game: " + diags.front().message);
  return game;
}

EwinResult winning_strategy_query(const EncodedGame& game, AgentId i, Mask s,
                                  const CheckOptions& opts) {
  auto it = game.goals.find(i);
  if (it == game.goals.end())
    throw InputError("agent " + std::to_string(i) + " has no goal");
  return ewin(game.structure, i, it->second, s, opts);
}

}  // namespace cgs
