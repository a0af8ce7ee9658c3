#pragma once

#include <random>

#include "cgs/checker.hpp"
#include "cgs/reduction.hpp"
#include "cgs/structures.hpp"

namespace cgs::testutil {

// Two agents sharing p: control[1] = {p}, control[2] = {p,q}.
inline GameStructure two_agent_shared(int m_p, int m_q) {
  GameStructure g;
  g.atoms = AtomTable({"p", "q"});
  g.n_agents = 2;
  g.control = {g.atoms.mask_of({"p"}), g.atoms.mask_of({"p", "q"})};
  g.protocol = Protocol::full();
  g.transition = TransitionSpec::threshold(
      {{g.atoms.index("p"), m_p}, {g.atoms.index("q"), m_q}});
  return g;
}

// p needs both agents, q follows agent 2.
inline GameStructure example1_structure() { return two_agent_shared(1, 0); }
// p needs at least one agent, q follows agent 2.
inline GameStructure example2_structure() { return two_agent_shared(0, 0); }

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random shared structure: <=2 agents, <=3 atoms, Full protocol, Threshold
// or total Table transition.
inline GameStructure random_shared_structure(Rng& rng, int max_agents = 2,
                                             int max_atoms = 3) {
  static const std::vector<std::string> pool{"p", "q", "r"};
  int n_atoms = pick(rng, 1, max_atoms);
  int n_agents = pick(rng, 1, max_agents);

  GameStructure g;
  g.atoms = AtomTable({pool.begin(), pool.begin() + n_atoms});
  g.n_agents = n_agents;
  g.control.resize(n_agents);
  for (int i = 0; i < n_agents; ++i)
    g.control[i] = static_cast<Mask>(pick(rng, 0, static_cast<int>(g.atoms.universe())));
  g.protocol = Protocol::full();

  if (pick(rng, 0, 1) == 0) {
    std::map<int, int> m;
    for (int p = 0; p < n_atoms; ++p) m[p] = pick(rng, 0, n_agents);
    g.transition = TransitionSpec::threshold(std::move(m));
  } else {
    // Total over all of S x A^n: every state is consulted by fixpoint passes.
    g.transition.kind = TransitionKind::Table;
    for (Mask s = 0; s <= g.atoms.universe(); ++s)
      for (const JointAction& a : enabled_joint(g, s))
        g.transition.table[{s, a}] =
            static_cast<Mask>(pick(rng, 0, static_cast<int>(g.atoms.universe())));
  }
  return g;
}

// Random LTL path formula over the given atoms (depth counts operators).
inline FormulaPtr random_ltl(Rng& rng, const std::vector<std::string>& atoms,
                             int depth) {
  if (depth <= 0 || pick(rng, 0, 4) == 0) {
    if (pick(rng, 0, 5) == 0) return pick(rng, 0, 1) ? f_true() : f_false();
    return f_atom(atoms[pick(rng, 0, static_cast<int>(atoms.size()) - 1)]);
  }
  switch (pick(rng, 0, 4)) {
    case 0: return f_not(random_ltl(rng, atoms, depth - 1));
    case 1:
      return f_or(random_ltl(rng, atoms, depth - 1),
                  random_ltl(rng, atoms, depth - 1));
    case 2: return f_next(random_ltl(rng, atoms, depth - 1));
    case 3:
      return f_until(random_ltl(rng, atoms, depth - 1),
                     random_ltl(rng, atoms, depth - 1));
    default: return f_eventually(random_ltl(rng, atoms, depth - 1));
  }
}

inline std::set<AgentId> random_coalition(Rng& rng, int n_agents) {
  std::set<AgentId> c;
  for (AgentId i = 1; i <= n_agents; ++i)
    if (pick(rng, 0, 1)) c.insert(i);
  return c;
}

// Random ATL* state formula of the given depth.  Coalition bodies are biased
// toward X / U shapes so enumeration stays cheap, but general bodies occur.
inline FormulaPtr random_state_formula(Rng& rng,
                                       const std::vector<std::string>& atoms,
                                       int n_agents, int depth) {
  if (depth <= 0 || pick(rng, 0, 3) == 0)
    return f_atom(atoms[pick(rng, 0, static_cast<int>(atoms.size()) - 1)]);
  switch (pick(rng, 0, 3)) {
    case 0: return f_not(random_state_formula(rng, atoms, n_agents, depth - 1));
    case 1:
      return f_or(random_state_formula(rng, atoms, n_agents, depth - 1),
                  random_state_formula(rng, atoms, n_agents, depth - 1));
    default: {
      auto c = random_coalition(rng, n_agents);
      FormulaPtr body;
      switch (pick(rng, 0, 3)) {
        case 0:
          body = f_next(random_state_formula(rng, atoms, n_agents, depth - 1));
          break;
        case 1:
          body = f_until(random_state_formula(rng, atoms, n_agents, depth - 1),
                         random_state_formula(rng, atoms, n_agents, depth - 1));
          break;
        case 2:
          body = f_next(f_next(random_state_formula(rng, atoms, n_agents,
                                                    std::max(0, depth - 2))));
          break;
        default:
          body = random_ltl(rng, atoms, std::min(depth, 2));
          break;
      }
      return f_coalition(std::move(c), std::move(body));
    }
  }
}

// All memoryless strategies of one agent over the reachable closure from s.
inline std::vector<std::map<Mask, Mask>> all_agent_strategies(
    const GameStructure& g, AgentId i, Mask s) {
  std::vector<Mask> domain{s};
  std::set<Mask> seen{s};
  for (std::size_t k = 0; k < domain.size(); ++k)
    for (Mask t : successors(g, domain[k]))
      if (seen.insert(t).second) domain.push_back(t);
  std::sort(domain.begin(), domain.end());

  std::vector<std::map<Mask, Mask>> out{{}};
  for (Mask st : domain) {
    auto acts = enabled(g, i, st);
    std::vector<std::map<Mask, Mask>> next;
    next.reserve(out.size() * acts.size());
    for (const auto& partial : out)
      for (Mask a : acts) {
        auto sigma = partial;
        sigma[st] = a;
        next.push_back(std::move(sigma));
      }
    out = std::move(next);
  }
  return out;
}

// Brute-force E-WIN oracle: full enumeration over the reachable closure,
// universal goal test on each induced structure.
inline bool ewin_oracle(const GameStructure& g, AgentId i, const FormulaPtr& goal,
                        Mask s) {
  Coalition c{{i}};
  auto labels = atom_labeler(g);
  for (const auto& sigma_i : all_agent_strategies(g, i, s)) {
    StrategyProfile sigma;
    sigma.assignments[i] = sigma_i;
    InducedStructure k = induced(g, sigma, c, s);
    if (check_universal_ltl(k, s, goal, labels)) return true;
  }
  return false;
}

// A strategy for the given coalition, total over all states.
inline StrategyProfile random_coalition_strategy(Rng& rng, const GameStructure& g,
                                                 const std::set<AgentId>& c) {
  StrategyProfile sigma;
  for (AgentId i : c)
    for (Mask s = 0; s <= g.atoms.universe(); ++s) {
      auto acts = enabled(g, i, s);
      sigma.assignments[i][s] =
          acts[pick(rng, 0, static_cast<int>(acts.size()) - 1)];
    }
  return sigma;
}

// Compares out(s, sigma_C) in the source against the even-position projection
// of out(canonical(s), lift(sigma_C)) in the image, as one-step relations.
inline bool lifted_out_agrees(const GameStructure& g, const EpcImage& img,
                              const StrategyProfile& sigma,
                              const std::set<AgentId>& c, Mask s) {
  Coalition coalition{c};
  InducedStructure k = induced(g, sigma, coalition, s);
  InducedStructure k2 =
      induced(img.epc, lift_strategy(img, sigma), coalition, canonical_state(img, s));

  std::map<Mask, std::set<Mask>> source;
  for (const auto& [st, succ] : k.steps)
    source[st] = std::set<Mask>(succ.begin(), succ.end());

  std::map<Mask, std::set<Mask>> projected;
  for (const auto& [st, mids] : k2.steps) {
    if (st & img.turn_mask) continue;  // odd position
    auto& out = projected[img.restrict_phi(st)];
    for (Mask mid : mids)
      for (Mask t : k2.steps.at(mid)) out.insert(img.restrict_phi(t));
  }
  return source == projected;
}

}  // namespace cgs::testutil
