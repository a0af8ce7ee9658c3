#pragma once

#include <functional>
#include <map>
#include <set>

#include "cgs/core.hpp"

namespace cgs {

// One action per agent, indexed by agent - 1.
using JointAction = std::vector<Mask>;

enum class ProtocolKind { Full, Explicit, Computed };

struct Protocol {
  ProtocolKind kind = ProtocolKind::Full;
  // Explicit: per (agent, state) list of enabled actions, canonical order.
  // May be partial over states unreachable from a declared initial state.
  std::map<std::pair<AgentId, Mask>, std::vector<Mask>> table;
  // Computed: used by structures produced programmatically (the
  // exclusive-control image), where tabulating 2^atoms rows is not viable.
  std::function<std::vector<Mask>(AgentId, Mask)> compute;

  static Protocol full() { return Protocol{}; }
};

enum class TransitionKind { ExclusiveUnion, Threshold, Table, Hosted };

struct TransitionSpec {
  TransitionKind kind = TransitionKind::ExclusiveUnion;
  // Threshold: atom index -> m_p; an atom becomes true iff strictly more
  // than m_p agents set it.  Atoms without an entry default to m_p = 0.
  // Uncontrolled atoms keep their current value.
  std::map<int, int> thresholds;
  // Table: explicit rows; must be total over reachable enabled pairs.
  std::map<std::pair<Mask, JointAction>, Mask> table;
  // Hosted: opaque deterministic total rule installed by a game encoder.
  std::function<Mask(Mask, const JointAction&)> hosted;

  static TransitionSpec exclusive_union() { return TransitionSpec{}; }
  static TransitionSpec threshold(std::map<int, int> m) {
    return TransitionSpec{TransitionKind::Threshold, std::move(m), {}, {}};
  }
};

struct GameStructure {
  AtomTable atoms;
  int n_agents = 0;
  std::vector<Mask> control;  // control[i-1] = atoms controlled by agent i
  Protocol protocol;
  TransitionSpec transition;
  std::optional<Mask> initial;
  Limits limits;

  Mask controlled_union() const {
    Mask m = 0;
    for (Mask c : control) m |= c;
    return m;
  }
  Mask uncontrolled() const { return atoms.universe() & ~controlled_union(); }
  bool has_agent(AgentId i) const { return i >= 1 && i <= n_agents; }
};

// A memoryless strategy for a set of agents: per agent, a map from states to
// the action played there.  Total over the states the caller will visit;
// strategies materialised from enumeration cover the reachable fragment.
struct StrategyProfile {
  std::map<AgentId, std::map<Mask, Mask>> assignments;

  bool covers(AgentId i) const { return assignments.count(i) != 0; }
  Mask action(AgentId i, Mask s) const;  // throws InputError when undefined
  std::set<AgentId> agents() const;
};

// Finite presentation of the eventually periodic computation prefix.cycle^w.
// Action traces are optional (empty when the path was not produced by run).
struct LassoPath {
  std::vector<Mask> prefix;
  std::vector<Mask> cycle;  // nonempty
  std::vector<JointAction> prefix_actions;
  std::vector<JointAction> cycle_actions;

  // State at absolute position t of the infinite word.
  Mask at(std::size_t t) const {
    if (t < prefix.size()) return prefix[t];
    return cycle[(t - prefix.size()) % cycle.size()];
  }
};

enum class DiagCode {
  NonDisjointControl,
  IncompleteControl,
  ControlOutOfUniverse,
  EmptyProtocol,
  ActionOutOfRange,
  MissingProtocolEntry,
  NonTotalTable,
  BadThreshold,
  CapExceeded,
  NoAgents,
};

struct Diagnostic {
  DiagCode code;
  std::string message;
};

const char* diag_code_name(DiagCode c);

// Structural validation; empty result iff all invariants hold.
std::vector<Diagnostic> validate(const GameStructure& g);

// Control sets pairwise disjoint and covering the whole universe.
bool is_exclusive(const GameStructure& g);

// d(i, s), in canonical order.
std::vector<Mask> enabled(const GameStructure& g, AgentId i, Mask s);

// All enabled joint actions at s, agents varying in index order with the
// later agents cycling fastest.
std::vector<JointAction> enabled_joint(const GameStructure& g, Mask s);

// tau(s, alpha) with the enabledness precondition checked.
Mask apply(const GameStructure& g, Mask s, const JointAction& alpha);

// tau(s, alpha) without consulting the protocol (the transition function is
// total over S x A^n even where the protocol forbids the action).
Mask apply_raw(const GameStructure& g, Mask s, const JointAction& alpha);

// Succ(s), sorted and deduplicated; never empty for a valid structure.
std::vector<Mask> successors(const GameStructure& g, Mask s);

// The unique computation from s under a full strategy profile, in lasso
// form.  The lasso is cut at the first revisited state.
LassoPath run(const GameStructure& g, Mask s, const StrategyProfile& sigma);

}  // namespace cgs
