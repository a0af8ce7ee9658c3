#pragma once

#include "cgs/checker.hpp"
#include "cgs/structures.hpp"

namespace cgs {

inline constexpr const char* kTurnAtom = "__turn";

// Name of the copy atom by which agent i communicates its intended value
// for `atom` to the aggregator.
std::string copy_atom_name(AgentId i, const std::string& atom);

// The exclusive-control image of a shared structure, plus the bookkeeping
// needed to move states, paths, and strategies across.
struct EpcImage {
  GameStructure epc;
  std::shared_ptr<const GameStructure> origin;
  AgentId star = 0;   // the aggregator agent (n+1)
  int turn_bit = -1;  // atom index of the turn atom in epc

  // src atom index -> epc atom index, and the copy atoms per agent.
  std::vector<int> src_to_epc;
  std::map<std::pair<AgentId, int>, int> copy_bit;  // (agent, src atom) -> epc bit

  Mask phi_mask = 0;        // original atoms within the epc universe
  Mask turn_mask = 0;
  std::vector<Mask> copy_mask;  // per source agent, its copy atoms in epc

  // Lift a source state/atom-set into the epc universe (fresh atoms false).
  Mask to_epc(Mask src_state) const;
  // Restrict an epc state to the original universe.
  Mask restrict_phi(Mask epc_state) const;
  // Copy-encode an action of agent i; decode reads the copies back.
  Mask encode_action(AgentId i, Mask action) const;
  Mask decode_action(AgentId i, Mask epc_bits) const;
};

// Def.-driven construction of the associated exclusive structure: fresh copy
// atoms per controlled atom, a turn atom, and an aggregator agent that
// replays the shared transition function on the copies.
EpcImage build_epc(const GameStructure& shared);

// The unique epc state agreeing with s on the original atoms and false on
// all fresh ones (turn included).
Mask canonical_state(const EpcImage& img, Mask s);

// Project an epc lasso onto the source universe at even positions; the
// result is a path of the source structure.  Odd-length cycles are doubled
// so the 2:1 alignment stays well defined.
LassoPath project_path(const EpcImage& img, const LassoPath& epc_path);

// The 2:1 alignment equation between a source lasso and an epc lasso,
// checked up to the least common unrolling of both cycles.
bool check_dagger(const LassoPath& shared_path, const LassoPath& epc_path,
                  const EpcImage& img);

// Every consecutive pair of the lasso (cycle closure included) is realized
// by enabled actions of the image structure.
bool is_path_of_epc(const EpcImage& img, const LassoPath& epc_path);

// Starts at the canonical state of its own projection's first state.
bool is_canonical_path(const EpcImage& img, const LassoPath& epc_path);

// Strategy correspondence: copies of the source action while the turn atom
// is down, the empty action while it is up; and its inverse read off at
// canonical states.
StrategyProfile lift_strategy(const EpcImage& img, const StrategyProfile& sigma);
StrategyProfile lower_strategy(const EpcImage& img, const StrategyProfile& sigma_epc);

struct TheoremReport {
  bool shared_verdict = false;
  bool epc_verdict = false;
  bool agree = false;
  double shared_ms = 0.0;
  double epc_ms = 0.0;
};

// Checks phi on (G, s) and tr(phi) on (G', canonical(s)) and compares.
TheoremReport verify_theorem(const GameStructure& shared, Mask s,
                             const FormulaPtr& phi, const CheckOptions& opts = {});

}  // namespace cgs
