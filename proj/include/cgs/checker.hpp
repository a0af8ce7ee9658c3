#pragma once

#include "cgs/formulas.hpp"
#include "cgs/structures.hpp"

namespace cgs {

struct Coalition {
  std::set<AgentId> members;
};

// The one-step relation obtained by fixing the coalition's strategy and
// letting everyone else range over their protocols; built as the reachable
// closure from a start state.
struct InducedStructure {
  Mask start = 0;
  std::map<Mask, std::vector<Mask>> steps;  // sorted, deduplicated successors
};

// Truth of a (possibly synthetic) atom at a state.  The checker routes both
// structure atoms and labels standing for already-resolved state subformulas
// through this.
using Labeler = std::function<bool(const std::string& atom, Mask state)>;

// Labeler reading plain atoms off the structure's states.
Labeler atom_labeler(const GameStructure& g);

InducedStructure induced(const GameStructure& g, const StrategyProfile& sigma_c,
                         const Coalition& c, Mask start);

// True iff every infinite path of K from s satisfies psi; product of K with
// a tableau automaton for ~psi, emptiness via SCC analysis.
bool check_universal_ltl(const InducedStructure& k, Mask s, const FormulaPtr& psi,
                         const Labeler& labels);

// Truth of psi on the infinite word prefix.cycle^w; independent oracle for
// the automaton route above.
bool eval_ltl_on_lasso(const LassoPath& lasso, const FormulaPtr& psi,
                       const Labeler& labels);

// Bottom-up ATL labeling over all of S: one-step force for <<C>>X, least
// fixpoint for <<C>>U.  Requires classify(phi) != ATLSTAR and a state
// formula.
std::set<Mask> check_atl_fixpoint(const GameStructure& g, const FormulaPtr& phi);

struct CheckOptions {
  Limits limits;
  // Resolve every coalition operator through strategy enumeration, skipping
  // the ATL fixpoint fast path.  Used for cross-validation.
  bool force_enumeration = false;
};

struct CheckStats {
  long long strategies_tested = 0;
  long long states_visited = 0;
};

bool check_state(const GameStructure& g, Mask s, const FormulaPtr& phi,
                 const CheckOptions& opts = {}, CheckStats* stats = nullptr);

struct EwinResult {
  bool winnable = false;
  std::optional<StrategyProfile> witness;
};

// Does agent i have a memoryless winning strategy for the LTL goal at s?
// Always resolved through enumeration so a witness can be reported.
EwinResult ewin(const GameStructure& g, AgentId i, const FormulaPtr& goal, Mask s,
                const CheckOptions& opts = {}, CheckStats* stats = nullptr);

}  // namespace cgs
