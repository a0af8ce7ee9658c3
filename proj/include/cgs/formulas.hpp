#pragma once

#include <memory>
#include <set>
#include <string>

#include "cgs/core.hpp"

namespace cgs {

// Core AST after desugaring: atoms, truth, negation, disjunction, next,
// until, and the coalition operator.  State and path formulas share the node
// type; is_state_formula tells them apart.
enum class NodeKind { Atom, True, Not, Or, Next, Until, Coalition };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  NodeKind kind;
  std::string atom;             // Atom
  std::set<AgentId> coalition;  // Coalition (possibly empty)
  FormulaPtr lhs;               // unary operand / left operand / coalition body
  FormulaPtr rhs;
};

FormulaPtr f_atom(std::string name);
FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);        // ~(~a | ~b)
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);    // ~a | b
FormulaPtr f_next(FormulaPtr f);
FormulaPtr f_until(FormulaPtr a, FormulaPtr b);
FormulaPtr f_eventually(FormulaPtr f);               // true U f
FormulaPtr f_globally(FormulaPtr f);                 // ~(true U ~f)
FormulaPtr f_coalition(std::set<AgentId> members, FormulaPtr body);

bool equal(const FormulaPtr& a, const FormulaPtr& b);
bool is_state_formula(const FormulaPtr& f);
bool contains_coalition(const FormulaPtr& f);

enum class FragmentTag { LTL, ATL, ATLSTAR };
const char* fragment_name(FragmentTag t);

// LTL when coalition-free; ATL when a state formula whose every coalition
// body is X phi or phi U phi over state formulas; ATL* otherwise.
FragmentTag classify(const FormulaPtr& f);

struct ParseError : InputError {
  ParseError(const std::string& what, int line, int column);
  int line;
  int column;
};

// Grammar: atoms, true/false, ~  |  &  ->, X U F G, <<1,2>>, parentheses.
// Binding, tightest first: unary (~ X F G <<C>>), &, |, U (right
// associative), ->.  Derived operators are desugared into the core AST.
FormulaPtr parse_formula(const std::string& text);

// Canonical concrete syntax; parse_formula(render(f)) reproduces f exactly.
std::string render(const FormulaPtr& f);

// The reduction's formula translation: homomorphic everywhere except that
// every next operator becomes two.
FormulaPtr translate_tr(const FormulaPtr& f);

struct NodeCounts {
  int atoms = 0;
  int truths = 0;
  int nots = 0;
  int ors = 0;
  int nexts = 0;
  int untils = 0;
  int coalitions = 0;
  int total() const { return atoms + truths + nots + ors + nexts + untils + coalitions; }
};
NodeCounts count_nodes(const FormulaPtr& f);

// Atom names occurring in the formula.
std::set<std::string> formula_atoms(const FormulaPtr& f);
// Every agent id occurring in a coalition.
std::set<AgentId> formula_agents(const FormulaPtr& f);

}  // namespace cgs
