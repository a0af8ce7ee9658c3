#pragma once

#include "cgs/games.hpp"
#include "cgs/reduction.hpp"

namespace cgs {

enum class GameClass { Raw, Ibg, Influence, Aggregation, Reduced };
const char* game_class_name(GameClass c);

// Atom names beginning with c_, op_, vis_ or __ are owned by the encoders
// and rejected in user-written universes.
bool reserved_atom_name(const std::string& name);

// A parsed game description.  For influence/aggregation/reduced documents the
// effective structure is rebuilt by the encoder on every parse, so printing
// only the defining sections round-trips.
struct GameDocument {
  int version = 1;
  GameClass game_class = GameClass::Raw;
  GameStructure structure;
  GoalTable goals;
  std::optional<Mask> initial;

  std::optional<EpcImage> image;               // Reduced
  std::optional<InfluenceGameSpec> influence;  // Influence
  std::optional<AggregationGameSpec> aggregation;
};

struct DocDiag {
  std::string code;
  std::string message;
};

// Parses the sectioned plain-text format.  When `diags` is given, recoverable
// format-level problems (reserved atom names) are recorded there instead of
// thrown; hard syntax errors always throw InputError.
GameDocument parse_document(const std::string& text,
                            std::vector<DocDiag>* diags = nullptr,
                            const Limits& limits = {});

std::string print_document(const GameDocument& doc);

GameDocument load_document(const std::string& path,
                           std::vector<DocDiag>* diags = nullptr,
                           const Limits& limits = {});

// Format-level plus structural diagnostics, never throws on invalid content.
std::vector<DocDiag> validate_document(const std::string& text,
                                       const Limits& limits = {});

// Strategy files: one `strategy <agent>:` block per agent, then rows
// `{state} -> {action}`.
StrategyProfile parse_strategy(const std::string& text, const AtomTable& atoms);
std::string print_strategy(const StrategyProfile& sigma, const AtomTable& atoms);

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> query;  // echoed inputs
  std::optional<bool> verdict;
  std::optional<StrategyProfile> witness;
  std::optional<CheckStats> stats;
  std::vector<std::string> listing;
  std::vector<DocDiag> diagnostics;
  // Timing is reported only on request so identical inputs give identical
  // bytes by default.
  std::optional<double> ms;
};

enum class ReportFormat { Text, Json };

std::string format_report(const Report& r, ReportFormat fmt,
                          const AtomTable& atoms);

}  // namespace cgs
