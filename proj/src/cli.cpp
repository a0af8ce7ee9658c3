#include "cgs/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cgs/document.hpp"

namespace cgs {

namespace {

struct GlobalOpts {
  int cap_atoms = Limits{}.max_atoms;
  long long cap_strategies = Limits{}.max_strategies;
  std::string format = "text";
  std::uint64_t seed = 0;  // reserved for the randomized harness
  bool timing = false;

  Limits limits() const { return Limits{cap_atoms, cap_strategies}; }
  ReportFormat report_format() const {
    return format == "json" ? ReportFormat::Json : ReportFormat::Text;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int verdict_code(bool v) { return v ? 0 : 1; }

int cmd_check(const GlobalOpts& g, const std::string& doc_path,
              const std::string& formula_text, const std::string& state_text,
              std::ostream& out) {
  GameDocument doc = load_document(doc_path, nullptr, g.limits());
  FormulaPtr phi = parse_formula(formula_text);
  Mask s = doc.structure.atoms.parse_literal(state_text);

  CheckOptions opts;
  opts.limits = g.limits();
  CheckStats stats;
  auto t0 = std::chrono::steady_clock::now();
  bool verdict = check_state(doc.structure, s, phi, opts, &stats);
  auto t1 = std::chrono::steady_clock::now();

  Report r;
  r.command = "check";
  r.query = {{"document", doc_path},
             {"formula", render(phi)},
             {"state", doc.structure.atoms.format(s)}};
  r.verdict = verdict;
  r.stats = stats;
  if (g.timing) r.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  out << format_report(r, g.report_format(), doc.structure.atoms);
  return verdict_code(verdict);
}

int cmd_reduce(const GlobalOpts& g, const std::string& doc_path,
               const std::string& out_path, std::ostream& out) {
  GameDocument doc = load_document(doc_path, nullptr, g.limits());
  if (doc.game_class != GameClass::Raw && doc.game_class != GameClass::Ibg)
    throw InputError("reduce expects a raw or ibg document");

  GameDocument reduced;
  reduced.game_class = GameClass::Reduced;
  reduced.image = build_epc(doc.structure);
  reduced.structure = reduced.image->epc;
  reduced.initial = reduced.structure.initial;

  std::string body = print_document(reduced);
  {
    std::ofstream f(out_path);
    if (!f) throw InputError("cannot write '" + out_path + "'");
    f << body;
  }

  const EpcImage& img = *reduced.image;
  std::string sidecar_path = out_path + ".map";
  {
    std::ofstream f(sidecar_path);
    if (!f) throw InputError("cannot write '" + sidecar_path + "'");
    f << "turn: " << kTurnAtom << '\n';
    for (const auto& [key, bit] : img.copy_bit)
      f << "copy " << key.first << ' ' << img.origin->atoms.name(key.second)
        << ": " << img.epc.atoms.name(bit) << '\n';
  }

  Report r;
  r.command = "reduce";
  r.query = {{"document", doc_path}, {"output", out_path}};
  r.listing.push_back("sidecar: " + sidecar_path);
  r.listing.push_back("atoms: " +
                      img.epc.atoms.format(img.epc.atoms.universe()));
  out << format_report(r, g.report_format(), img.epc.atoms);
  return 0;
}

int cmd_win(const GlobalOpts& g, const std::string& doc_path, int agent,
            const std::string& state_text, std::ostream& out) {
  GameDocument doc = load_document(doc_path, nullptr, g.limits());
  if (doc.goals.empty()) throw InputError("document carries no goals");
  Mask s = doc.structure.atoms.parse_literal(state_text);

  EncodedGame game{doc.structure, doc.goals, doc.initial.value_or(0)};
  CheckOptions opts;
  opts.limits = g.limits();
  auto t0 = std::chrono::steady_clock::now();
  EwinResult res = winning_strategy_query(game, agent, s, opts);
  auto t1 = std::chrono::steady_clock::now();

  Report r;
  r.command = "win";
  r.query = {{"document", doc_path},
             {"agent", std::to_string(agent)},
             {"state", doc.structure.atoms.format(s)}};
  r.verdict = res.winnable;
  r.witness = res.witness;
  if (g.timing) r.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  out << format_report(r, g.report_format(), doc.structure.atoms);
  return verdict_code(res.winnable);
}

int cmd_paths(const GlobalOpts& g, const std::string& doc_path,
              const std::string& state_text, const std::string& strategy_path,
              int bound, std::ostream& out) {
  GameDocument doc = load_document(doc_path, nullptr, g.limits());
  const AtomTable& atoms = doc.structure.atoms;
  Mask s = atoms.parse_literal(state_text);
  StrategyProfile sigma = parse_strategy(read_file(strategy_path), atoms);

  Report r;
  r.command = "paths";
  r.query = {{"document", doc_path},
             {"state", atoms.format(s)},
             {"strategy", strategy_path}};

  bool full = static_cast<int>(sigma.assignments.size()) == doc.structure.n_agents;
  if (full) {
    LassoPath lasso = run(doc.structure, s, sigma);
    std::string prefix = "lasso-prefix:";
    for (Mask m : lasso.prefix) prefix += ' ' + atoms.format(m);
    std::string cycle = "lasso-cycle:";
    for (Mask m : lasso.cycle) cycle += ' ' + atoms.format(m);
    r.listing.push_back(prefix);
    r.listing.push_back(cycle);
  } else {
    Coalition c;
    for (const auto& [i, _] : sigma.assignments) c.members.insert(i);
    InducedStructure k = induced(doc.structure, sigma, c, s);
    // BFS order from the start, cut at the bound.
    std::vector<Mask> order{k.start};
    std::set<Mask> seen{k.start};
    for (std::size_t i = 0; i < order.size(); ++i)
      for (Mask t : k.steps.at(order[i]))
        if (seen.insert(t).second) order.push_back(t);
    bool truncated = static_cast<int>(order.size()) > bound;
    if (truncated) order.resize(bound);
    for (Mask m : order) {
      std::string line = atoms.format(m) + " ->";
      for (Mask t : k.steps.at(m)) line += ' ' + atoms.format(t);
      r.listing.push_back(line);
    }
    if (truncated) r.listing.push_back("truncated: true");
  }
  out << format_report(r, g.report_format(), atoms);
  return 0;
}

int cmd_validate(const GlobalOpts& g, const std::string& doc_path,
                 std::ostream& out) {
  std::string text = read_file(doc_path);
  std::vector<DocDiag> diags = validate_document(text, g.limits());

  Report r;
  r.command = "validate";
  r.query = {{"document", doc_path}};
  r.diagnostics = diags;
  if (diags.empty()) r.listing.push_back("ok: true");

  AtomTable none;
  out << format_report(r, g.report_format(), none);
  return diags.empty() ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Model checker for concurrent game structures with shared "
               "propositional control"};
  app.name("cgs");

  GlobalOpts g;
  app.add_option("--cap-atoms", g.cap_atoms, "Atom-count limit");
  app.add_option("--cap-strategies", g.cap_strategies,
                 "Strategy-enumeration limit");
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", g.seed, "Seed for randomized sweeps");
  app.add_flag("--timing", g.timing, "Include wall-clock time in reports");
  app.require_subcommand(1);

  std::string doc_path, formula_text, state_text, out_path, strategy_path;
  int agent = 0;
  int bound = 100;

  auto* check = app.add_subcommand("check", "Model-check a state formula");
  check->add_option("document", doc_path)->required();
  check->add_option("formula", formula_text)->required();
  check->add_option("state", state_text)->required();

  auto* reduce =
      app.add_subcommand("reduce", "Write the exclusive-control image");
  reduce->add_option("document", doc_path)->required();
  reduce->add_option("output", out_path)->required();

  auto* win = app.add_subcommand("win", "Memoryless winning-strategy query");
  win->add_option("document", doc_path)->required();
  win->add_option("agent", agent)->required();
  win->add_option("state", state_text)->required();

  auto* paths = app.add_subcommand("paths", "Explore outcomes of a strategy");
  paths->add_option("document", doc_path)->required();
  paths->add_option("state", state_text)->required();
  paths->add_option("strategy", strategy_path)->required();
  paths->add_option("--bound", bound, "State-listing bound");

  auto* validate = app.add_subcommand("validate", "Diagnose a document");
  validate->add_option("document", doc_path)->required();

  std::vector<const char*> argv{"cgs"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(g, doc_path, formula_text, state_text, out);
    if (reduce->parsed()) return cmd_reduce(g, doc_path, out_path, out);
    if (win->parsed()) return cmd_win(g, doc_path, agent, state_text, out);
    if (paths->parsed())
      return cmd_paths(g, doc_path, state_text, strategy_path, bound, out);
    if (validate->parsed()) return cmd_validate(g, doc_path, out);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace cgs
