#include "cgs/document.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cgs {

const char* game_class_name(GameClass c) {
  switch (c) {
    case GameClass::Raw: return "raw";
    case GameClass::Ibg: return "ibg";
    case GameClass::Influence: return "influence";
    case GameClass::Aggregation: return "aggregation";
    case GameClass::Reduced: return "reduced";
  }
  return "?";
}

bool reserved_atom_name(const std::string& name) {
  auto has_prefix = [&](const char* p) { return name.rfind(p, 0) == 0; };
  return has_prefix("c_") || has_prefix("op_") || has_prefix("vis_") ||
         has_prefix("__");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw InputError("line " + std::to_string(line) + ": " + msg);
}

// Tokens of a row: "{...}" set literals, ",", "->", bare words.
std::vector<std::string> row_tokens(const std::string& s, int line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t') {
      ++i;
    } else if (c == '{') {
      std::size_t j = s.find('}', i);
      if (j == std::string::npos) fail(line, "unterminated '{'");
      out.push_back(s.substr(i, j - i + 1));
      i = j + 1;
    } else if (c == ',') {
      out.push_back(",");
      ++i;
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back("->");
      i += 2;
    } else {
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '{' &&
             s[j] != ',')
        ++j;
      out.push_back(s.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

int parse_int(const std::string& tok, int line, const char* what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(line, std::string("expected ") + what + ", got '" + tok + "'");
  }
}

struct RawSections {
  int version = 1;
  GameClass game_class = GameClass::Raw;
  bool class_set = false;
  std::optional<int> agents;
  std::vector<std::string> atoms;
  bool atoms_set = false;
  std::map<int, std::vector<std::string>> control;
  std::string protocol_kind = "full";
  // allow rows: (line, agent, state literal, action literals)
  struct AllowRow {
    int line;
    int agent;
    std::string state;
    std::vector<std::string> actions;
  };
  std::vector<AllowRow> allow;
  std::string transition_kind = "epc";
  std::vector<std::tuple<int, std::string, int>> thresholds;  // line, atom, m
  struct TableRow {
    int line;
    std::string state;
    std::vector<std::string> actions;
    std::string target;
  };
  std::vector<TableRow> rows;
  std::optional<std::vector<std::string>> init;
  std::map<int, std::pair<int, std::string>> goals;  // agent -> (line, text)

  std::vector<std::string> issues;
  std::vector<std::pair<int, int>> edges;
  std::map<int, std::vector<std::string>> opinions;
  std::map<int, std::vector<std::string>> visibility;
  std::optional<std::pair<int, std::string>> rule;  // line, text after "rule:"
};

RawSections scan(const std::string& text) {
  RawSections r;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool in_table = false;
  while (std::getline(in, raw)) {
    ++line;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;

    if (s[0] == '{') {
      // A transition-table row.
      if (!in_table) fail(line, "set-literal row outside a table section");
      auto toks = row_tokens(s, line);
      RawSections::TableRow row;
      row.line = line;
      std::size_t i = 0;
      auto need = [&](const char* what) -> const std::string& {
        if (i >= toks.size()) fail(line, std::string("expected ") + what);
        return toks[i++];
      };
      row.state = need("state literal");
      if (need("','") != ",") fail(line, "expected ',' after the state");
      while (i < toks.size() && toks[i] != "->") row.actions.push_back(toks[i++]);
      if (i >= toks.size()) fail(line, "expected '->'");
      ++i;
      row.target = need("target state literal");
      if (i != toks.size()) fail(line, "trailing text after the target");
      r.rows.push_back(std::move(row));
      continue;
    }

    std::size_t colon = s.find(':');
    std::string head, rest;
    if (colon == std::string::npos) {
      head = s;
    } else {
      head = trim(s.substr(0, colon));
      rest = trim(s.substr(colon + 1));
    }
    auto words = split_ws(head);
    if (words.empty()) fail(line, "empty directive");
    const std::string& key = words[0];
    in_table = false;

    if (key == "cgs") {
      if (colon != std::string::npos || words.size() != 2)
        fail(line, "header is 'cgs <version>'");
      r.version = parse_int(words[1], line, "a version number");
      if (r.version != 1) fail(line, "unsupported format version");
    } else if (key == "game") {
      if (rest == "raw") r.game_class = GameClass::Raw;
      else if (rest == "ibg") r.game_class = GameClass::Ibg;
      else if (rest == "influence") r.game_class = GameClass::Influence;
      else if (rest == "aggregation") r.game_class = GameClass::Aggregation;
      else if (rest == "reduced") r.game_class = GameClass::Reduced;
      else fail(line, "unknown game class '" + rest + "'");
      r.class_set = true;
    } else if (key == "agents") {
      r.agents = parse_int(rest, line, "an agent count");
    } else if (key == "atoms") {
      r.atoms = split_ws(rest);
      r.atoms_set = true;
    } else if (key == "issues") {
      r.issues = split_ws(rest);
    } else if (key == "control" || key == "goal" || key == "opinion" ||
               key == "visible") {
      if (words.size() != 2) fail(line, "'" + key + " <agent>:' expected");
      int agent = parse_int(words[1], line, "an agent id");
      if (key == "control") {
        if (!r.control.emplace(agent, split_ws(rest)).second)
          fail(line, "duplicate control line for agent " + words[1]);
      } else if (key == "goal") {
        if (!r.goals.emplace(agent, std::make_pair(line, rest)).second)
          fail(line, "duplicate goal for agent " + words[1]);
      } else if (key == "opinion") {
        auto more = split_ws(rest);
        auto& v = r.opinions[agent];
        v.insert(v.end(), more.begin(), more.end());
      } else {
        auto more = split_ws(rest);
        auto& v = r.visibility[agent];
        v.insert(v.end(), more.begin(), more.end());
      }
    } else if (key == "protocol") {
      if (rest != "full" && rest != "explicit")
        fail(line, "protocol is 'full' or 'explicit'");
      r.protocol_kind = rest;
    } else if (key == "allow") {
      auto htoks = row_tokens(head, line);
      if (htoks.size() != 3 || htoks[2].empty() || htoks[2][0] != '{')
        fail(line, "'allow <agent> {state}: ...' expected");
      RawSections::AllowRow row;
      row.line = line;
      row.agent = parse_int(htoks[1], line, "an agent id");
      row.state = htoks[2];
      for (const auto& t : row_tokens(rest, line)) {
        if (t.empty() || t[0] != '{') fail(line, "actions are set literals");
        row.actions.push_back(t);
      }
      r.allow.push_back(std::move(row));
    } else if (key == "transition") {
      if (rest != "epc" && rest != "threshold" && rest != "table")
        fail(line, "transition is 'epc', 'threshold' or 'table'");
      r.transition_kind = rest;
      in_table = rest == "table";
    } else if (key == "threshold") {
      if (words.size() != 2) fail(line, "'threshold <atom>: <m>' expected");
      r.thresholds.emplace_back(line, words[1], parse_int(rest, line, "a threshold"));
    } else if (key == "init") {
      r.init = split_ws(rest);
    } else if (key == "edge") {
      auto parts = split_ws(rest);
      if (parts.size() != 2) fail(line, "'edge: <from> <to>' expected");
      r.edges.emplace_back(parse_int(parts[0], line, "an agent id"),
                           parse_int(parts[1], line, "an agent id"));
    } else if (key == "rule") {
      r.rule = {line, rest};
    } else {
      fail(line, "unknown directive '" + key + "'");
    }
  }
  return r;
}

void check_names(const std::vector<std::string>& names, const char* what,
                 std::vector<DocDiag>* diags) {
  for (const auto& n : names) {
    if (!valid_atom_name(n))
      throw InputError(std::string("invalid ") + what + " name '" + n + "'");
    if (reserved_atom_name(n)) {
      DocDiag d{"ReservedName",
                std::string(what) + " '" + n + "' uses a reserved prefix"};
      if (!diags) throw InputError(d.message);
      diags->push_back(std::move(d));
    }
  }
}

GoalTable build_goals(const RawSections& r, int n_agents) {
  GoalTable goals;
  for (const auto& [agent, entry] : r.goals) {
    if (agent < 1 || agent > n_agents)
      fail(entry.first, "goal for unknown agent " + std::to_string(agent));
    FormulaPtr f;
    try {
      f = parse_formula(entry.second);
    } catch (const ParseError& e) {
      fail(entry.first, std::string("in goal: ") + e.what());
    }
    if (classify(f) != FragmentTag::LTL)
      fail(entry.first, "goal is not an LTL formula");
    goals[agent] = std::move(f);
  }
  return goals;
}

// Builds the plain structure described by raw/ibg/reduced sections.
GameStructure build_plain(const RawSections& r, std::vector<DocDiag>* diags,
                          const Limits& limits) {
  if (!r.agents) throw InputError("missing 'agents:' line");
  if (!r.atoms_set) throw InputError("missing 'atoms:' line");
  check_names(r.atoms, "atom", diags);

  GameStructure g;
  g.limits = limits;
  g.atoms = AtomTable(r.atoms);
  g.n_agents = *r.agents;
  if (g.n_agents < 0) throw InputError("negative agent count");
  g.control.assign(g.n_agents, 0);
  for (const auto& [agent, names] : r.control) {
    if (agent < 1 || agent > g.n_agents)
      throw InputError("control line for unknown agent " + std::to_string(agent));
    g.control[agent - 1] = g.atoms.mask_of(names);
  }

  if (r.protocol_kind == "full") {
    if (!r.allow.empty())
      fail(r.allow.front().line, "allow rows need 'protocol: explicit'");
    g.protocol = Protocol::full();
  } else {
    g.protocol.kind = ProtocolKind::Explicit;
    for (const auto& row : r.allow) {
      if (row.agent < 1 || row.agent > g.n_agents)
        fail(row.line, "allow row for unknown agent");
      Mask s;
      try {
        s = g.atoms.parse_literal(row.state);
      } catch (const InputError& e) {
        fail(row.line, e.what());
      }
      auto& acts = g.protocol.table[{row.agent, s}];
      for (const auto& a : row.actions) {
        try {
          acts.push_back(g.atoms.parse_literal(a));
        } catch (const InputError& e) {
          fail(row.line, e.what());
        }
      }
      std::sort(acts.begin(), acts.end());
      acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
    }
  }

  if (r.transition_kind == "epc") {
    if (!r.thresholds.empty() || !r.rows.empty())
      throw InputError("epc transition takes no parameter rows");
    g.transition = TransitionSpec::exclusive_union();
  } else if (r.transition_kind == "threshold") {
    if (!r.rows.empty()) throw InputError("threshold transition takes no table rows");
    std::map<int, int> m;
    for (const auto& [line, atom, value] : r.thresholds) {
      auto bit = g.atoms.find(atom);
      if (!bit) fail(line, "threshold for unknown atom '" + atom + "'");
      if (!m.emplace(*bit, value).second)
        fail(line, "duplicate threshold for '" + atom + "'");
    }
    g.transition = TransitionSpec::threshold(std::move(m));
  } else {
    if (!r.thresholds.empty())
      throw InputError("table transition takes no threshold rows");
    g.transition.kind = TransitionKind::Table;
    for (const auto& row : r.rows) {
      if (static_cast<int>(row.actions.size()) != g.n_agents)
        fail(row.line, "row needs one action per agent");
      try {
        Mask s = g.atoms.parse_literal(row.state);
        JointAction alpha;
        for (const auto& a : row.actions) alpha.push_back(g.atoms.parse_literal(a));
        Mask t = g.atoms.parse_literal(row.target);
        auto [it, fresh] = g.transition.table.emplace(std::make_pair(s, alpha), t);
        if (!fresh && it->second != t) fail(row.line, "contradictory table row");
      } catch (const InputError& e) {
        fail(row.line, e.what());
      }
    }
  }

  if (r.init) g.initial = g.atoms.mask_of(*r.init);
  return g;
}

std::string agent_issue_error(const char* what, int agent) {
  return std::string(what) + " line for unknown agent " + std::to_string(agent);
}

}  // namespace

GameDocument parse_document(const std::string& text, std::vector<DocDiag>* diags,
                            const Limits& limits) {
  RawSections r = scan(text);
  GameDocument doc;
  doc.version = r.version;
  doc.game_class = r.game_class;

  switch (r.game_class) {
    case GameClass::Raw:
    case GameClass::Ibg: {
      doc.structure = build_plain(r, diags, limits);
      doc.goals = build_goals(r, doc.structure.n_agents);
      doc.initial = doc.structure.initial;
      if (r.game_class == GameClass::Ibg &&
          doc.structure.protocol.kind != ProtocolKind::Full)
        throw InputError("ibg documents use the full protocol");
      break;
    }
    case GameClass::Reduced: {
      if (!r.goals.empty())
        throw InputError("reduced documents carry no goals");
      GameStructure source = build_plain(r, diags, limits);
      doc.image = build_epc(source);
      doc.structure = doc.image->epc;
      doc.initial = doc.structure.initial;
      break;
    }
    case GameClass::Influence: {
      if (!r.agents) throw InputError("missing 'agents:' line");
      if (r.atoms_set)
        throw InputError("influence documents declare 'issues:', not 'atoms:'");
      check_names(r.issues, "issue", diags);
      InfluenceGameSpec spec;
      spec.n_agents = *r.agents;
      spec.issues = r.issues;
      std::set<std::string> known(r.issues.begin(), r.issues.end());
      for (auto e : r.edges) spec.edges.insert(e);
      auto take = [&](const std::map<int, std::vector<std::string>>& src,
                      std::set<std::pair<AgentId, std::string>>& dst,
                      const char* what) {
        for (const auto& [agent, issues] : src) {
          if (agent < 1 || agent > spec.n_agents)
            throw InputError(agent_issue_error(what, agent));
          for (const auto& p : issues) {
            if (!known.count(p))
              throw InputError(std::string(what) + " references unknown issue '" + p + "'");
            dst.insert({agent, p});
          }
        }
      };
      take(r.opinions, spec.opinions, "opinion");
      take(r.visibility, spec.visibility, "visible");
      spec.goals = build_goals(r, spec.n_agents);
      EncodedGame game = build_influence(spec);
      game.structure.limits = limits;
      doc.influence = std::move(spec);
      doc.structure = std::move(game.structure);
      doc.goals = std::move(game.goals);
      doc.initial = game.initial;
      break;
    }
    case GameClass::Aggregation: {
      if (!r.agents) throw InputError("missing 'agents:' line");
      if (r.atoms_set)
        throw InputError("aggregation documents declare 'issues:', not 'atoms:'");
      check_names(r.issues, "issue", diags);
      AggregationGameSpec spec;
      spec.n_agents = *r.agents;
      spec.issues = r.issues;
      if (!r.rule) throw InputError("missing 'rule:' line");
      auto [line, rule_text] = *r.rule;
      auto parts = split_ws(rule_text);
      if (parts.size() == 1 && parts[0] == "majority") {
        spec.rule = AggregationRule::majority(spec.n_agents);
      } else if (parts.size() == 2 && parts[0] == "quota") {
        int q = parse_int(parts[1], line, "a quota");
        if (q < 1 || q > spec.n_agents) fail(line, "quota outside 1..n");
        spec.rule = AggregationRule::quota(q);
      } else {
        fail(line, "rule is 'majority' or 'quota <k>'");
      }
      spec.goals = build_goals(r, spec.n_agents);
      EncodedGame game = build_aggregation(spec);
      game.structure.limits = limits;
      doc.aggregation = std::move(spec);
      doc.structure = std::move(game.structure);
      doc.goals = std::move(game.goals);
      doc.initial = r.init ? std::optional<Mask>(doc.structure.atoms.mask_of(*r.init))
                           : std::nullopt;
      doc.structure.initial = doc.initial;
      break;
    }
  }
  return doc;
}

namespace {

void print_names(std::ostream& out, const char* key,
                 const std::vector<std::string>& names) {
  out << key << ":";
  for (const auto& n : names) out << ' ' << n;
  out << '\n';
}

void print_plain(std::ostream& out, const GameStructure& g,
                 const GoalTable& goals) {
  print_names(out, "atoms", g.atoms.names());
  for (AgentId i = 1; i <= g.n_agents; ++i)
    print_names(out, ("control " + std::to_string(i)).c_str(),
                g.atoms.atoms_of(g.control[i - 1]));

  switch (g.protocol.kind) {
    case ProtocolKind::Full:
      out << "protocol: full\n";
      break;
    case ProtocolKind::Explicit:
      out << "protocol: explicit\n";
      for (const auto& [key, acts] : g.protocol.table) {
        out << "allow " << key.first << ' ' << g.atoms.format(key.second) << ":";
        for (Mask a : acts) out << ' ' << g.atoms.format(a);
        out << '\n';
      }
      break;
    case ProtocolKind::Computed:
      throw InputError("computed protocols have no textual form");
  }

  switch (g.transition.kind) {
    case TransitionKind::ExclusiveUnion:
      out << "transition: epc\n";
      break;
    case TransitionKind::Threshold:
      out << "transition: threshold\n";
      for (const auto& [bit, m] : g.transition.thresholds)
        out << "threshold " << g.atoms.name(bit) << ": " << m << '\n';
      break;
    case TransitionKind::Table:
      out << "transition: table\n";
      for (const auto& [key, target] : g.transition.table) {
        out << g.atoms.format(key.first) << " ,";
        for (Mask a : key.second) out << ' ' << g.atoms.format(a);
        out << " -> " << g.atoms.format(target) << '\n';
      }
      break;
    case TransitionKind::Hosted:
      throw InputError("hosted transitions have no textual form");
  }

  if (g.initial) print_names(out, "init", g.atoms.atoms_of(*g.initial));
  for (const auto& [agent, goal] : goals)
    out << "goal " << agent << ": " << render(goal) << '\n';
}

}  // namespace

std::string print_document(const GameDocument& doc) {
  std::ostringstream out;
  out << "cgs " << doc.version << '\n';
  out << "game: " << game_class_name(doc.game_class) << '\n';

  switch (doc.game_class) {
    case GameClass::Raw:
    case GameClass::Ibg:
      out << "agents: " << doc.structure.n_agents << '\n';
      print_plain(out, doc.structure, doc.goals);
      break;
    case GameClass::Reduced: {
      if (!doc.image) throw InputError("reduced document without an image");
      const GameStructure& src = *doc.image->origin;
      out << "agents: " << src.n_agents << '\n';
      print_plain(out, src, {});
      break;
    }
    case GameClass::Influence: {
      if (!doc.influence) throw InputError("influence document without a spec");
      const InfluenceGameSpec& spec = *doc.influence;
      out << "agents: " << spec.n_agents << '\n';
      print_names(out, "issues", spec.issues);
      for (const auto& [a, b] : spec.edges) out << "edge: " << a << ' ' << b << '\n';
      auto blocks = [&](const std::set<std::pair<AgentId, std::string>>& src,
                        const char* key) {
        std::map<AgentId, std::vector<std::string>> by_agent;
        for (const auto& [i, p] : src) by_agent[i].push_back(p);
        for (const auto& [i, ps] : by_agent)
          print_names(out, (std::string(key) + " " + std::to_string(i)).c_str(), ps);
      };
      blocks(spec.opinions, "opinion");
      blocks(spec.visibility, "visible");
      for (const auto& [agent, goal] : spec.goals)
        out << "goal " << agent << ": " << render(goal) << '\n';
      break;
    }
    case GameClass::Aggregation: {
      if (!doc.aggregation) throw InputError("aggregation document without a spec");
      const AggregationGameSpec& spec = *doc.aggregation;
      out << "agents: " << spec.n_agents << '\n';
      print_names(out, "issues", spec.issues);
      if (!spec.rule.quota_value)
        throw InputError("custom rules have no textual form");
      out << "rule: quota " << *spec.rule.quota_value << '\n';
      if (doc.initial)
        print_names(out, "init", doc.structure.atoms.atoms_of(*doc.initial));
      for (const auto& [agent, goal] : spec.goals)
        out << "goal " << agent << ": " << render(goal) << '\n';
      break;
    }
  }
  return out.str();
}

GameDocument load_document(const std::string& path, std::vector<DocDiag>* diags,
                           const Limits& limits) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), diags, limits);
}

std::vector<DocDiag> validate_document(const std::string& text,
                                       const Limits& limits) {
  std::vector<DocDiag> diags;
  GameDocument doc;
  try {
    doc = parse_document(text, &diags, limits);
  } catch (const std::exception& e) {
    diags.push_back({"ParseError", e.what()});
    return diags;
  }
  for (const auto& d : validate(doc.structure))
    diags.push_back({diag_code_name(d.code), d.message});
  return diags;
}

StrategyProfile parse_strategy(const std::string& text, const AtomTable& atoms) {
  StrategyProfile sigma;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::map<Mask, Mask>* block = nullptr;
  while (std::getline(in, raw)) {
    ++line;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    auto toks = row_tokens(s, line);
    if (toks.size() >= 2 && toks[0] == "strategy") {
      std::string name = toks[1];
      if (!name.empty() && name.back() == ':') name.pop_back();
      int agent = parse_int(name, line, "an agent id");
      if (sigma.assignments.count(agent)) fail(line, "duplicate strategy block");
      block = &sigma.assignments[agent];
      continue;
    }
    if (toks.size() == 3 && toks[1] == "->") {
      if (!block) fail(line, "row before any 'strategy <agent>:' header");
      try {
        Mask s_mask = atoms.parse_literal(toks[0]);
        Mask a_mask = atoms.parse_literal(toks[2]);
        if (!block->emplace(s_mask, a_mask).second)
          fail(line, "duplicate state row");
      } catch (const InputError& e) {
        fail(line, e.what());
      }
      continue;
    }
    fail(line, "expected 'strategy <agent>:' or '{state} -> {action}'");
  }
  return sigma;
}

std::string print_strategy(const StrategyProfile& sigma, const AtomTable& atoms) {
  std::ostringstream out;
  for (const auto& [agent, by_state] : sigma.assignments) {
    out << "strategy " << agent << ":\n";
    for (const auto& [s, a] : by_state)
      out << atoms.format(s) << " -> " << atoms.format(a) << '\n';
  }
  return out.str();
}

std::string format_report(const Report& r, ReportFormat fmt,
                          const AtomTable& atoms) {
  if (fmt == ReportFormat::Text) {
    std::ostringstream out;
    out << "command: " << r.command << '\n';
    for (const auto& [k, v] : r.query) out << k << ": " << v << '\n';
    if (r.verdict) out << "verdict: " << (*r.verdict ? "true" : "false") << '\n';
    if (r.stats) {
      out << "strategies-tested: " << r.stats->strategies_tested << '\n';
      out << "states-visited: " << r.stats->states_visited << '\n';
    }
    if (r.witness) {
      out << "witness:\n";
      std::istringstream body(print_strategy(*r.witness, atoms));
      std::string l;
      while (std::getline(body, l)) out << "  " << l << '\n';
    }
    for (const auto& l : r.listing) out << l << '\n';
    for (const auto& d : r.diagnostics)
      out << "diagnostic: " << d.code << " " << d.message << '\n';
    if (r.ms) out << "time-ms: " << *r.ms << '\n';
    return out.str();
  }

  nlohmann::ordered_json j;
  j["command"] = r.command;
  for (const auto& [k, v] : r.query) j[k] = v;
  if (r.verdict) j["verdict"] = *r.verdict;
  if (r.stats) {
    j["strategies_tested"] = r.stats->strategies_tested;
    j["states_visited"] = r.stats->states_visited;
  }
  if (r.witness) {
    nlohmann::ordered_json w;
    for (const auto& [agent, by_state] : r.witness->assignments) {
      nlohmann::ordered_json rows;
      for (const auto& [s, a] : by_state) rows[atoms.format(s)] = atoms.format(a);
      w[std::to_string(agent)] = std::move(rows);
    }
    j["witness"] = std::move(w);
  }
  if (!r.listing.empty()) j["listing"] = r.listing;
  if (!r.diagnostics.empty()) {
    nlohmann::ordered_json ds = nlohmann::ordered_json::array();
    for (const auto& d : r.diagnostics)
      ds.push_back({{"code", d.code}, {"message", d.message}});
    j["diagnostics"] = std::move(ds);
  }
  if (r.ms) j["time_ms"] = *r.ms;
  return j.dump(2) + "\n";
}

}  // namespace cgs
