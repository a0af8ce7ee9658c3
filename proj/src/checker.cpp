#include "cgs/checker.hpp"

#include <cstdint>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace cgs {

Labeler atom_labeler(const GameStructure& g) {
  return [&g](const std::string& atom, Mask state) {
    return (state >> g.atoms.index(atom)) & 1;
  };
}

InducedStructure induced(const GameStructure& g, const StrategyProfile& sigma_c,
                         const Coalition& c, Mask start) {
  if (sigma_c.agents() != c.members)
    throw InputError("strategy profile does not cover exactly the coalition");
  for (AgentId i : c.members)
    if (!g.has_agent(i)) throw InputError("coalition member " + std::to_string(i) +
                                          " is not an agent of the structure");

  InducedStructure k;
  k.start = start;
  std::deque<Mask> work{start};
  k.steps[start];  // mark visited
  while (!work.empty()) {
    Mask s = work.front();
    work.pop_front();
    // Per-agent action sets: coalition members are pinned to the strategy,
    // the rest range over their protocol.
    std::vector<std::vector<Mask>> per_agent;
    per_agent.reserve(g.n_agents);
    for (AgentId i = 1; i <= g.n_agents; ++i) {
      auto acts = enabled(g, i, s);
      if (c.members.count(i)) {
        Mask a = sigma_c.action(i, s);
        if (std::find(acts.begin(), acts.end(), a) == acts.end())
          throw InputError("strategy plays a non-enabled action at " +
                           g.atoms.format(s));
        per_agent.push_back({a});
      } else {
        per_agent.push_back(std::move(acts));
      }
    }
    std::vector<JointAction> joints{{}};
    for (const auto& acts : per_agent) {
      std::vector<JointAction> next;
      for (const auto& partial : joints)
        for (Mask a : acts) {
          JointAction j = partial;
          j.push_back(a);
          next.push_back(std::move(j));
        }
      joints = std::move(next);
    }
    std::vector<Mask>& succ = k.steps[s];
    for (const JointAction& j : joints) succ.push_back(apply_raw(g, s, j));
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    for (Mask t : succ)
      if (!k.steps.count(t)) {
        k.steps[t];
        work.push_back(t);
      }
  }
  return k;
}

// ---------------------------------------------------------------------------
// Tableau automaton for an LTL formula over labeled atoms.
// ---------------------------------------------------------------------------

namespace {

struct Tableau {
  std::vector<FormulaPtr> cl;  // closure, children before parents
  std::vector<int> child1, child2;
  int root = -1;
  std::vector<int> atom_elems;
  std::vector<int> next_elems;
  std::vector<int> until_elems;
  std::vector<std::uint64_t> states;  // consistent membership bitsets
  // tableau states grouped by their atom-bit pattern
  std::unordered_map<std::uint64_t, std::vector<int>> by_atoms;

  bool bit(std::uint64_t m, int e) const { return (m >> e) & 1; }

  std::uint64_t atom_pattern(std::uint64_t m) const {
    std::uint64_t p = 0;
    for (std::size_t i = 0; i < atom_elems.size(); ++i)
      if (bit(m, atom_elems[i])) p |= std::uint64_t{1} << i;
    return p;
  }

  bool step_ok(std::uint64_t a, std::uint64_t b) const {
    for (int e : next_elems)
      if (bit(a, e) != bit(b, child1[e])) return false;
    for (int e : until_elems) {
      bool now = bit(a, child2[e]) || (bit(a, child1[e]) && bit(b, e));
      if (bit(a, e) != now) return false;
    }
    return true;
  }

  // Acceptance for one until element: no open promise.
  bool accepting(std::uint64_t m, int until_elem) const {
    return !bit(m, until_elem) || bit(m, child2[until_elem]);
  }
};

void collect_closure(const FormulaPtr& f, std::vector<FormulaPtr>& cl,
                     std::map<std::string, int>& index) {
  if (f->kind == NodeKind::Coalition)
    throw ContractError("universal LTL check received a coalition operator");
  std::string key = render(f);
  if (index.count(key)) return;
  if (f->lhs) collect_closure(f->lhs, cl, index);
  if (f->rhs) collect_closure(f->rhs, cl, index);
  if (index.count(key)) return;  // children collection may have added us
  index[key] = static_cast<int>(cl.size());
  cl.push_back(f);
}

std::shared_ptr<const Tableau> build_tableau(const FormulaPtr& root) {
  auto t = std::make_shared<Tableau>();
  std::map<std::string, int> index;
  collect_closure(root, t->cl, index);
  t->root = index.at(render(root));
  int n = static_cast<int>(t->cl.size());
  if (n > 48) throw ResourceError("formula closure too large for tableau");
  t->child1.assign(n, -1);
  t->child2.assign(n, -1);
  std::vector<int> free_elems;
  for (int e = 0; e < n; ++e) {
    const FormulaPtr& f = t->cl[e];
    if (f->lhs) t->child1[e] = index.at(render(f->lhs));
    if (f->rhs) t->child2[e] = index.at(render(f->rhs));
    switch (f->kind) {
      case NodeKind::Atom:
        t->atom_elems.push_back(e);
        free_elems.push_back(e);
        break;
      case NodeKind::Next:
        t->next_elems.push_back(e);
        free_elems.push_back(e);
        break;
      case NodeKind::Until:
        t->until_elems.push_back(e);
        free_elems.push_back(e);
        break;
      default:
        break;
    }
  }
  if (free_elems.size() > 24)
    throw ResourceError("formula has too many independent tableau bits");

  for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << free_elems.size());
       ++choice) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < free_elems.size(); ++i)
      if ((choice >> i) & 1) m |= std::uint64_t{1} << free_elems[i];
    // Derive booleans bottom-up (closure is in post-order).
    for (int e = 0; e < n; ++e) {
      switch (t->cl[e]->kind) {
        case NodeKind::True:
          m |= std::uint64_t{1} << e;
          break;
        case NodeKind::Not:
          if (!t->bit(m, t->child1[e])) m |= std::uint64_t{1} << e;
          break;
        case NodeKind::Or:
          if (t->bit(m, t->child1[e]) || t->bit(m, t->child2[e]))
            m |= std::uint64_t{1} << e;
          break;
        default:
          break;
      }
    }
    // Local until consistency: a satisfied right side forces the until, and
    // an until with both sides false is impossible.
    bool ok = true;
    for (int e : t->until_elems) {
      bool u = t->bit(m, e), x = t->bit(m, t->child1[e]), y = t->bit(m, t->child2[e]);
      if (y && !u) ok = false;
      if (!x && !y && u) ok = false;
    }
    if (!ok) continue;
    t->by_atoms[t->atom_pattern(m)].push_back(static_cast<int>(t->states.size()));
    t->states.push_back(m);
  }
  return t;
}

std::shared_ptr<const Tableau> tableau_for(const FormulaPtr& f) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const Tableau>> cache;
  std::string key = render(f);
  std::scoped_lock lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = build_tableau(f);
  cache.emplace(key, t);
  return t;
}

}  // namespace

bool check_universal_ltl(const InducedStructure& k, Mask s, const FormulaPtr& psi,
                         const Labeler& labels) {
  if (!k.steps.count(s)) throw InputError("state is not part of the structure");
  auto tab = tableau_for(f_not(psi));

  // Atom pattern of each reachable K state, computed once.
  std::map<Mask, std::uint64_t> patterns;
  auto pattern_of = [&](Mask state) {
    auto it = patterns.find(state);
    if (it != patterns.end()) return it->second;
    std::uint64_t p = 0;
    for (std::size_t i = 0; i < tab->atom_elems.size(); ++i)
      if (labels(tab->cl[tab->atom_elems[i]]->atom, state))
        p |= std::uint64_t{1} << i;
    patterns.emplace(state, p);
    return p;
  };

  // Product nodes reachable from the initial set.
  struct Node {
    Mask k;
    int t;
  };
  std::map<std::pair<Mask, int>, int> id;
  std::vector<Node> nodes;
  std::vector<std::vector<int>> adj;
  auto intern = [&](Mask ks, int ts) {
    auto [it, fresh] = id.try_emplace({ks, ts}, static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back({ks, ts});
      adj.emplace_back();
    }
    return it->second;
  };

  std::deque<int> work;
  auto grp = tab->by_atoms.find(pattern_of(s));
  if (grp != tab->by_atoms.end())
    for (int ts : grp->second)
      if (tab->bit(tab->states[ts], tab->root)) work.push_back(intern(s, ts));
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    Node nd = nodes[v];
    auto succ_it = k.steps.find(nd.k);
    if (succ_it == k.steps.end())
      throw InputError("structure is not closed under its step relation");
    for (Mask k2 : succ_it->second) {
      auto g2 = tab->by_atoms.find(pattern_of(k2));
      if (g2 == tab->by_atoms.end()) continue;
      for (int t2 : g2->second)
        if (tab->step_ok(tab->states[nd.t], tab->states[t2])) {
          bool fresh = !id.count({k2, t2});
          int w = intern(k2, t2);
          adj[v].push_back(w);
          if (fresh) work.push_back(w);
        }
    }
  }

  // Tarjan SCC (iterative).  A nontrivial SCC meeting every until's
  // acceptance set witnesses a path satisfying ~psi.
  int n = static_cast<int>(nodes.size());
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stk;
  int counter = 0, ncomp = 0;
  std::vector<std::vector<int>> comps;

  for (int start = 0; start < n; ++start) {
    if (idx[start] != -1) continue;
    std::vector<std::pair<int, std::size_t>> call{{start, 0}};
    while (!call.empty()) {
      auto& [v, ci] = call.back();
      if (ci == 0) {
        idx[v] = low[v] = counter++;
        stk.push_back(v);
        on_stack[v] = 1;
      }
      if (ci < adj[v].size()) {
        int w = adj[v][ci++];
        if (idx[w] == -1) {
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
      } else {
        if (low[v] == idx[v]) {
          comps.emplace_back();
          while (true) {
            int w = stk.back();
            stk.pop_back();
            on_stack[w] = 0;
            comp[w] = ncomp;
            comps.back().push_back(w);
            if (w == v) break;
          }
          ++ncomp;
        }
        int finished = v;
        call.pop_back();
        if (!call.empty())
          low[call.back().first] = std::min(low[call.back().first], low[finished]);
      }
    }
  }

  for (const auto& members : comps) {
    bool nontrivial = members.size() > 1;
    if (!nontrivial)
      for (int w : adj[members[0]])
        if (w == members[0]) nontrivial = true;
    if (!nontrivial) continue;
    bool fair = true;
    for (int u : tab->until_elems) {
      bool hit = false;
      for (int v : members)
        if (tab->accepting(tab->states[nodes[v].t], u)) {
          hit = true;
          break;
        }
      if (!hit) {
        fair = false;
        break;
      }
    }
    if (fair) return false;  // counterexample lasso exists
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lasso oracle.
// ---------------------------------------------------------------------------

bool eval_ltl_on_lasso(const LassoPath& lasso, const FormulaPtr& psi,
                       const Labeler& labels) {
  if (lasso.cycle.empty()) throw InputError("lasso has an empty cycle");
  std::size_t p = lasso.prefix.size();
  std::size_t c = lasso.cycle.size();
  std::size_t total = p + 2 * c;  // two cycle copies; wrap into the second
  auto next_pos = [&](std::size_t j) { return j + 1 < total ? j + 1 : p + c; };

  std::vector<FormulaPtr> cl;
  std::map<std::string, int> index;
  collect_closure(psi, cl, index);
  int n = static_cast<int>(cl.size());
  std::vector<std::vector<char>> val(n, std::vector<char>(total, 0));

  for (int e = 0; e < n; ++e) {
    const FormulaPtr& f = cl[e];
    int c1 = f->lhs ? index.at(render(f->lhs)) : -1;
    int c2 = f->rhs ? index.at(render(f->rhs)) : -1;
    switch (f->kind) {
      case NodeKind::Atom:
        for (std::size_t j = 0; j < total; ++j)
          val[e][j] = labels(f->atom, lasso.at(j));
        break;
      case NodeKind::True:
        for (std::size_t j = 0; j < total; ++j) val[e][j] = 1;
        break;
      case NodeKind::Not:
        for (std::size_t j = 0; j < total; ++j) val[e][j] = !val[c1][j];
        break;
      case NodeKind::Or:
        for (std::size_t j = 0; j < total; ++j)
          val[e][j] = val[c1][j] || val[c2][j];
        break;
      case NodeKind::Next:
        for (std::size_t j = total; j-- > 0;) val[e][j] = val[c1][next_pos(j)];
        break;
      case NodeKind::Until: {
        // Least fixpoint over the wrapped positions.
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t j = total; j-- > 0;) {
            char v = val[c2][j] || (val[c1][j] && val[e][next_pos(j)]);
            if (v != val[e][j]) {
              val[e][j] = v;
              changed = true;
            }
          }
        }
        break;
      }
      case NodeKind::Coalition:
        throw ContractError("lasso evaluation received a coalition operator");
    }
  }
  return val[index.at(render(psi))][0];
}

// ---------------------------------------------------------------------------
// One-step force and the ATL fixpoint.
// ---------------------------------------------------------------------------

namespace {

// Exists a fixed choice for the coalition at s mapping every completion by
// the other agents into `good`.
bool force_once(const GameStructure& g, const std::set<AgentId>& coalition, Mask s,
                const std::function<bool(Mask)>& good) {
  std::vector<AgentId> members(coalition.begin(), coalition.end());
  std::vector<AgentId> others;
  for (AgentId i = 1; i <= g.n_agents; ++i)
    if (!coalition.count(i)) others.push_back(i);

  std::vector<std::vector<Mask>> macts, oacts;
  for (AgentId i : members) macts.push_back(enabled(g, i, s));
  for (AgentId i : others) oacts.push_back(enabled(g, i, s));

  std::vector<std::size_t> mi(members.size(), 0);
  while (true) {
    bool all_good = true;
    std::vector<std::size_t> oi(others.size(), 0);
    while (true) {
      JointAction joint(g.n_agents, 0);
      for (std::size_t a = 0; a < members.size(); ++a)
        joint[members[a] - 1] = macts[a][mi[a]];
      for (std::size_t a = 0; a < others.size(); ++a)
        joint[others[a] - 1] = oacts[a][oi[a]];
      if (!good(apply_raw(g, s, joint))) {
        all_good = false;
        break;
      }
      // odometer over the opponents, last agent fastest
      std::size_t a = others.size();
      while (a > 0 && ++oi[a - 1] == oacts[a - 1].size()) oi[--a] = 0;
      if (a == 0) break;
      if (others.empty()) break;
    }
    if (all_good) return true;
    std::size_t a = members.size();
    while (a > 0 && ++mi[a - 1] == macts[a - 1].size()) mi[--a] = 0;
    if (a == 0) break;
    if (members.empty()) break;
  }
  return false;
}

}  // namespace

std::set<Mask> check_atl_fixpoint(const GameStructure& g, const FormulaPtr& phi) {
  if (classify(phi) == FragmentTag::ATLSTAR || !is_state_formula(phi))
    throw ContractError("fixpoint checker requires an ATL state formula");
  if (g.atoms.size() > g.limits.max_atoms)
    throw ResourceError("state space exceeds the atom cap");

  std::vector<Mask> all;
  for (Mask s = 0;; ++s) {
    all.push_back(s);
    if (s == g.atoms.universe()) break;
  }

  std::function<std::set<Mask>(const FormulaPtr&)> sat =
      [&](const FormulaPtr& f) -> std::set<Mask> {
    std::set<Mask> out;
    switch (f->kind) {
      case NodeKind::Atom: {
        int p = g.atoms.index(f->atom);
        for (Mask s : all)
          if ((s >> p) & 1) out.insert(s);
        return out;
      }
      case NodeKind::True:
        return {all.begin(), all.end()};
      case NodeKind::Not: {
        std::set<Mask> in = sat(f->lhs);
        for (Mask s : all)
          if (!in.count(s)) out.insert(s);
        return out;
      }
      case NodeKind::Or: {
        out = sat(f->lhs);
        for (Mask s : sat(f->rhs)) out.insert(s);
        return out;
      }
      case NodeKind::Coalition: {
        const FormulaPtr& body = f->lhs;
        for (AgentId i : f->coalition)
          if (!g.has_agent(i))
            throw InputError("coalition member " + std::to_string(i) +
                             " is not an agent of the structure");
        if (body->kind == NodeKind::Next) {
          std::set<Mask> target = sat(body->lhs);
          for (Mask s : all)
            if (force_once(g, f->coalition, s,
                           [&](Mask t) { return target.count(t) != 0; }))
              out.insert(s);
          return out;
        }
        if (body->kind == NodeKind::Until) {
          std::set<Mask> s1 = sat(body->lhs), s2 = sat(body->rhs);
          std::set<Mask> z = s2;
          bool grew = true;
          while (grew) {
            grew = false;
            for (Mask s : all) {
              if (z.count(s) || !s1.count(s)) continue;
              if (force_once(g, f->coalition, s,
                             [&](Mask t) { return z.count(t) != 0; })) {
                z.insert(s);
                grew = true;
              }
            }
          }
          return z;
        }
        throw ContractError("coalition body is not an ATL shape");
      }
      default:
        throw ContractError("not an ATL state formula");
    }
  };
  return sat(phi);
}

// ---------------------------------------------------------------------------
// The general evaluator.
// ---------------------------------------------------------------------------

namespace {

// Max next-operator nesting of an until-free formula; nullopt when an until
// occurs (truth then depends on unbounded suffixes).
std::optional<int> next_horizon(const FormulaPtr& f) {
  switch (f->kind) {
    case NodeKind::Atom:
    case NodeKind::True:
      return 0;
    case NodeKind::Not:
      return next_horizon(f->lhs);
    case NodeKind::Or: {
      auto a = next_horizon(f->lhs), b = next_horizon(f->rhs);
      if (!a || !b) return std::nullopt;
      return std::max(*a, *b);
    }
    case NodeKind::Next: {
      auto a = next_horizon(f->lhs);
      if (!a) return std::nullopt;
      return *a + 1;
    }
    case NodeKind::Until:
      return std::nullopt;
    case NodeKind::Coalition:
      return std::nullopt;
  }
  return std::nullopt;
}

class Evaluator {
 public:
  Evaluator(const GameStructure& g, const CheckOptions& opts, CheckStats* stats)
      : g_(g), opts_(opts), stats_(stats) {}

  bool eval(const FormulaPtr& f, Mask s) {
    auto key = std::make_pair(f.get(), s);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = eval_uncached(f, s);
    memo_.emplace(key, v);
    return v;
  }

  bool coalition_general(const std::set<AgentId>& coalition, const FormulaPtr& body,
                         Mask s, StrategyProfile* witness) {
    // Replace maximal state subformulas by labels so the body becomes pure
    // LTL; labels are resolved back through this evaluator.
    std::map<std::string, FormulaPtr> labels;
    std::map<std::string, std::string> by_render;
    int counter = 0;
    FormulaPtr psi = labelize(body, labels, by_render, counter);
    Labeler labeler = [this, labels](const std::string& atom, Mask state) {
      auto it = labels.find(atom);
      if (it != labels.end())
        return const_cast<Evaluator*>(this)->eval(it->second, state);
      return ((state >> g_.atoms.index(atom)) & 1) != 0;
    };
    return exists_strategy(coalition, s, psi, labeler, witness);
  }

 private:
  FormulaPtr labelize(const FormulaPtr& f, std::map<std::string, FormulaPtr>& labels,
                      std::map<std::string, std::string>& by_render, int& counter) {
    if (is_state_formula(f)) {
      if (f->kind == NodeKind::Atom || f->kind == NodeKind::True) return f;
      std::string key = render(f);
      auto it = by_render.find(key);
      if (it != by_render.end()) return f_atom(it->second);
      std::string name = "@" + std::to_string(counter++);
      by_render.emplace(key, name);
      labels.emplace(name, f);
      return f_atom(name);
    }
    switch (f->kind) {
      case NodeKind::Not:
        return f_not(labelize(f->lhs, labels, by_render, counter));
      case NodeKind::Or:
        return f_or(labelize(f->lhs, labels, by_render, counter),
                    labelize(f->rhs, labels, by_render, counter));
      case NodeKind::Next:
        return f_next(labelize(f->lhs, labels, by_render, counter));
      case NodeKind::Until:
        return f_until(labelize(f->lhs, labels, by_render, counter),
                       labelize(f->rhs, labels, by_render, counter));
      default:
        return f;  // unreachable: state formulas handled above
    }
  }

  bool eval_uncached(const FormulaPtr& f, Mask s) {
    if (stats_) ++stats_->states_visited;
    switch (f->kind) {
      case NodeKind::Atom:
        return ((s >> g_.atoms.index(f->atom)) & 1) != 0;
      case NodeKind::True:
        return true;
      case NodeKind::Not:
        return !eval(f->lhs, s);
      case NodeKind::Or:
        return eval(f->lhs, s) || eval(f->rhs, s);
      case NodeKind::Next:
      case NodeKind::Until:
        throw ContractError("path formula evaluated in state position");
      case NodeKind::Coalition:
        break;
    }
    for (AgentId i : f->coalition)
      if (!g_.has_agent(i))
        throw InputError("coalition member " + std::to_string(i) +
                         " is not an agent of the structure");
    const FormulaPtr& body = f->lhs;
    if (!opts_.force_enumeration) {
      if (is_state_formula(body)) return eval(body, s);
      if (body->kind == NodeKind::Next && is_state_formula(body->lhs))
        return force_once(g_, f->coalition, s,
                          [&](Mask t) { return eval(body->lhs, t); });
      if (body->kind == NodeKind::Until && is_state_formula(body->lhs) &&
          is_state_formula(body->rhs))
        return coalition_until_fixpoint(f->coalition, body->lhs, body->rhs, s);
    }
    return coalition_general(f->coalition, body, s, nullptr);
  }

  // Least fixpoint Z = sat(y) u (sat(x) n Force_C(Z)) over the reachable
  // closure of s; membership of states outside that closure cannot influence
  // the verdict at s.
  bool coalition_until_fixpoint(const std::set<AgentId>& coalition,
                                const FormulaPtr& x, const FormulaPtr& y, Mask s) {
    std::vector<Mask> order{s};
    std::set<Mask> reach{s};
    for (std::size_t i = 0; i < order.size(); ++i)
      for (Mask t : successors(g_, order[i]))
        if (reach.insert(t).second) order.push_back(t);

    std::set<Mask> z;
    for (Mask t : order)
      if (eval(y, t)) z.insert(t);
    bool grew = true;
    while (grew) {
      grew = false;
      for (Mask t : order) {
        if (z.count(t) || !eval(x, t)) continue;
        if (force_once(g_, coalition, t, [&](Mask u) { return z.count(u) != 0; })) {
          z.insert(t);
          grew = true;
        }
      }
    }
    return z.count(s) != 0;
  }

  bool exists_strategy(const std::set<AgentId>& coalition, Mask s0,
                       const FormulaPtr& psi, const Labeler& labeler,
                       StrategyProfile* witness) {
    if (coalition.empty()) {
      StrategyProfile empty;
      InducedStructure k = induced(g_, empty, Coalition{}, s0);
      return check_universal_ltl(k, s0, psi, labeler);
    }
    std::vector<AgentId> members(coalition.begin(), coalition.end());
    std::optional<int> horizon = next_horizon(psi);

    // Joint coalition choices per decided state, aligned with `members`.
    std::map<Mask, std::vector<Mask>> chosen;

    // Enumerate coalition joint choices at a state in canonical order.
    auto choices_at = [&](Mask t) {
      std::vector<std::vector<Mask>> out{{}};
      for (AgentId i : members) {
        std::vector<std::vector<Mask>> next;
        for (const auto& partial : out)
          for (Mask a : enabled(g_, i, t)) {
            auto c = partial;
            c.push_back(a);
            next.push_back(std::move(c));
          }
        out = std::move(next);
      }
      return out;
    };
    auto default_choice = [&](Mask t) {
      std::vector<Mask> c;
      for (AgentId i : members) c.push_back(enabled(g_, i, t).front());
      return c;
    };

    std::function<bool()> go = [&]() -> bool {
      // BFS from s0 under the current partial assignment; the first state
      // needing a decision (in BFS order) becomes the branch point.
      std::map<Mask, int> dist{{s0, 0}};
      std::deque<Mask> q{s0};
      std::optional<Mask> branch;
      std::map<Mask, std::vector<Mask>> resolved;
      while (!q.empty()) {
        Mask t = q.front();
        q.pop_front();
        int d = dist[t];
        std::vector<Mask> acts;
        auto ch = chosen.find(t);
        if (ch != chosen.end()) {
          acts = ch->second;
        } else if (horizon && d >= *horizon) {
          // Choices this deep cannot influence the (next-bounded) formula;
          // pin them deterministically instead of branching.
          acts = default_choice(t);
        } else {
          if (!branch) branch = t;
          continue;
        }
        resolved.emplace(t, acts);
        // Expand: coalition pinned, opponents free.
        std::vector<std::vector<Mask>> per_agent(g_.n_agents);
        for (AgentId i = 1; i <= g_.n_agents; ++i) per_agent[i - 1] = enabled(g_, i, t);
        for (std::size_t a = 0; a < members.size(); ++a)
          per_agent[members[a] - 1] = {acts[a]};
        std::vector<JointAction> joints{{}};
        for (const auto& pa : per_agent) {
          std::vector<JointAction> next;
          for (const auto& partial : joints)
            for (Mask a : pa) {
              JointAction j = partial;
              j.push_back(a);
              next.push_back(std::move(j));
            }
          joints = std::move(next);
        }
        std::vector<Mask> succ;
        for (const JointAction& j : joints) succ.push_back(apply_raw(g_, t, j));
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        for (Mask u : succ)
          if (!dist.count(u)) {
            dist[u] = d + 1;
            q.push_back(u);
          }
      }

      if (branch) {
        for (const auto& choice : choices_at(*branch)) {
          chosen[*branch] = choice;
          if (go()) return true;
        }
        chosen.erase(*branch);
        return false;
      }

      ++tested_;
      if (stats_) ++stats_->strategies_tested;
      if (tested_ > opts_.limits.max_strategies)
        throw ResourceError("strategy enumeration exceeded the cap of " +
                            std::to_string(opts_.limits.max_strategies));
      StrategyProfile sigma;
      for (AgentId i : members) sigma.assignments[i];
      for (const auto& [t, acts] : resolved)
        for (std::size_t a = 0; a < members.size(); ++a)
          sigma.assignments[members[a]][t] = acts[a];
      InducedStructure k = induced(g_, sigma, Coalition{coalition}, s0);
      if (check_universal_ltl(k, s0, psi, labeler)) {
        if (witness) *witness = sigma;
        return true;
      }
      return false;
    };
    return go();
  }

  const GameStructure& g_;
  CheckOptions opts_;
  CheckStats* stats_;
  long long tested_ = 0;
  std::map<std::pair<const Formula*, Mask>, bool> memo_;
};

void check_vocabulary(const GameStructure& g, const FormulaPtr& phi) {
  for (const auto& a : formula_atoms(phi)) g.atoms.index(a);
  for (AgentId i : formula_agents(phi))
    if (!g.has_agent(i))
      throw InputError("coalition member " + std::to_string(i) +
                       " is not an agent of the structure");
}

}  // namespace

bool check_state(const GameStructure& g, Mask s, const FormulaPtr& phi,
                 const CheckOptions& opts, CheckStats* stats) {
  if (!is_state_formula(phi))
    throw InputError("model checking requires a state formula");
  if (s & ~g.atoms.universe()) throw InputError("state outside the universe");
  if (g.atoms.size() > opts.limits.max_atoms)
    throw ResourceError("state space exceeds the atom cap");
  check_vocabulary(g, phi);
  Evaluator ev(g, opts, stats);
  return ev.eval(phi, s);
}

EwinResult ewin(const GameStructure& g, AgentId i, const FormulaPtr& goal, Mask s,
                const CheckOptions& opts, CheckStats* stats) {
  if (!g.has_agent(i)) throw InputError("unknown agent " + std::to_string(i));
  if (classify(goal) != FragmentTag::LTL)
    throw InputError("goals must be LTL formulas");
  check_vocabulary(g, goal);
  Evaluator ev(g, opts, stats);
  EwinResult r;
  StrategyProfile witness;
  r.winnable = ev.coalition_general({i}, goal, s, &witness);
  if (r.winnable) r.witness = std::move(witness);
  return r;
}

}  // namespace cgs
