#include "cgs/reduction.hpp"

#include <chrono>
#include <numeric>

namespace cgs {

std::string copy_atom_name(AgentId i, const std::string& atom) {
  return "c_" + std::to_string(i) + "_" + atom;
}

Mask EpcImage::to_epc(Mask src_state) const {
  Mask out = 0;
  for (int p = 0; p < origin->atoms.size(); ++p)
    if ((src_state >> p) & 1) out |= Mask{1} << src_to_epc[p];
  return out;
}

Mask EpcImage::restrict_phi(Mask epc_state) const {
  Mask out = 0;
  for (int p = 0; p < origin->atoms.size(); ++p)
    if ((epc_state >> src_to_epc[p]) & 1) out |= Mask{1} << p;
  return out;
}

Mask EpcImage::encode_action(AgentId i, Mask action) const {
  Mask out = 0;
  for (int p = 0; p < origin->atoms.size(); ++p)
    if ((action >> p) & 1) out |= Mask{1} << copy_bit.at({i, p});
  return out;
}

Mask EpcImage::decode_action(AgentId i, Mask epc_bits) const {
  Mask out = 0;
  for (int p = 0; p < origin->atoms.size(); ++p) {
    auto it = copy_bit.find({i, p});
    if (it != copy_bit.end() && ((epc_bits >> it->second) & 1))
      out |= Mask{1} << p;
  }
  return out;
}

EpcImage build_epc(const GameStructure& shared) {
  auto diags = validate(shared);
  if (!diags.empty())
    throw InputError("cannot reduce an invalid structure: " + diags.front().message);

  std::vector<std::string> names = shared.atoms.names();
  names.push_back(kTurnAtom);
  for (AgentId i = 1; i <= shared.n_agents; ++i)
    for (int p = 0; p < shared.atoms.size(); ++p)
      if ((shared.control[i - 1] >> p) & 1)
        names.push_back(copy_atom_name(i, shared.atoms.name(p)));
  if (static_cast<int>(names.size()) > shared.limits.max_atoms)
    throw ResourceError("image universe has " + std::to_string(names.size()) +
                        " atoms, cap is " + std::to_string(shared.limits.max_atoms));

  EpcImage img;
  img.origin = std::make_shared<GameStructure>(shared);
  img.star = shared.n_agents + 1;

  GameStructure& e = img.epc;
  e.atoms = AtomTable(std::move(names));
  e.n_agents = shared.n_agents + 1;
  e.limits = shared.limits;
  img.turn_bit = e.atoms.index(kTurnAtom);
  img.turn_mask = Mask{1} << img.turn_bit;

  img.src_to_epc.resize(shared.atoms.size());
  for (int p = 0; p < shared.atoms.size(); ++p) {
    img.src_to_epc[p] = e.atoms.index(shared.atoms.name(p));
    img.phi_mask |= Mask{1} << img.src_to_epc[p];
  }
  img.copy_mask.assign(shared.n_agents, 0);
  for (AgentId i = 1; i <= shared.n_agents; ++i)
    for (int p = 0; p < shared.atoms.size(); ++p)
      if ((shared.control[i - 1] >> p) & 1) {
        int bit = e.atoms.index(copy_atom_name(i, shared.atoms.name(p)));
        img.copy_bit[{i, p}] = bit;
        img.copy_mask[i - 1] |= Mask{1} << bit;
      }

  e.control.assign(e.n_agents, 0);
  for (AgentId i = 1; i <= shared.n_agents; ++i) e.control[i - 1] = img.copy_mask[i - 1];
  e.control[img.star - 1] = img.turn_mask | img.phi_mask;

  // The image keeps a copy of itself inside the protocol closure; what the
  // closure needs is captured by value below.
  auto origin = img.origin;
  AgentId star = img.star;
  Mask turn_mask = img.turn_mask;
  Mask phi_mask = img.phi_mask;
  EpcImage maps = img;  // src_to_epc / copy_bit tables only; epc not yet final
  maps.origin = origin;

  e.protocol.kind = ProtocolKind::Computed;
  e.protocol.compute = [origin, star, turn_mask, phi_mask,
                        maps](AgentId i, Mask s_epc) -> std::vector<Mask> {
    bool turn = (s_epc & turn_mask) != 0;
    Mask s = maps.restrict_phi(s_epc);
    if (i != star) {
      if (turn) return {0};  // the singleton empty action
      std::vector<Mask> out;
      for (Mask a : enabled(*origin, i, s)) out.push_back(maps.encode_action(i, a));
      std::sort(out.begin(), out.end());
      return out;
    }
    if (!turn) {
      // +turn: repeat the current original values and raise the turn atom.
      return {(s_epc & phi_mask) | turn_mask};
    }
    // Aggregation step: read the copies back and replay tau.  The
    // transition function is total even where the protocol is not, hence
    // apply_raw.
    JointAction alpha;
    alpha.reserve(origin->n_agents);
    for (AgentId j = 1; j <= origin->n_agents; ++j)
      alpha.push_back(maps.decode_action(j, s_epc));
    return {maps.to_epc(apply_raw(*origin, s, alpha))};
  };

  e.transition = TransitionSpec::exclusive_union();
  if (shared.initial) e.initial = img.to_epc(*shared.initial);
  return img;
}

Mask canonical_state(const EpcImage& img, Mask s) {
  if (s & ~img.origin->atoms.universe())
    throw InputError("state outside the source universe");
  return img.to_epc(s);
}

namespace {

bool turn_alternates(const EpcImage& img, const LassoPath& path, std::size_t span) {
  for (std::size_t t = 0; t < span; ++t) {
    bool turn = (path.at(t) & img.turn_mask) != 0;
    if (turn != (t % 2 == 1)) return false;
  }
  return true;
}

}  // namespace

LassoPath project_path(const EpcImage& img, const LassoPath& epc_path) {
  if (epc_path.cycle.empty()) throw InputError("lasso has an empty cycle");
  std::size_t p = epc_path.prefix.size();
  std::size_t c = epc_path.cycle.size();
  // The alternation must hold over one full unrolling (parity flips when the
  // cycle has odd length, so cover two rounds).
  if (!turn_alternates(img, epc_path, p + 2 * c))
    throw InputError("path does not alternate on the turn atom");

  LassoPath out;
  std::size_t proj_prefix = (p + 1) / 2;
  std::size_t proj_cycle = c;  // period c is always valid for t -> 2t sampling
  for (std::size_t k = 0; k < proj_prefix; ++k)
    out.prefix.push_back(img.restrict_phi(epc_path.at(2 * k)));
  for (std::size_t k = proj_prefix; k < proj_prefix + proj_cycle; ++k)
    out.cycle.push_back(img.restrict_phi(epc_path.at(2 * k)));
  return out;
}

bool check_dagger(const LassoPath& shared_path, const LassoPath& epc_path,
                  const EpcImage& img) {
  if (shared_path.cycle.empty() || epc_path.cycle.empty())
    throw InputError("lasso has an empty cycle");
  std::size_t pa = shared_path.prefix.size(), ca = shared_path.cycle.size();
  std::size_t pb = epc_path.prefix.size(), cb = epc_path.cycle.size();
  // lambda'[2k] has period cb in k; checking past the prefixes for
  // lcm(ca, cb) steps covers every alignment.
  std::size_t prefix = std::max(pa, (pb + 1) / 2);
  std::size_t period = std::lcm(ca, cb);
  for (std::size_t k = 0; k < prefix + period; ++k) {
    Mask expected = shared_path.at(k);
    if (img.restrict_phi(epc_path.at(2 * k)) != expected) return false;
    if (img.restrict_phi(epc_path.at(2 * k + 1)) != expected) return false;
  }
  return true;
}

bool is_path_of_epc(const EpcImage& img, const LassoPath& epc_path) {
  if (epc_path.cycle.empty()) throw InputError("lasso has an empty cycle");
  std::size_t span = epc_path.prefix.size() + epc_path.cycle.size();
  for (std::size_t t = 0; t < span; ++t) {
    Mask cur = epc_path.at(t);
    Mask next = epc_path.at(t + 1);
    auto succ = successors(img.epc, cur);
    if (!std::binary_search(succ.begin(), succ.end(), next)) return false;
  }
  return true;
}

bool is_canonical_path(const EpcImage& img, const LassoPath& epc_path) {
  Mask first = epc_path.prefix.empty() ? epc_path.cycle.front() : epc_path.prefix.front();
  return first == img.to_epc(img.restrict_phi(first));
}

StrategyProfile lift_strategy(const EpcImage& img, const StrategyProfile& sigma) {
  StrategyProfile out;
  const GameStructure& e = img.epc;
  for (const auto& [i, by_state] : sigma.assignments) {
    if (!img.origin->has_agent(i))
      throw InputError("strategy covers unknown agent " + std::to_string(i));
    auto& lifted = out.assignments[i];
    for (Mask s_epc = 0;; ++s_epc) {
      if (s_epc & img.turn_mask) {
        lifted[s_epc] = 0;
      } else {
        Mask s = img.restrict_phi(s_epc);
        auto it = by_state.find(s);
        if (it != by_state.end()) lifted[s_epc] = img.encode_action(i, it->second);
      }
      if (s_epc == e.atoms.universe()) break;
    }
  }
  return out;
}

StrategyProfile lower_strategy(const EpcImage& img, const StrategyProfile& sigma_epc) {
  StrategyProfile out;
  for (const auto& [i, by_state] : sigma_epc.assignments) {
    if (i == img.star) continue;  // the aggregator has no counterpart
    auto& lowered = out.assignments[i];
    for (Mask s = 0;; ++s) {
      auto it = by_state.find(img.to_epc(s));
      if (it != by_state.end()) lowered[s] = img.decode_action(i, it->second);
      if (s == img.origin->atoms.universe()) break;
    }
  }
  return out;
}

TheoremReport verify_theorem(const GameStructure& shared, Mask s,
                             const FormulaPtr& phi, const CheckOptions& opts) {
  using clock = std::chrono::steady_clock;
  TheoremReport r;

  auto t0 = clock::now();
  r.shared_verdict = check_state(shared, s, phi, opts);
  auto t1 = clock::now();
  r.shared_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  EpcImage img = build_epc(shared);
  FormulaPtr translated = translate_tr(phi);
  auto t2 = clock::now();
  r.epc_verdict = check_state(img.epc, canonical_state(img, s), translated, opts);
  auto t3 = clock::now();
  r.epc_ms = std::chrono::duration<double, std::milli>(t3 - t2).count();

  r.agree = r.shared_verdict == r.epc_verdict;
  return r;
}

}  // namespace cgs
