#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgs {

// A state or an action is a set of atoms, packed as a bitmask.  Bit k
// corresponds to the k-th atom of the structure's universe in canonical
// (lexicographic) order.
using Mask = std::uint32_t;

// Agents are 1..n.  Fresh agents introduced by encoders (the aggregator of
// the exclusive-control image) take index n+1.
using AgentId = int;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Limits {
  int max_atoms = 20;
  long long max_strategies = 10'000'000;
};

bool valid_atom_name(const std::string& name);

// Immutable, lexicographically sorted atom universe.
class AtomTable {
 public:
  AtomTable() = default;
  explicit AtomTable(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<int> find(const std::string& name) const;
  int index(const std::string& name) const;  // throws InputError on unknown

  Mask universe() const {
    return size() == 32 ? ~Mask{0} : (Mask{1} << size()) - 1;
  }

  Mask mask_of(const std::vector<std::string>& atoms) const;
  std::vector<std::string> atoms_of(Mask m) const;

  // Renders a mask as a state/action literal, e.g. "{p,q}" or "{}".
  std::string format(Mask m) const;
  // Parses a "{p,q}" literal.
  Mask parse_literal(const std::string& text) const;

  bool operator==(const AtomTable& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
};

// All submasks of `m` in ascending numeric order (the canonical enumeration
// order for powersets).
std::vector<Mask> submasks(Mask m);

int popcount(Mask m);

}  // namespace cgs
