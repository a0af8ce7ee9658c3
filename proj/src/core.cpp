#include "cgs/core.hpp"

#include <bit>
#include <sstream>

namespace cgs {

bool valid_atom_name(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
    return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

AtomTable::AtomTable(std::vector<std::string> names) : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!valid_atom_name(names_[i]))
      throw InputError("invalid atom name: '" + names_[i] + "'");
    if (i > 0 && names_[i] == names_[i - 1])
      throw InputError("duplicate atom name: '" + names_[i] + "'");
  }
  if (names_.size() > 32) throw ResourceError("atom universe exceeds 32 atoms");
}

std::optional<int> AtomTable::find(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

int AtomTable::index(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw InputError("unknown atom: '" + name + "'");
}

Mask AtomTable::mask_of(const std::vector<std::string>& atoms) const {
  Mask m = 0;
  for (const auto& a : atoms) m |= Mask{1} << index(a);
  return m;
}

std::vector<std::string> AtomTable::atoms_of(Mask m) const {
  std::vector<std::string> out;
  for (int i = 0; i < size(); ++i)
    if (m & (Mask{1} << i)) out.push_back(names_[i]);
  return out;
}

std::string AtomTable::format(Mask m) const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i = 0; i < size(); ++i) {
    if (m & (Mask{1} << i)) {
      if (!first) os << ',';
      os << names_[i];
      first = false;
    }
  }
  os << '}';
  return os.str();
}

Mask AtomTable::parse_literal(const std::string& text) const {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.size() < 2 || t.front() != '{' || t.back() != '}')
    throw InputError("malformed state literal: '" + text + "'");
  t = t.substr(1, t.size() - 2);
  Mask m = 0;
  std::string atom;
  std::istringstream is(t);
  while (std::getline(is, atom, ','))
    if (!atom.empty()) m |= Mask{1} << index(atom);
  return m;
}

std::vector<Mask> submasks(Mask m) {
  std::vector<Mask> out;
  Mask s = 0;
  while (true) {
    out.push_back(s);
    if (s == m) break;
    s = (s - m) & m;
  }
  std::sort(out.begin(), out.end());
  return out;
}

int popcount(Mask m) { return std::popcount(m); }

}  // namespace cgs
