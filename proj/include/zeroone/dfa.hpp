// dfa.hpp -- complete DFAs and the intersection-emptiness instance generator
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zeroone/constraint.hpp"
#include "zeroone/protocol.hpp"

namespace zeroone {

struct Dfa {
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  std::uint32_t initial = 0;
  std::vector<bool> accepting;
  /// Total: delta[state][letter].
  std::vector<std::vector<std::uint32_t>> delta;
};

/// Spec-table format with an `alphabet <letter>...` header line; the
/// transition function must be total. Throws SpecError.
Dfa parse_dfa(std::string_view text);
Dfa load_dfa(const std::string& path);
std::string serialize_dfa(const Dfa& d);

struct DfaInstance {
  Protocol protocol;
  Constraint constraint;
};

/// Controller-free synchronization protocol whose users run the automata in
/// lockstep, and the constraint "every automaton has a process in a final
/// state". Reachable iff the intersection of the languages is non-empty.
DfaInstance gen_dfa_intersection(const std::vector<Dfa>& automata);

}  // namespace zeroone
