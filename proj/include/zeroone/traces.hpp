// traces.hpp -- controller traces: safety via the 01-abstraction, the
// controller product for tracked users, and ω-traces of disjunctive systems
#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeroone/configuration.hpp"
#include "zeroone/crp.hpp"
#include "zeroone/protocol.hpp"
#include "zeroone/tcs.hpp"

namespace zeroone {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SpecMode { Safety, Buchi };

/// Deterministic automaton over a fixed alphabet (letter i = alphabet[i]).
struct SpecAutomaton {
  SpecMode mode = SpecMode::Safety;
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  std::uint32_t initial = 0;
  std::vector<bool> accepting;
  /// [state][letter]; nullopt means no transition (Büchi mode only).
  std::vector<std::vector<std::optional<std::uint32_t>>> delta;

  std::optional<std::uint32_t> step(std::uint32_t s, std::uint32_t letter) const { return delta.at(s).at(letter); }
};

/// Table format:
///   state <id> [init] [accept]
///   on <letter> <src> -> <dst>
/// Safety mode requires a total transition function and no edge from a
/// rejecting state back to an accepting one.
SpecAutomaton parse_spec(std::string_view text, const std::vector<std::string>& alphabet, SpecMode mode);
SpecAutomaton load_spec(const std::string& path, const std::vector<std::string>& alphabet, SpecMode mode);

/// Throws SpecError unless every invariant of the mode holds.
void validate_spec(const SpecAutomaton& a);

/// State reached on `word`, or nullopt if the run gets stuck.
std::optional<std::uint32_t> run_word(const SpecAutomaton& a, const std::vector<std::uint32_t>& word);

using Trace = std::vector<StateIndex>;

/// Controller projection with adjacent duplicates removed.
Trace trace_of(const std::vector<AbstractConfiguration>& run);
Trace trace_of(const std::vector<Configuration>& run);
std::string trace_to_string(const Protocol& p, const Trace& t);

struct TraceCheckResult {
  bool holds = true;
  /// Safety: a finite rejected trace. ω: the stem and loop of an accepting lasso.
  Trace counterexample;
  std::vector<AbstractConfiguration> run;
  std::vector<AbstractConfiguration> stem, loop;
  /// The accepted ω-word stem_trace · loop_trace^ω, with the shortest stem.
  Trace stem_trace, loop_trace;
  std::size_t product_states = 0;
};

/// Does every trace of the 01-abstraction (hence of every population) stay
/// inside the prefix-closed language of `spec`? Alphabet: the controller states.
TraceCheckResult check_safety(const Protocol& p, const SpecAutomaton& spec, const Budget& budget = {});

/// Traces of length ≤ max_len of the 01-abstraction.
std::set<Trace> abstract_traces(const Protocol& p, std::size_t max_len, const Budget& budget = {});

/// Controller state (c, q1..qk) tracks the controller and k chosen users, which
/// start in `tracked_initial` (each in Q0). The remaining users are unchanged.
Protocol controller_product(const Protocol& p, std::size_t k, const std::vector<StateIndex>& tracked_initial,
                            std::size_t max_states = 100'000);
/// Starts every tracked user in the first initial user state.
Protocol controller_product(const Protocol& p, std::size_t k);

/// Checks the product for every assignment of tracked users to Q0^k.
TraceCheckResult check_safety_tracked(const Protocol& p, std::size_t k, const SpecAutomaton& spec,
                                      const Budget& budget = {});
/// Controller-state names of the k-product (alphabet for tracked specs).
std::vector<std::string> product_alphabet(const Protocol& p, std::size_t k);

/// Only protocols built from internal and disjunctive transitions.
bool omega_eligible(const Protocol& p);

/// Abstract successors that keep every occupied state occupied.
std::vector<AbstractConfiguration> monotone_successors(const Protocol& p, const AbstractConfiguration& a);

/// `negation` is a Büchi automaton for the complement of the property. The
/// property holds iff no ω-trace of p is accepted by it.
TraceCheckResult check_omega(const Protocol& p, const SpecAutomaton& negation, const Budget& budget = {});

/// States: monotone supports reachable from `initial` (Q0 by default) plus a
/// sink "bot"; letters: Dmin; all states but the sink accept.
struct TcsBuchi {
  SpecAutomaton automaton;
  std::vector<MinimalStep> letters;
  /// Support of each automaton state; nullopt for the sink.
  std::vector<std::optional<UserMask>> support;
};
TcsBuchi build_buchi(const Tcs& t, std::optional<UserMask> initial = std::nullopt);

}  // namespace zeroone
