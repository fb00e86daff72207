// tcs.hpp -- transition counter systems: controller-free systems whose steps
// apply a minimal step D (a set of local transitions) with positive multiplicities.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeroone/constraint.hpp"
#include "zeroone/protocol.hpp"

namespace zeroone {

class TcsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LocalTransition {
  StateIndex from = 0;
  StateIndex to = 0;
  auto operator<=>(const LocalTransition&) const = default;
};

/// A set D of transitions (indices into Tcs::delta) with derived pre/post.
struct MinimalStep {
  std::vector<std::size_t> transitions;
  UserMask pre_support = 0;
  UserMask post_support = 0;
  /// Largest pre(D)(p) over p.
  std::uint32_t max_pre = 0;
};

/// Compact description of several minimal steps: every fixed ∪ R with R ⊆ optional.
/// The lossy conversion yields one family per broadcast.
struct StepFamily {
  std::vector<std::size_t> fixed;
  std::vector<std::size_t> optional;
};

struct Tcs {
  std::vector<std::string> user_states;
  std::vector<LocalTransition> delta;
  std::vector<StepFamily> families;
  UserMask initial_users = 0;

  std::size_t num_user() const { return user_states.size(); }
  /// Enumerates Dmin lazily; stops early when `fn` returns false.
  void for_each_step(const std::function<bool(const MinimalStep&)>& fn) const;
  std::vector<MinimalStep> dmin() const;
  std::size_t dmin_size() const;
  MinimalStep make_step(std::vector<std::size_t> transitions) const;
};

/// Controller-free protocols whose primitives are internal plus either lossy
/// broadcast or disjunctive guards. Throws TcsError otherwise.
Tcs to_tcs(const Protocol& p);

std::vector<UserMask> tcs_abstract_successors(const Tcs& t, UserMask a);

struct SaturationResult {
  bool verdict = false;
  UserMask support = 0;
  std::size_t rounds = 0;
};

/// PTIME saturation for constraints of class GEQ.
SaturationResult saturate(const Tcs& t, const Constraint& phi);
bool decide_crp_geq(const Tcs& t, const Constraint& phi);

struct TwoPhaseResult {
  bool verdict = false;
  /// Supports of the run found (start included).
  std::vector<UserMask> run;
  /// Steps of the longest run the search examined.
  std::size_t longest_run = 0;
  std::size_t nodes = 0;
};

/// Searches runs that first strictly grow the support, then strictly shrink it.
TwoPhaseResult two_phase_search(const Tcs& t, const std::function<bool(UserMask)>& goal,
                                bool allow_empty_start = true);
/// For constraints of class GEQ or GEQ_ZERO.
TwoPhaseResult decide_crp_geq_zero_run(const Tcs& t, const Constraint& phi, bool allow_empty_start = true);
bool decide_crp_geq_zero(const Tcs& t, const Constraint& phi);

struct DeadlockResult {
  bool with_empty_start = false;
  bool without_empty_start = false;
  bool verdict() const { return with_empty_start; }
  bool ambiguous() const { return with_empty_start != without_empty_start; }
};

/// Whether a configuration with no enabled minimal step is reachable. Requires
/// pre(D)(p) <= 1 for every D and p.
DeadlockResult detect_deadlock(const Tcs& t);
/// ⋀_D ⋁_{q ∈ pre D} #q = 0 over user-state indices of t. Throws if Dmin is empty.
Constraint deadlock_constraint(const Tcs& t);

/// One line per minimal step: "D: p->q, r->r".
std::string dump_tcs(const Tcs& t);

}  // namespace zeroone
