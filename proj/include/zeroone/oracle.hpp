// oracle.hpp -- brute-force exploration of fixed populations
#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "zeroone/configuration.hpp"
#include "zeroone/constraint.hpp"
#include "zeroone/crp.hpp"
#include "zeroone/protocol.hpp"

namespace zeroone {

using SuccessorFn = std::function<std::vector<Configuration>(const Configuration&)>;

struct Violation {
  enum class Kind { Forward, Backward } kind;
  /// The step small -> small_step and the configuration it is compared with:
  /// forward, small ⪯₀ big; backward, small_step ⪯₀ big.
  Configuration small, small_step, big;
};

struct OracleReport {
  std::uint64_t population = 0;
  std::vector<Configuration> reachable;
  std::vector<AbstractConfiguration> alpha_image;
  std::vector<Violation> violations;
  std::size_t pairs_checked = 0;
};

/// Configurations (c0, v0) with supp(v0) ⊆ Q0 and |v0| = n.
std::vector<Configuration> initial_configurations(const Protocol& p, std::uint64_t n);

/// Every configuration over p with exactly n users.
std::vector<Configuration> all_configurations(const Protocol& p, std::uint64_t n);

/// Exact reachable set for population n. `succ` defaults to the protocol's semantics.
OracleReport concrete_reach(const Protocol& p, std::uint64_t n, const Budget& budget = {}, SuccessorFn succ = {});

/// Forward: for every step x -> x' and x ⪯₀ y (populations ≤ n_max) some
/// y -> y' has x' ⪯₀ y'. Backward: for every step x -> x' and x' ⪯₀ y' some
/// y -> y' has x ⪯₀ y. Violations carry (x, x', y) resp. (x, x', y').
OracleReport check_compatibility(const Protocol& p, std::uint64_t n_max, SuccessorFn succ = {},
                                 const Budget& budget = {});

struct CrpOracleResult {
  std::vector<std::pair<std::uint64_t, bool>> per_population;
  bool any = false;
};

CrpOracleResult crp_oracle(const Protocol& p, const Constraint& phi, const std::vector<std::uint64_t>& populations,
                           const Budget& budget = {});

using Trace = std::vector<StateIndex>;

/// Stutter-collapsed controller traces of length ≤ max_len of all runs with
/// populations 0..max_n (prefix closed; includes the initial letter).
std::set<Trace> concrete_traces(const Protocol& p, std::size_t max_len, std::uint64_t max_n,
                                const Budget& budget = {});

}  // namespace zeroone
