// crp.hpp -- cardinality reachability over the 01-abstraction
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zeroone/configuration.hpp"
#include "zeroone/constraint.hpp"
#include "zeroone/protocol.hpp"

namespace zeroone {

struct Budget {
  std::size_t max_states = 1'000'000;
  std::chrono::milliseconds timeout{60'000};
};

/// Resource exhaustion; never to be read as a negative verdict.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tracks a Budget across one search.
class BudgetClock {
 public:
  explicit BudgetClock(const Budget& b) : budget_(b), start_(std::chrono::steady_clock::now()) {}
  /// Throws BudgetExceeded when `states` or the elapsed time is over budget.
  void check(std::size_t states) const;
  double millis() const;

 private:
  Budget budget_;
  std::chrono::steady_clock::time_point start_;
};

struct CrpStats {
  std::size_t states = 0;
  std::size_t frontier_peak = 0;
  double millis = 0;
};

struct CrpResult {
  bool reachable = false;
  /// A run of the 01-abstraction from an initial configuration to the target.
  std::vector<AbstractConfiguration> witness;
  std::optional<AbstractConfiguration> satisfied_target;
  CrpStats stats;
};

struct ConcreteWitness {
  std::uint64_t population = 0;
  std::vector<Configuration> run;
};

/// (c0, S) for every S ⊆ Q0, including the empty set.
std::vector<AbstractConfiguration> initial_abstract(const Protocol& p);

std::vector<AbstractConfiguration> reachable_abstract(const Protocol& p, const Budget& budget = {});

CrpResult decide_crp(const Protocol& p, const Constraint& phi, const Budget& budget = {});

/// max(A,1) * |Q| * (steps + 1), A the largest >= threshold in phi.
std::uint64_t default_population_cap(const Protocol& p, const std::vector<AbstractConfiguration>& w,
                                     const Constraint& phi);

/// Best effort: the first population n in [|w[0]|, n_max] admitting a concrete
/// run with α-image w that ends in a configuration satisfying phi.
/// nullopt means "not found up to n_max", not "impossible".
std::optional<ConcreteWitness> concretize_witness(const Protocol& p, const std::vector<AbstractConfiguration>& w,
                                                  const Constraint& phi, std::uint64_t n_max,
                                                  const Budget& budget = {});

Constraint encode_cover(const Protocol& p, std::string_view q);
Constraint encode_coverctrl(const Protocol& p, std::string_view c);
/// Conjunction of #q >= v(q) over the positive entries of cfg.
Constraint encode_coverability(const Protocol& p, const Configuration& cfg);
/// All user processes in q: conjunction of #q' = 0 over q' != q.
Constraint encode_target(const Protocol& p, std::string_view q);

/// Named form, e.g. "cover(q3)", "coverctrl(c2)", "target(q3)", "coverability(c1,2,0,1)".
Constraint encode_named_problem(const Protocol& p, std::string_view spec);

nlohmann::json to_json(const Protocol& p, const AbstractConfiguration& a);
nlohmann::json to_json(const Protocol& p, const Configuration& c);
nlohmann::json crp_report(const Protocol& p, const CrpResult& r, const std::optional<ConcreteWitness>& concrete);

}  // namespace zeroone
