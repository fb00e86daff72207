// semantics.hpp -- concrete and abstract step relations
#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "zeroone/configuration.hpp"
#include "zeroone/protocol.hpp"

namespace zeroone {

/// What induced a step: the primitive, its message/label (if any) and the
/// transition that identifies it (broadcast, user/controller transition).
struct StepInfo {
  Primitive kind = Primitive::Internal;
  SymbolIndex symbol = 0;
  TransitionIndex transition = 0;
};

/// A concrete step spelled out as transitions with multiplicities. Processes
/// not mentioned stay put. For a lossy broadcast `sender` is the broadcast
/// transition and its multiplicity is included in `moves`.
struct StepWitness {
  Primitive kind = Primitive::Internal;
  std::vector<std::pair<TransitionIndex, std::uint32_t>> moves;
  std::optional<TransitionIndex> sender;
  std::optional<SymbolIndex> label;
};

struct StepBound {
  std::uint32_t value = 1;
};

/// Per-protocol lookup tables; build once and reuse across many queries.
class Semantics {
 public:
  explicit Semantics(const Protocol& p);

  const Protocol& protocol() const { return p_; }

  using ConcreteSink = std::function<void(const Configuration&, const StepInfo&)>;
  using AbstractSink = std::function<void(const AbstractConfiguration&, const StepInfo&)>;

  /// Every step from `cfg`, grouped by inducing transition. A successor may be
  /// reported more than once (under different StepInfo).
  void for_each_step(const Configuration& cfg, const ConcreteSink& sink) const;
  /// Sorted and deduplicated.
  std::vector<Configuration> successors(const Configuration& cfg) const;

  std::optional<StepWitness> is_step(const Configuration& src, const Configuration& dst) const;

  /// Direct per-primitive abstract rules.
  void for_each_abstract_step(const AbstractConfiguration& a, const AbstractSink& sink) const;
  std::vector<AbstractConfiguration> abstract_successors(const AbstractConfiguration& a) const;

  /// α-images of steps from every source with support a.occupied and counts in 1..B.
  std::vector<AbstractConfiguration> generic_abstract_successors(const AbstractConfiguration& a,
                                                                 StepBound bound) const;

 private:
  struct UserMove {
    TransitionIndex index;
    StateIndex to;
  };
  // [symbol][state] -> transitions of the given kind leaving that state
  using Table = std::vector<std::vector<std::vector<UserMove>>>;

  const std::vector<UserMove>& user_moves(const Table& t, SymbolIndex sym, StateIndex q) const;
  const std::vector<UserMove>& ctrl_moves(const Table& t, SymbolIndex sym, StateIndex c) const;
  bool gsync_enabled(SymbolIndex label, StateIndex ctrl, UserMask support) const;

  void lossy_steps(const Configuration& cfg, const ConcreteSink& sink) const;
  void sync_steps(const Configuration& cfg, const ConcreteSink& sink) const;
  void lossy_abstract(const AbstractConfiguration& a, const AbstractSink& sink) const;
  void sync_abstract(const AbstractConfiguration& a, const AbstractSink& sink) const;

  std::optional<StepWitness> lossy_witness(const Configuration& src, const Configuration& dst) const;
  std::optional<StepWitness> sync_witness(const Configuration& src, const Configuration& dst) const;

  const Protocol& p_;
  Table user_receive_, ctrl_receive_;
  Table user_sync_, ctrl_sync_;
  std::vector<TransitionIndex> broadcasts_;
  std::vector<TransitionIndex> singles_;  // internal, disjunctive and ASM transitions
  std::vector<UserMove> none_;
};

std::vector<Configuration> concrete_successors(const Protocol& p, const Configuration& cfg);
std::optional<StepWitness> is_step(const Protocol& p, const Configuration& src, const Configuration& dst);
/// Replays a witness; throws std::invalid_argument if it does not apply.
Configuration apply_witness(const Protocol& p, const Configuration& src, const StepWitness& w);

StepBound step_bound(const Protocol& p);

std::vector<AbstractConfiguration> abstract_successors(const Protocol& p, const AbstractConfiguration& a);
std::vector<AbstractConfiguration> generic_abstract_successors(const Protocol& p, const AbstractConfiguration& a,
                                                               StepBound bound);

}  // namespace zeroone
