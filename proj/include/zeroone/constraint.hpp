// constraint.hpp -- cardinality constraints over controller and user states
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "zeroone/configuration.hpp"
#include "zeroone/protocol.hpp"

namespace zeroone {

/// Constraint classes ordered by atom containment: GEQ ⊂ GEQ_ZERO ⊂ FULL.
enum class ConstraintClass : std::uint8_t { Geq, GeqZero, Full };

std::string_view to_string(ConstraintClass c);

class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable AST; copies share structure.
class Constraint {
 public:
  enum class Op : std::uint8_t { CtrlEq, CtrlNeq, GeqCount, ZeroCount, And, Or };

  static Constraint ctrl_eq(StateIndex c);
  static Constraint ctrl_neq(StateIndex c);
  /// Throws ConstraintError if `bound` is 0.
  static Constraint geq(StateIndex q, std::uint32_t bound);
  static Constraint zero(StateIndex q);
  static Constraint conj(Constraint lhs, Constraint rhs);
  static Constraint disj(Constraint lhs, Constraint rhs);

  Op op() const { return node_->op; }
  StateIndex state() const { return node_->state; }
  std::uint32_t bound() const { return node_->bound; }
  const Constraint& lhs() const { return *node_->lhs; }
  const Constraint& rhs() const { return *node_->rhs; }
  bool is_atom() const { return op() != Op::And && op() != Op::Or; }

  ConstraintClass classify() const;
  /// Largest threshold a over atoms #q >= a (0 if there is none).
  std::uint32_t max_threshold() const;

  bool operator==(const Constraint& other) const;

 private:
  struct Node {
    Op op;
    StateIndex state = 0;
    std::uint32_t bound = 0;
    std::shared_ptr<const Constraint> lhs, rhs;
  };
  static Constraint atom(Op op, StateIndex state, std::uint32_t bound);
  explicit Constraint(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// phi := term { "|" term } ; term := atom { "&" atom } ;
/// atom := "ctrl" ("="|"!=") ID | "#" ID ">=" NAT | "#" ID "=" "0" | "(" phi ")"
Constraint parse_constraint(std::string_view text, const Protocol& p);

std::string to_string(const Constraint& phi, const Protocol& p);

bool eval_constraint(const Constraint& phi, const Configuration& cfg);

/// φ_α: every #q >= a with a >= 1 becomes #q >= 1.
Constraint abstract_constraint(const Constraint& phi);

/// Throws ConstraintError if some atom #q >= a has a >= 2.
bool eval_abstract(const Constraint& phi_alpha, const AbstractConfiguration& a);

/// Conjunction / disjunction of a non-empty list.
Constraint conj_all(const std::vector<Constraint>& parts);
Constraint disj_all(const std::vector<Constraint>& parts);

}  // namespace zeroone
