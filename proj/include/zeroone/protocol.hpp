// protocol.hpp -- protocols of one controller and many identical users
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zeroone {

using StateIndex = std::uint32_t;
using SymbolIndex = std::uint32_t;
using TransitionIndex = std::uint32_t;

/// Bit vector over user states; bit q set iff user state q is in the set.
using UserMask = std::uint64_t;

inline constexpr std::size_t kMaxUserStates = 64;

constexpr UserMask user_bit(StateIndex q) { return UserMask{1} << q; }
constexpr bool has_user(UserMask m, StateIndex q) { return (m >> q) & 1U; }

/// Thrown for malformed protocol documents and invariant violations.
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class Side : std::uint8_t { Controller, User };

enum class TransitionKind : std::uint8_t {
  Internal,
  Broadcast,
  Receive,
  Disjunctive,
  Sync,
  AsmWrite,
  AsmRead,
};

/// Communication primitive a step is induced by.
enum class Primitive : std::uint8_t { Internal, Lossy, Disjunctive, Sync, GuardedSync, Asm };

/// The header-declared kind of a protocol document.
enum class DeclaredKind : std::uint8_t { Internal, Lossy, Disj, Sync, GSync, Asm, Mixed };

std::string_view to_string(Primitive p);
std::string_view to_string(DeclaredKind k);
std::optional<DeclaredKind> declared_kind_from_string(std::string_view s);

/// A subset of C ∪ Q, used for disjunctive and synchronization guards.
struct StateSet {
  std::vector<bool> ctrl;  // indexed by controller state
  UserMask users = 0;

  bool contains_ctrl(StateIndex c) const { return c < ctrl.size() && ctrl[c]; }
  bool contains_user(StateIndex q) const { return has_user(users, q); }

  static StateSet everything(std::size_t num_ctrl, std::size_t num_user);
  bool operator==(const StateSet&) const = default;
};

struct Transition {
  TransitionKind kind = TransitionKind::Internal;
  Side side = Side::User;
  StateIndex from = 0;
  StateIndex to = 0;
  /// Message (lossy), label (sync) or variable value (ASM); unused otherwise.
  SymbolIndex symbol = 0;
  /// Existential guard of a disjunctive transition.
  StateSet guard;

  bool operator==(const Transition&) const = default;
};

/// Guard pair attached to a synchronization label.
struct SyncGuard {
  SymbolIndex label = 0;
  StateSet exists;
  StateSet forall;
};

/// Finite-domain shared variable encoded in the controller state. The default
/// view is the identity: the controller state is the variable value.
struct VariableView {
  std::vector<std::string> values;
  std::vector<SymbolIndex> value_of;                // controller state -> value
  std::vector<std::vector<StateIndex>> assign;      // [controller state][value] -> controller state
};

/// Which primitives occur in a protocol.
class KindProfile {
 public:
  void add(Primitive p) { bits_ |= bit(p); }
  bool has(Primitive p) const { return (bits_ & bit(p)) != 0; }
  bool empty() const { return bits_ == 0; }
  /// True iff every primitive present is in `allowed`.
  bool only(std::initializer_list<Primitive> allowed) const;
  std::vector<Primitive> list() const;
  bool operator==(const KindProfile&) const = default;

 private:
  static std::uint8_t bit(Primitive p) { return static_cast<std::uint8_t>(1U << static_cast<unsigned>(p)); }
  std::uint8_t bits_ = 0;
};

struct Protocol {
  std::string name = "protocol";
  DeclaredKind declared_kind = DeclaredKind::Mixed;
  std::vector<std::string> controller_states;
  std::vector<std::string> user_states;
  StateIndex initial_controller = 0;
  UserMask initial_users = 0;
  std::vector<std::string> messages;
  std::vector<std::string> labels;
  std::vector<Transition> transitions;
  std::vector<SyncGuard> guards;
  /// Empty means the identity view over controller states.
  std::optional<VariableView> variable;

  std::size_t num_controller() const { return controller_states.size(); }
  std::size_t num_user() const { return user_states.size(); }

  KindProfile kind_profile() const;
  /// No transition or guard involves a controller state and there are no ASM transitions.
  bool controller_free() const;

  std::optional<StateIndex> find_controller(std::string_view name) const;
  std::optional<StateIndex> find_user(std::string_view name) const;
  const SyncGuard* guard_for(SymbolIndex label) const;

  std::size_t num_values() const;
  std::string_view value_name(SymbolIndex v) const;
  SymbolIndex value_of(StateIndex c) const;
  StateIndex assign_value(StateIndex c, SymbolIndex v) const;
};

struct Diagnostic {
  std::string invariant;
  std::string element;
  std::string message() const { return invariant + ": " + element; }
};

/// Empty iff every protocol invariant holds.
std::vector<Diagnostic> validate_protocol(const Protocol& p);

/// Parses the line-oriented protocol DSL. Throws ProtocolError.
Protocol parse_protocol(std::string_view text);
Protocol load_protocol(const std::string& path);

/// Inverse of parse_protocol for protocols with the identity variable view.
std::string serialize_protocol(const Protocol& p);

std::string describe_transition(const Protocol& p, const Transition& t);

}  // namespace zeroone
