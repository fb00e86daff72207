#include "zeroone/protocol.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace zeroone {

ProtocolError::ProtocolError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(line ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                              : what),
      line_(line),
      column_(column) {}

std::string_view to_string(Primitive p) {
  switch (p) {
    case Primitive::Internal: return "internal";
    case Primitive::Lossy: return "lossy";
    case Primitive::Disjunctive: return "disj";
    case Primitive::Sync: return "sync";
    case Primitive::GuardedSync: return "gsync";
    case Primitive::Asm: return "asm";
  }
  return "?";
}

std::string_view to_string(DeclaredKind k) {
  switch (k) {
    case DeclaredKind::Internal: return "internal";
    case DeclaredKind::Lossy: return "lossy";
    case DeclaredKind::Disj: return "disj";
    case DeclaredKind::Sync: return "sync";
    case DeclaredKind::GSync: return "gsync";
    case DeclaredKind::Asm: return "asm";
    case DeclaredKind::Mixed: return "mixed";
  }
  return "?";
}

std::optional<DeclaredKind> declared_kind_from_string(std::string_view s) {
  for (auto k : {DeclaredKind::Internal, DeclaredKind::Lossy, DeclaredKind::Disj, DeclaredKind::Sync,
                 DeclaredKind::GSync, DeclaredKind::Asm, DeclaredKind::Mixed})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

StateSet StateSet::everything(std::size_t num_ctrl, std::size_t num_user) {
  StateSet s;
  s.ctrl.assign(num_ctrl, true);
  s.users = num_user >= 64 ? ~UserMask{0} : (user_bit(static_cast<StateIndex>(num_user)) - 1);
  return s;
}

bool KindProfile::only(std::initializer_list<Primitive> allowed) const {
  std::uint8_t mask = 0;
  for (auto p : allowed) mask |= bit(p);
  return (bits_ & ~mask) == 0;
}

std::vector<Primitive> KindProfile::list() const {
  std::vector<Primitive> out;
  for (auto p : {Primitive::Internal, Primitive::Lossy, Primitive::Disjunctive, Primitive::Sync,
                 Primitive::GuardedSync, Primitive::Asm})
    if (has(p)) out.push_back(p);
  return out;
}

KindProfile Protocol::kind_profile() const {
  KindProfile k;
  for (const auto& t : transitions) {
    switch (t.kind) {
      case TransitionKind::Internal: k.add(Primitive::Internal); break;
      case TransitionKind::Broadcast:
      case TransitionKind::Receive: k.add(Primitive::Lossy); break;
      case TransitionKind::Disjunctive: k.add(Primitive::Disjunctive); break;
      case TransitionKind::Sync: k.add(guard_for(t.symbol) ? Primitive::GuardedSync : Primitive::Sync); break;
      case TransitionKind::AsmWrite:
      case TransitionKind::AsmRead: k.add(Primitive::Asm); break;
    }
  }
  return k;
}

bool Protocol::controller_free() const {
  auto uniform = [&](const StateSet& s) {
    if (s.ctrl.empty()) return true;
    return std::all_of(s.ctrl.begin(), s.ctrl.end(), [&](bool b) { return b == s.ctrl.front(); });
  };
  for (const auto& t : transitions) {
    if (t.side == Side::Controller) return false;
    if (t.kind == TransitionKind::AsmRead || t.kind == TransitionKind::AsmWrite) return false;
    if (t.kind == TransitionKind::Disjunctive &&
        std::find(t.guard.ctrl.begin(), t.guard.ctrl.end(), true) != t.guard.ctrl.end())
      return false;
  }
  for (const auto& g : guards)
    if (!uniform(g.exists) || !uniform(g.forall)) return false;
  return true;
}

std::optional<StateIndex> Protocol::find_controller(std::string_view n) const {
  for (StateIndex i = 0; i < controller_states.size(); ++i)
    if (controller_states[i] == n) return i;
  return std::nullopt;
}

std::optional<StateIndex> Protocol::find_user(std::string_view n) const {
  for (StateIndex i = 0; i < user_states.size(); ++i)
    if (user_states[i] == n) return i;
  return std::nullopt;
}

const SyncGuard* Protocol::guard_for(SymbolIndex label) const {
  for (const auto& g : guards)
    if (g.label == label) return &g;
  return nullptr;
}

std::size_t Protocol::num_values() const { return variable ? variable->values.size() : controller_states.size(); }

std::string_view Protocol::value_name(SymbolIndex v) const {
  return variable ? variable->values.at(v) : controller_states.at(v);
}

SymbolIndex Protocol::value_of(StateIndex c) const { return variable ? variable->value_of.at(c) : c; }

StateIndex Protocol::assign_value(StateIndex c, SymbolIndex v) const {
  return variable ? variable->assign.at(c).at(v) : v;
}

namespace {

std::string side_name(Side s) { return s == Side::Controller ? "controller" : "user"; }

bool set_in_range(const StateSet& s, const Protocol& p) {
  if (!s.ctrl.empty() && s.ctrl.size() != p.num_controller()) return false;
  if (p.num_user() < 64 && (s.users >> p.num_user()) != 0) return false;
  return true;
}

KindProfile allowed_for(DeclaredKind k) {
  KindProfile a;
  a.add(Primitive::Internal);
  switch (k) {
    case DeclaredKind::Internal: break;
    case DeclaredKind::Lossy: a.add(Primitive::Lossy); break;
    case DeclaredKind::Disj: a.add(Primitive::Disjunctive); break;
    case DeclaredKind::Sync: a.add(Primitive::Sync); break;
    case DeclaredKind::GSync:
      a.add(Primitive::Sync);
      a.add(Primitive::GuardedSync);
      break;
    case DeclaredKind::Asm: a.add(Primitive::Asm); break;
    case DeclaredKind::Mixed:
      for (auto p : {Primitive::Lossy, Primitive::Disjunctive, Primitive::Sync, Primitive::GuardedSync,
                     Primitive::Asm})
        a.add(p);
      break;
  }
  return a;
}

}  // namespace

std::vector<Diagnostic> validate_protocol(const Protocol& p) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string inv, std::string elem) { out.push_back({std::move(inv), std::move(elem)}); };

  if (p.controller_states.empty()) report("controller states must be non-empty", "C");
  if (p.user_states.empty()) report("user states must be non-empty", "Q");
  if (p.user_states.size() > kMaxUserStates)
    report("at most 64 user states are supported", std::to_string(p.user_states.size()) + " user states");

  std::set<std::string> seen;
  for (const auto* names : {&p.controller_states, &p.user_states}) {
    for (const auto& n : *names) {
      if (n.empty()) report("state identifiers must be non-empty", "<empty>");
      if (!seen.insert(n).second) report("state identifiers must be unique and C, Q disjoint", n);
    }
  }

  if (!p.controller_states.empty() && p.initial_controller >= p.num_controller())
    report("initial controller state must be in C", std::to_string(p.initial_controller));
  if (p.num_user() < 64 && (p.initial_users >> p.num_user()) != 0)
    report("initial user states must be a subset of Q", "Q0");
  if (p.initial_users == 0) report("initial user states must be non-empty", "Q0");

  const auto nc = p.num_controller();
  const auto nu = p.num_user();
  for (std::size_t i = 0; i < p.transitions.size(); ++i) {
    const auto& t = p.transitions[i];
    const auto elem = "transition #" + std::to_string(i);
    const auto bound = t.side == Side::Controller ? nc : nu;
    if (t.from >= bound || t.to >= bound) {
      report("transition endpoints must both be " + side_name(t.side) + " states", elem);
      continue;
    }
    switch (t.kind) {
      case TransitionKind::Broadcast:
      case TransitionKind::Receive:
        if (t.symbol >= p.messages.size()) report("message must be declared", elem);
        break;
      case TransitionKind::Sync:
        if (t.symbol >= p.labels.size()) report("sync label must be declared", elem);
        break;
      case TransitionKind::AsmWrite:
      case TransitionKind::AsmRead:
        if (t.side != Side::User) report("ASM transitions must be user transitions", elem);
        if (t.symbol >= p.num_values()) report("ASM value must be a controller state", elem);
        break;
      case TransitionKind::Disjunctive:
        if (!set_in_range(t.guard, p)) report("guard must be a subset of C and Q", elem);
        break;
      case TransitionKind::Internal: break;
    }
  }

  std::set<SymbolIndex> guarded;
  for (const auto& g : p.guards) {
    const auto elem = g.label < p.labels.size() ? "@" + p.labels[g.label] : "label #" + std::to_string(g.label);
    if (g.label >= p.labels.size()) report("guarded label must be declared", elem);
    if (!guarded.insert(g.label).second) report("at most one guard pair per sync label", elem);
    if (!set_in_range(g.exists, p) || !set_in_range(g.forall, p))
      report("guard must be a subset of C and Q", elem);
  }

  if (p.variable) {
    const auto& v = *p.variable;
    bool ok = v.value_of.size() == nc && v.assign.size() == nc;
    for (std::size_t c = 0; ok && c < nc; ++c) {
      ok = v.value_of[c] < v.values.size() && v.assign[c].size() == v.values.size();
      for (auto target : v.assign[c]) ok = ok && target < nc;
    }
    if (!ok) report("variable view must be total", "variable");
  }

  const auto allowed = allowed_for(p.declared_kind);
  for (auto prim : p.kind_profile().list())
    if (!allowed.has(prim))
      report("transition kinds must match the declared kind", std::string(to_string(prim)) + " in " +
                                                                    std::string(to_string(p.declared_kind)));
  return out;
}

namespace {

std::string set_list(const Protocol& p, const StateSet& s) {
  std::string out;
  auto add = [&](const std::string& n) { out += (out.empty() ? "" : ",") + n; };
  for (StateIndex c = 0; c < p.num_controller(); ++c)
    if (s.contains_ctrl(c)) add(p.controller_states[c]);
  for (StateIndex q = 0; q < p.num_user(); ++q)
    if (s.contains_user(q)) add(p.user_states[q]);
  return out;
}

}  // namespace

std::string describe_transition(const Protocol& p, const Transition& t) {
  const auto& names = t.side == Side::Controller ? p.controller_states : p.user_states;
  std::string mid;
  switch (t.kind) {
    case TransitionKind::Internal: mid = "->"; break;
    case TransitionKind::Broadcast: mid = "!" + p.messages.at(t.symbol); break;
    case TransitionKind::Receive: mid = "?" + p.messages.at(t.symbol); break;
    case TransitionKind::Disjunctive: mid = "[" + set_list(p, t.guard) + "]"; break;
    case TransitionKind::Sync: mid = "@" + p.labels.at(t.symbol); break;
    case TransitionKind::AsmWrite: mid = "w(" + std::string(p.value_name(t.symbol)) + ")"; break;
    case TransitionKind::AsmRead: mid = "r(" + std::string(p.value_name(t.symbol)) + ")"; break;
  }
  return names.at(t.from) + " " + mid + " " + names.at(t.to);
}

std::string serialize_protocol(const Protocol& p) {
  if (p.variable) throw ProtocolError("protocols with a non-identity variable view have no DSL form");
  std::ostringstream os;
  os << "protocol " << p.name << " kind " << to_string(p.declared_kind) << "\n";
  for (StateIndex c = 0; c < p.num_controller(); ++c)
    os << "ctrl " << p.controller_states[c] << (c == p.initial_controller ? " init" : "") << "\n";
  for (StateIndex q = 0; q < p.num_user(); ++q)
    os << "user " << p.user_states[q] << (has_user(p.initial_users, q) ? " init" : "") << "\n";
  for (const auto& t : p.transitions) os << "t " << describe_transition(p, t) << "\n";
  for (const auto& g : p.guards)
    os << "guard @" << p.labels.at(g.label) << " exists {" << set_list(p, g.exists) << "} forall {"
       << set_list(p, g.forall) << "}\n";
  return os.str();
}

Protocol load_protocol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProtocolError("cannot open protocol file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_protocol(ss.str());
}

}  // namespace zeroone
