#include "zeroone/constraint.hpp"

#include <algorithm>

#include "lexer.hpp"

namespace zeroone {

std::string_view to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::Geq: return "GEQ";
    case ConstraintClass::GeqZero: return "GEQ_ZERO";
    case ConstraintClass::Full: return "FULL";
  }
  return "?";
}

Constraint Constraint::atom(Op op, StateIndex state, std::uint32_t bound) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->state = state;
  n->bound = bound;
  return Constraint(std::move(n));
}

Constraint Constraint::ctrl_eq(StateIndex c) { return atom(Op::CtrlEq, c, 0); }
Constraint Constraint::ctrl_neq(StateIndex c) { return atom(Op::CtrlNeq, c, 0); }

Constraint Constraint::geq(StateIndex q, std::uint32_t bound) {
  if (bound == 0) throw ConstraintError("#q >= 0 is not a valid atom");
  return atom(Op::GeqCount, q, bound);
}

Constraint Constraint::zero(StateIndex q) { return atom(Op::ZeroCount, q, 0); }

Constraint Constraint::conj(Constraint lhs, Constraint rhs) {
  return Constraint(std::make_shared<Node>(Node{Op::And, 0, 0, std::make_shared<const Constraint>(std::move(lhs)),
                                                std::make_shared<const Constraint>(std::move(rhs))}));
}

Constraint Constraint::disj(Constraint lhs, Constraint rhs) {
  return Constraint(std::make_shared<Node>(Node{Op::Or, 0, 0, std::make_shared<const Constraint>(std::move(lhs)),
                                                std::make_shared<const Constraint>(std::move(rhs))}));
}

ConstraintClass Constraint::classify() const {
  switch (op()) {
    case Op::CtrlEq:
    case Op::CtrlNeq: return ConstraintClass::Full;
    case Op::GeqCount: return ConstraintClass::Geq;
    case Op::ZeroCount: return ConstraintClass::GeqZero;
    case Op::And:
    case Op::Or: return std::max(lhs().classify(), rhs().classify());
  }
  return ConstraintClass::Full;
}

std::uint32_t Constraint::max_threshold() const {
  if (op() == Op::GeqCount) return bound();
  if (is_atom()) return 0;
  return std::max(lhs().max_threshold(), rhs().max_threshold());
}

bool Constraint::operator==(const Constraint& o) const {
  if (op() != o.op()) return false;
  if (is_atom()) return state() == o.state() && bound() == o.bound();
  return lhs() == o.lhs() && rhs() == o.rhs();
}

namespace {

using detail::Token;

class ConstraintParser {
 public:
  ConstraintParser(std::string_view text, const Protocol& p) : p_(p) {
    Token bad;
    toks_ = detail::tokenize(text, 1, false, &bad);
    if (bad.type != Token::Type::End) fail("unexpected character '" + bad.text + "'", bad);
  }

  Constraint parse() {
    auto phi = disjunction();
    if (peek().type != Token::Type::End) fail("unexpected '" + peek().text + "'", peek());
    return phi;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const auto& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(const char* p) {
    if (peek().type == Token::Type::Punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ConstraintError("constraint syntax error at column " + std::to_string(at.column) + ": " + msg);
  }
  const Token& ident(const char* what) {
    const auto& t = next();
    if (t.type != Token::Type::Ident) fail(std::string("expected ") + what, t);
    return t;
  }

  Constraint disjunction() {
    auto phi = conjunction();
    while (accept("|")) phi = Constraint::disj(std::move(phi), conjunction());
    return phi;
  }

  Constraint conjunction() {
    auto phi = atom();
    while (accept("&")) phi = Constraint::conj(std::move(phi), atom());
    return phi;
  }

  Constraint atom() {
    if (accept("(")) {
      auto phi = disjunction();
      if (!accept(")")) fail("expected ')'", peek());
      return phi;
    }
    if (accept("#")) {
      const auto& id = ident("user state");
      auto q = p_.find_user(id.text);
      if (!q) throw ConstraintError("unknown user state '" + id.text + "' in constraint");
      if (accept(">=")) {
        const auto& n = ident("a natural number");
        if (!detail::is_number(n.text)) fail("expected a natural number", n);
        auto value = std::stoull(n.text);
        if (value == 0) throw ConstraintError("'#" + id.text + " >= 0' is not allowed (the bound must be >= 1)");
        if (value > UINT32_MAX) fail("bound too large", n);
        return Constraint::geq(*q, static_cast<std::uint32_t>(value));
      }
      if (accept("=")) {
        const auto& n = ident("'0'");
        if (!detail::is_number(n.text) || std::stoull(n.text) != 0) fail("only '#q = 0' is supported", n);
        return Constraint::zero(*q);
      }
      fail("expected '>=' or '='", peek());
    }
    const auto& kw = peek();
    if (kw.type == Token::Type::Ident && kw.text == "ctrl") {
      next();
      bool eq;
      if (accept("="))
        eq = true;
      else if (accept("!="))
        eq = false;
      else
        fail("expected '=' or '!='", peek());
      const auto& id = ident("controller state");
      auto c = p_.find_controller(id.text);
      if (!c) throw ConstraintError("unknown controller state '" + id.text + "' in constraint");
      return eq ? Constraint::ctrl_eq(*c) : Constraint::ctrl_neq(*c);
    }
    fail("expected an atom", kw);
  }

  const Protocol& p_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void print(const Constraint& phi, const Protocol& p, std::string& out, int parent_prec) {
  using Op = Constraint::Op;
  switch (phi.op()) {
    case Op::CtrlEq: out += "ctrl = " + p.controller_states.at(phi.state()); return;
    case Op::CtrlNeq: out += "ctrl != " + p.controller_states.at(phi.state()); return;
    case Op::GeqCount: out += "#" + p.user_states.at(phi.state()) + " >= " + std::to_string(phi.bound()); return;
    case Op::ZeroCount: out += "#" + p.user_states.at(phi.state()) + " = 0"; return;
    case Op::And:
    case Op::Or: {
      int prec = phi.op() == Op::And ? 2 : 1;
      if (prec < parent_prec) out += "(";
      print(phi.lhs(), p, out, prec);
      out += phi.op() == Op::And ? " & " : " | ";
      // Both operators are parsed left-associatively.
      print(phi.rhs(), p, out, prec + 1);
      if (prec < parent_prec) out += ")";
      return;
    }
  }
}

}  // namespace

Constraint parse_constraint(std::string_view text, const Protocol& p) { return ConstraintParser(text, p).parse(); }

std::string to_string(const Constraint& phi, const Protocol& p) {
  std::string out;
  print(phi, p, out, 0);
  return out;
}

bool eval_constraint(const Constraint& phi, const Configuration& cfg) {
  using Op = Constraint::Op;
  switch (phi.op()) {
    case Op::CtrlEq: return cfg.ctrl == phi.state();
    case Op::CtrlNeq: return cfg.ctrl != phi.state();
    case Op::GeqCount: return cfg.counts.at(phi.state()) >= phi.bound();
    case Op::ZeroCount: return cfg.counts.at(phi.state()) == 0;
    case Op::And: return eval_constraint(phi.lhs(), cfg) && eval_constraint(phi.rhs(), cfg);
    case Op::Or: return eval_constraint(phi.lhs(), cfg) || eval_constraint(phi.rhs(), cfg);
  }
  return false;
}

Constraint abstract_constraint(const Constraint& phi) {
  using Op = Constraint::Op;
  switch (phi.op()) {
    case Op::GeqCount: return phi.bound() == 1 ? phi : Constraint::geq(phi.state(), 1);
    case Op::And: return Constraint::conj(abstract_constraint(phi.lhs()), abstract_constraint(phi.rhs()));
    case Op::Or: return Constraint::disj(abstract_constraint(phi.lhs()), abstract_constraint(phi.rhs()));
    default: return phi;
  }
}

bool eval_abstract(const Constraint& phi, const AbstractConfiguration& a) {
  using Op = Constraint::Op;
  switch (phi.op()) {
    case Op::CtrlEq: return a.ctrl == phi.state();
    case Op::CtrlNeq: return a.ctrl != phi.state();
    case Op::GeqCount:
      if (phi.bound() > 1) throw ConstraintError("abstract evaluation requires thresholds of at most 1");
      return has_user(a.occupied, phi.state());
    case Op::ZeroCount: return !has_user(a.occupied, phi.state());
    case Op::And: {
      // Evaluate both sides so precondition violations are always reported.
      bool l = eval_abstract(phi.lhs(), a);
      bool r = eval_abstract(phi.rhs(), a);
      return l && r;
    }
    case Op::Or: {
      bool l = eval_abstract(phi.lhs(), a);
      bool r = eval_abstract(phi.rhs(), a);
      return l || r;
    }
  }
  return false;
}

Constraint conj_all(const std::vector<Constraint>& parts) {
  if (parts.empty()) throw ConstraintError("empty conjunction");
  Constraint out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Constraint::conj(out, parts[i]);
  return out;
}

Constraint disj_all(const std::vector<Constraint>& parts) {
  if (parts.empty()) throw ConstraintError("empty disjunction");
  Constraint out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Constraint::disj(out, parts[i]);
  return out;
}

}  // namespace zeroone
