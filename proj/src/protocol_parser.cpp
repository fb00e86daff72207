// Parser for the line-oriented protocol DSL.
//
//   protocol <name> kind <internal|lossy|disj|sync|gsync|asm|mixed>
//   ctrl <id> [init]
//   user <id> [init]
//   t <p> -> <q>           internal
//   t <p> !<m> <q>         broadcast      t <p> ?<m> <q>   receive
//   t <p> [<id>,...] <q>   disjunctive guard
//   t <p> @<a> <q>         synchronization
//   t <p> w(<a>) <q>       ASM write      t <p> r(<a>) <q> ASM read
//   guard @<a> [exists {<id>,...}] [forall {<id>,...}]

#include <algorithm>

#include "lexer.hpp"
#include "zeroone/protocol.hpp"

namespace zeroone {

namespace {

using detail::Token;

struct Line {
  std::vector<Token> tokens;
  std::size_t number;
};

class LineCursor {
 public:
  explicit LineCursor(const Line& l) : line_(l) {}

  const Token& peek(std::size_t ahead = 0) const {
    auto i = std::min(pos_ + ahead, line_.tokens.size() - 1);
    return line_.tokens[i];
  }
  const Token& next() {
    const auto& t = peek();
    if (pos_ < line_.tokens.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().type == Token::Type::End; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ProtocolError("syntax error: " + msg, at.line, at.column);
  }
  const Token& ident(const char* what) {
    const auto& t = next();
    if (t.type != Token::Type::Ident) fail(std::string("expected ") + what, t);
    return t;
  }
  void punct(const char* p) {
    const auto& t = next();
    if (t.type != Token::Type::Punct || t.text != p) fail(std::string("expected '") + p + "'", t);
  }
  bool accept(const char* p) {
    if (peek().type == Token::Type::Punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'", peek());
  }

 private:
  const Line& line_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Protocol run(std::string_view text) {
    auto raw = detail::split_lines(text);
    std::vector<Line> lines;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      Token bad;
      auto toks = detail::tokenize(raw[i], i + 1, true, &bad);
      if (bad.type != Token::Type::End)
        throw ProtocolError("syntax error: unexpected character '" + bad.text + "'", bad.line, bad.column);
      if (toks.size() > 1) lines.push_back({std::move(toks), i + 1});
    }

    // Pass 1: header and state declarations.
    bool have_header = false;
    bool have_init_ctrl = false;
    for (const auto& l : lines) {
      LineCursor cur(l);
      const auto& kw = cur.ident("a keyword");
      if (kw.text == "protocol") {
        if (have_header) cur.fail("duplicate protocol header", kw);
        have_header = true;
        p_.name = cur.ident("protocol name").text;
        const auto& k = cur.ident("'kind'");
        if (k.text != "kind") cur.fail("expected 'kind'", k);
        const auto& kind = cur.ident("protocol kind");
        auto dk = declared_kind_from_string(kind.text);
        if (!dk) cur.fail("unknown protocol kind '" + kind.text + "'", kind);
        p_.declared_kind = *dk;
        cur.expect_end();
      } else if (kw.text == "ctrl" || kw.text == "user") {
        const auto& id = cur.ident("state identifier");
        if (p_.find_controller(id.text) || p_.find_user(id.text))
          throw ProtocolError("duplicate state identifier '" + id.text + "'", id.line, id.column);
        bool init = false;
        if (!cur.at_end()) {
          const auto& flag = cur.ident("'init'");
          if (flag.text != "init") cur.fail("expected 'init'", flag);
          init = true;
        }
        cur.expect_end();
        if (kw.text == "ctrl") {
          if (init) {
            if (have_init_ctrl) throw ProtocolError("more than one initial controller state", id.line, id.column);
            have_init_ctrl = true;
            p_.initial_controller = static_cast<StateIndex>(p_.controller_states.size());
          }
          p_.controller_states.push_back(id.text);
        } else {
          if (p_.user_states.size() == kMaxUserStates)
            throw ProtocolError("at most 64 user states are supported", id.line, id.column);
          if (init) p_.initial_users |= user_bit(static_cast<StateIndex>(p_.user_states.size()));
          p_.user_states.push_back(id.text);
        }
      } else if (kw.text != "t" && kw.text != "guard") {
        cur.fail("unknown keyword '" + kw.text + "'", kw);
      }
    }
    if (!have_header) throw ProtocolError("missing 'protocol <name> kind <kind>' header");
    if (p_.controller_states.empty()) throw ProtocolError("no controller states declared");
    if (p_.user_states.empty()) throw ProtocolError("no user states declared");
    if (!have_init_ctrl) throw ProtocolError("missing initial controller state");
    if (p_.initial_users == 0) throw ProtocolError("missing initial user states");

    // Pass 2: transitions. Pass 3: guards.
    for (const auto& l : lines)
      if (l.tokens.front().text == "t") transition(l);
    for (const auto& l : lines)
      if (l.tokens.front().text == "guard") guard(l);

    auto diags = validate_protocol(p_);
    if (!diags.empty()) throw ProtocolError("invalid protocol: " + diags.front().message());
    return std::move(p_);
  }

 private:
  struct Endpoint {
    Side side;
    StateIndex index;
  };

  Endpoint state(const Token& t) const {
    if (auto c = p_.find_controller(t.text)) return {Side::Controller, *c};
    if (auto q = p_.find_user(t.text)) return {Side::User, *q};
    throw ProtocolError("unknown state '" + t.text + "'", t.line, t.column);
  }

  static SymbolIndex intern(std::vector<std::string>& table, const std::string& s) {
    auto it = std::find(table.begin(), table.end(), s);
    if (it != table.end()) return static_cast<SymbolIndex>(it - table.begin());
    table.push_back(s);
    return static_cast<SymbolIndex>(table.size() - 1);
  }

  StateSet state_list(LineCursor& cur, const char* close) {
    StateSet s;
    s.ctrl.assign(p_.num_controller(), false);
    if (cur.accept(close)) return s;
    while (true) {
      const auto& id = cur.ident("state identifier");
      auto e = state(id);
      if (e.side == Side::Controller)
        s.ctrl[e.index] = true;
      else
        s.users |= user_bit(e.index);
      if (cur.accept(close)) return s;
      cur.punct(",");
    }
  }

  void transition(const Line& l) {
    LineCursor cur(l);
    cur.next();
    const auto& from_tok = cur.ident("source state");
    Transition t;
    const auto& op = cur.peek();
    if (cur.accept("->")) {
      t.kind = TransitionKind::Internal;
    } else if (cur.accept("!") || cur.accept("?")) {
      t.kind = op.text == "!" ? TransitionKind::Broadcast : TransitionKind::Receive;
      t.symbol = intern(p_.messages, cur.ident("message").text);
    } else if (cur.accept("[")) {
      t.kind = TransitionKind::Disjunctive;
      t.guard = state_list(cur, "]");
    } else if (cur.accept("@")) {
      t.kind = TransitionKind::Sync;
      t.symbol = intern(p_.labels, cur.ident("label").text);
    } else if (op.type == Token::Type::Ident && (op.text == "w" || op.text == "r") &&
               cur.peek(1).type == Token::Type::Punct && cur.peek(1).text == "(") {
      cur.next();
      cur.next();
      t.kind = op.text == "w" ? TransitionKind::AsmWrite : TransitionKind::AsmRead;
      const auto& v = cur.ident("variable value");
      auto c = p_.find_controller(v.text);
      if (!c) throw ProtocolError("ASM value '" + v.text + "' is not a controller state", v.line, v.column);
      t.symbol = *c;
      cur.punct(")");
    } else {
      cur.fail("expected a transition operator", op);
    }
    const auto& to_tok = cur.ident("target state");
    cur.expect_end();

    auto from = state(from_tok);
    auto to = state(to_tok);
    if (from.side != to.side)
      throw ProtocolError("transition '" + from_tok.text + "' -> '" + to_tok.text +
                              "' mixes a controller state and a user state",
                          from_tok.line, from_tok.column);
    if ((t.kind == TransitionKind::AsmWrite || t.kind == TransitionKind::AsmRead) && from.side != Side::User)
      throw ProtocolError("ASM transitions must connect user states", from_tok.line, from_tok.column);
    t.side = from.side;
    t.from = from.index;
    t.to = to.index;
    if (t.kind == TransitionKind::Disjunctive && t.guard.ctrl.empty()) t.guard.ctrl.assign(p_.num_controller(), false);
    if (std::find(p_.transitions.begin(), p_.transitions.end(), t) == p_.transitions.end())
      p_.transitions.push_back(std::move(t));
  }

  void guard(const Line& l) {
    LineCursor cur(l);
    cur.next();
    cur.punct("@");
    const auto& label_tok = cur.ident("label");
    SyncGuard g;
    g.label = intern(p_.labels, label_tok.text);
    if (p_.guard_for(g.label))
      throw ProtocolError("duplicate guard for sync label '" + label_tok.text + "'", label_tok.line,
                          label_tok.column);
    g.exists = StateSet::everything(p_.num_controller(), p_.num_user());
    g.forall = g.exists;
    bool seen_exists = false, seen_forall = false;
    while (!cur.at_end()) {
      const auto& kw = cur.ident("'exists' or 'forall'");
      if (kw.text == "exists" && !seen_exists) {
        seen_exists = true;
        cur.punct("{");
        g.exists = state_list(cur, "}");
      } else if (kw.text == "forall" && !seen_forall) {
        seen_forall = true;
        cur.punct("{");
        g.forall = state_list(cur, "}");
      } else {
        cur.fail("expected 'exists' or 'forall'", kw);
      }
    }
    p_.guards.push_back(std::move(g));
  }

  Protocol p_;
};

}  // namespace

Protocol parse_protocol(std::string_view text) { return Parser{}.run(text); }

}  // namespace zeroone
