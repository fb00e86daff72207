#include "zeroone/traces.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lexer.hpp"
#include "zeroone/semantics.hpp"

namespace zeroone {

// ---------------------------------------------------------------------------
// Spec automata

SpecAutomaton parse_spec(std::string_view text, const std::vector<std::string>& alphabet, SpecMode mode) {
  using detail::Token;
  SpecAutomaton a;
  a.mode = mode;
  a.alphabet = alphabet;
  std::map<std::string, std::uint32_t> state_index;
  struct Edge {
    std::string letter, src, dst;
    std::size_t line;
  };
  std::vector<Edge> edges;
  bool have_init = false;
  auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    Token bad;
    auto toks = detail::tokenize(lines[n], n + 1, true, &bad);
    auto fail = [&](const std::string& msg) {
      throw SpecError("spec line " + std::to_string(n + 1) + ": " + msg);
    };
    if (bad.type != Token::Type::End) fail("unexpected character '" + bad.text + "'");
    if (toks.size() == 1) continue;
    const auto& kw = toks[0].text;
    if (kw == "alphabet") {
      std::set<std::string> declared, expected(alphabet.begin(), alphabet.end());
      for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
        if (toks[i].type != Token::Type::Ident) fail("expected a letter");
        declared.insert(toks[i].text);
      }
      if (declared != expected) fail("alphabet does not match the controller states");
    } else if (kw == "state") {
      if (toks.size() < 3 || toks[1].type != Token::Type::Ident) fail("expected 'state <id> [init] [accept]'");
      const auto& id = toks[1].text;
      if (state_index.count(id)) fail("duplicate state '" + id + "'");
      auto idx = static_cast<std::uint32_t>(a.states.size());
      state_index[id] = idx;
      a.states.push_back(id);
      a.accepting.push_back(false);
      for (std::size_t i = 2; i + 1 < toks.size(); ++i) {
        if (toks[i].text == "init") {
          if (have_init) fail("more than one initial state");
          have_init = true;
          a.initial = idx;
        } else if (toks[i].text == "accept") {
          a.accepting[idx] = true;
        } else {
          fail("unknown flag '" + toks[i].text + "'");
        }
      }
    } else if (kw == "on") {
      if (toks.size() != 6 || toks[3].text != "->") fail("expected 'on <letter> <src> -> <dst>'");
      edges.push_back({toks[1].text, toks[2].text, toks[4].text, n + 1});
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  if (a.states.empty()) throw SpecError("spec declares no states");
  if (!have_init) throw SpecError("spec has no initial state");
  a.delta.assign(a.states.size(), std::vector<std::optional<std::uint32_t>>(alphabet.size()));
  for (const auto& e : edges) {
    auto where = "spec line " + std::to_string(e.line) + ": ";
    auto l = std::find(alphabet.begin(), alphabet.end(), e.letter);
    if (l == alphabet.end()) throw SpecError(where + "letter '" + e.letter + "' is not a controller state");
    if (!state_index.count(e.src) || !state_index.count(e.dst)) throw SpecError(where + "unknown state");
    auto& slot = a.delta[state_index[e.src]][static_cast<std::size_t>(l - alphabet.begin())];
    if (slot) throw SpecError(where + "nondeterministic transition");
    slot = state_index[e.dst];
  }
  validate_spec(a);
  return a;
}

SpecAutomaton load_spec(const std::string& path, const std::vector<std::string>& alphabet, SpecMode mode) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), alphabet, mode);
}

void validate_spec(const SpecAutomaton& a) {
  if (a.initial >= a.states.size()) throw SpecError("initial state out of range");
  for (std::uint32_t s = 0; s < a.states.size(); ++s)
    for (std::uint32_t l = 0; l < a.alphabet.size(); ++l) {
      auto t = a.delta[s][l];
      if (a.mode != SpecMode::Safety) continue;
      if (!t)
        throw SpecError("safety spec is not total: no transition from '" + a.states[s] + "' on '" + a.alphabet[l] +
                        "'");
      if (!a.accepting[s] && a.accepting[*t])
        throw SpecError("safety spec is not prefix closed: '" + a.states[s] + "' -> '" + a.states[*t] + "'");
    }
}

std::optional<std::uint32_t> run_word(const SpecAutomaton& a, const std::vector<std::uint32_t>& word) {
  std::optional<std::uint32_t> s = a.initial;
  for (auto l : word) {
    s = a.step(*s, l);
    if (!s) return std::nullopt;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Traces

Trace trace_of(const std::vector<AbstractConfiguration>& run) {
  Trace t;
  for (const auto& a : run)
    if (t.empty() || t.back() != a.ctrl) t.push_back(a.ctrl);
  return t;
}

Trace trace_of(const std::vector<Configuration>& run) {
  Trace t;
  for (const auto& c : run)
    if (t.empty() || t.back() != c.ctrl) t.push_back(c.ctrl);
  return t;
}

std::string trace_to_string(const Protocol& p, const Trace& t) {
  std::string out;
  for (auto c : t) out += (out.empty() ? "" : " ") + p.controller_states.at(c);
  return out;
}

namespace {

struct ProductNode {
  AbstractConfiguration a;
  std::uint32_t s = 0;
  bool flag = false;  // entered by consuming a letter into an accepting state
  bool operator==(const ProductNode&) const = default;
};

struct ProductNodeHash {
  std::size_t operator()(const ProductNode& n) const noexcept {
    return AbstractConfigurationHash{}(n.a) * 31 + n.s * 2 + (n.flag ? 1 : 0);
  }
};

}  // namespace

TraceCheckResult check_safety(const Protocol& p, const SpecAutomaton& spec, const Budget& budget) {
  if (spec.mode != SpecMode::Safety) throw SpecError("check_safety needs a safety automaton");
  if (spec.alphabet != p.controller_states) throw SpecError("spec alphabet must be the controller states");
  BudgetClock clock(budget);
  Semantics sem(p);
  std::unordered_map<ProductNode, std::optional<ProductNode>, ProductNodeHash> parent;
  std::vector<ProductNode> frontier;
  std::optional<ProductNode> bad;
  for (const auto& a0 : initial_abstract(p)) {
    ProductNode n{a0, *spec.step(spec.initial, a0.ctrl), false};
    if (parent.emplace(n, std::nullopt).second) frontier.push_back(n);
    if (!spec.accepting[n.s] && !bad) bad = n;
  }
  while (!bad && !frontier.empty()) {
    std::vector<ProductNode> next;
    for (const auto& n : frontier) {
      for (const auto& b : sem.abstract_successors(n.a)) {
        ProductNode m{b, b.ctrl != n.a.ctrl ? *spec.step(n.s, b.ctrl) : n.s, false};
        if (!parent.emplace(m, n).second) continue;
        next.push_back(m);
        if (!spec.accepting[m.s]) {
          bad = m;
          break;
        }
      }
      if (bad) break;
      clock.check(parent.size());
    }
    frontier = std::move(next);
  }
  TraceCheckResult r;
  r.product_states = parent.size();
  if (!bad) return r;
  r.holds = false;
  for (std::optional<ProductNode> cur = bad; cur; cur = parent.at(*cur)) r.run.push_back(cur->a);
  std::reverse(r.run.begin(), r.run.end());
  r.counterexample = trace_of(r.run);
  return r;
}

std::set<Trace> abstract_traces(const Protocol& p, std::size_t max_len, const Budget& budget) {
  Semantics sem(p);
  BudgetClock clock(budget);
  std::set<Trace> traces;
  if (max_len == 0) return traces;
  std::set<std::pair<AbstractConfiguration, Trace>> seen;
  std::vector<std::pair<AbstractConfiguration, Trace>> frontier;
  for (const auto& a : initial_abstract(p))
    if (seen.emplace(a, Trace{a.ctrl}).second) frontier.emplace_back(a, Trace{a.ctrl});
  while (!frontier.empty()) {
    std::vector<std::pair<AbstractConfiguration, Trace>> next;
    for (const auto& [a, t] : frontier) {
      traces.insert(t);
      if (t.size() == max_len) continue;
      for (const auto& b : sem.abstract_successors(a)) {
        Trace u = t;
        if (b.ctrl != t.back()) u.push_back(b.ctrl);
        if (seen.emplace(b, u).second) next.emplace_back(b, std::move(u));
      }
    }
    clock.check(seen.size());
    frontier = std::move(next);
  }
  return traces;
}

// ---------------------------------------------------------------------------
// Controller product

namespace {

class ProductBuilder {
 public:
  ProductBuilder(const Protocol& p, std::size_t k) : p_(p), k_(k), nc_(p.num_controller()), nq_(p.num_user()) {
    total_ = nc_;
    for (std::size_t i = 0; i < k_; ++i) total_ *= nq_;
  }

  std::size_t total() const { return total_; }

  StateIndex encode(StateIndex c, const std::vector<StateIndex>& tr) const {
    std::size_t x = 0;
    for (std::size_t i = k_; i-- > 0;) x = x * nq_ + tr[i];
    return static_cast<StateIndex>(x * nc_ + c);
  }

  std::pair<StateIndex, std::vector<StateIndex>> decode(StateIndex x) const {
    std::vector<StateIndex> tr(k_);
    StateIndex c = x % nc_;
    std::size_t rest = x / nc_;
    for (std::size_t i = 0; i < k_; ++i) {
      tr[i] = static_cast<StateIndex>(rest % nq_);
      rest /= nq_;
    }
    return {c, tr};
  }

  std::string name(StateIndex x) const {
    auto [c, tr] = decode(x);
    std::string n = p_.controller_states[c];
    for (auto q : tr) n += "." + p_.user_states[q];
    return n;
  }

  Protocol build(const std::vector<StateIndex>& tracked_initial) {
    Protocol out;
    out.name = p_.name + "_x" + std::to_string(k_);
    out.declared_kind = p_.declared_kind;
    for (StateIndex x = 0; x < total_; ++x) out.controller_states.push_back(name(x));
    out.user_states = p_.user_states;
    out.initial_controller = encode(p_.initial_controller, tracked_initial);
    out.initial_users = p_.initial_users;
    out.messages = p_.messages;
    out.labels = p_.labels;
    out_ = &out;

    auto profile = p_.kind_profile();
    if (profile.has(Primitive::Asm)) {
      VariableView view;
      for (SymbolIndex v = 0; v < p_.num_values(); ++v) view.values.emplace_back(p_.value_name(v));
      view.assign.assign(total_, std::vector<StateIndex>(p_.num_values()));
      for (StateIndex x = 0; x < total_; ++x) {
        auto [c, tr] = decode(x);
        view.value_of.push_back(p_.value_of(c));
        for (SymbolIndex v = 0; v < p_.num_values(); ++v) view.assign[x][v] = encode(p_.assign_value(c, v), tr);
      }
      out.variable = std::move(view);
    }

    for (const auto& t : p_.transitions) {
      if (t.side == Side::User) add_untracked(t);
    }
    for (StateIndex x = 0; x < total_; ++x) {
      auto [c, tr] = decode(x);
      composite_singles(x, c, tr);
      composite_lossy(x, c, tr);
      composite_sync(x, c, tr);
    }
    for (const auto& g : p_.guards) {
      SyncGuard h{g.label, lift(g.exists, false), lift(g.forall, true)};
      out.guards.push_back(std::move(h));
    }
    return out;
  }

 private:
  // Composite state x is in the lifted set if its controller or (forall: and
  // every) tracked user is in `g`.
  StateSet lift(const StateSet& g, bool forall) const {
    StateSet s;
    s.users = g.users;
    s.ctrl.assign(total_, false);
    for (StateIndex x = 0; x < total_; ++x) {
      auto [c, tr] = decode(x);
      bool in = g.contains_ctrl(c);
      if (forall) {
        for (auto q : tr) in = in && g.contains_user(q);
      } else {
        for (auto q : tr) in = in || g.contains_user(q);
      }
      s.ctrl[x] = in;
    }
    return s;
  }

  StateSet no_ctrl(UserMask users) const {
    StateSet s;
    s.users = users;
    s.ctrl.assign(total_, false);
    return s;
  }

  void add(Transition t) {
    if (t.kind == TransitionKind::Disjunctive && t.guard.ctrl.empty()) t.guard.ctrl.assign(total_, false);
    if (seen_.insert(key(t)).second) out_->transitions.push_back(std::move(t));
  }

  static std::string key(const Transition& t) {
    std::string k = std::to_string(static_cast<int>(t.kind)) + "," + std::to_string(static_cast<int>(t.side)) + "," +
                    std::to_string(t.from) + "," + std::to_string(t.to) + "," + std::to_string(t.symbol) + "," +
                    std::to_string(t.guard.users) + ",";
    for (bool b : t.guard.ctrl) k += b ? '1' : '0';
    return k;
  }

  void add_untracked(const Transition& t) {
    Transition u = t;
    if (t.kind == TransitionKind::Disjunctive) u.guard = lift(t.guard, false);
    add(std::move(u));
  }

  void ctrl_move(TransitionKind kind, StateIndex from, StateIndex to, SymbolIndex sym = 0,
                 UserMask guard_users = 0) {
    Transition t;
    t.kind = kind;
    t.side = Side::Controller;
    t.from = from;
    t.to = to;
    t.symbol = sym;
    if (kind == TransitionKind::Disjunctive) t.guard = no_ctrl(guard_users);
    add(std::move(t));
  }

  void composite_singles(StateIndex x, StateIndex c, const std::vector<StateIndex>& tr) {
    for (const auto& t : p_.transitions) {
      if (t.side == Side::Controller) {
        if (t.from != c) continue;
        StateIndex y = encode(t.to, tr);
        if (t.kind == TransitionKind::Internal) ctrl_move(TransitionKind::Internal, x, y);
        if (t.kind == TransitionKind::Disjunctive) {
          bool tracked_guard = std::any_of(tr.begin(), tr.end(), [&](StateIndex q) { return t.guard.contains_user(q); });
          if (tracked_guard)
            ctrl_move(TransitionKind::Internal, x, y);
          else
            ctrl_move(TransitionKind::Disjunctive, x, y, 0, t.guard.users);
        }
        continue;
      }
      bool single = t.kind == TransitionKind::Internal || t.kind == TransitionKind::Disjunctive ||
                    t.kind == TransitionKind::AsmWrite || t.kind == TransitionKind::AsmRead;
      if (!single) continue;
      if (t.kind == TransitionKind::AsmRead && p_.value_of(c) != t.symbol) continue;
      // Every non-empty set of tracked users in t.from may take t together.
      std::vector<std::size_t> here;
      for (std::size_t i = 0; i < k_; ++i)
        if (tr[i] == t.from) here.push_back(i);
      for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << here.size()); ++sub) {
        auto moved = tr;
        std::vector<bool> mover(k_, false);
        for (std::size_t b = 0; b < here.size(); ++b)
          if ((sub >> b) & 1U) {
            moved[here[b]] = t.to;
            mover[here[b]] = true;
          }
        StateIndex c2 = t.kind == TransitionKind::AsmWrite ? p_.assign_value(c, t.symbol) : c;
        StateIndex y = encode(c2, moved);
        if (t.kind != TransitionKind::Disjunctive) {
          ctrl_move(TransitionKind::Internal, x, y);
          continue;
        }
        bool inside = t.guard.contains_ctrl(c);
        for (std::size_t i = 0; i < k_; ++i)
          if (!mover[i] && t.guard.contains_user(tr[i])) inside = true;
        if (inside)
          ctrl_move(TransitionKind::Internal, x, y);
        else
          ctrl_move(TransitionKind::Disjunctive, x, y, 0, t.guard.users);
      }
    }
  }

  // Options per component: the controller at index 0, tracked users after it.
  using Options = std::vector<std::vector<StateIndex>>;

  void product_of(const Options& opts, std::size_t i, std::vector<StateIndex>& pick,
                  const std::function<void(const std::vector<StateIndex>&)>& fn) const {
    if (i == opts.size()) {
      fn(pick);
      return;
    }
    for (auto o : opts[i]) {
      pick[i] = o;
      product_of(opts, i + 1, pick, fn);
    }
  }

  void for_each_choice(const Options& opts, const std::function<void(StateIndex)>& fn) const {
    std::vector<StateIndex> pick(opts.size());
    product_of(opts, 0, pick, [&](const std::vector<StateIndex>& v) {
      std::vector<StateIndex> tr(v.begin() + 1, v.end());
      fn(encode(v[0], tr));
    });
  }

  std::vector<StateIndex> receive_options(Side side, StateIndex s, SymbolIndex m) const {
    std::vector<StateIndex> out{s};
    for (const auto& t : p_.transitions)
      if (t.kind == TransitionKind::Receive && t.side == side && t.from == s && t.symbol == m &&
          std::find(out.begin(), out.end(), t.to) == out.end())
        out.push_back(t.to);
    return out;
  }

  void composite_lossy(StateIndex x, StateIndex c, const std::vector<StateIndex>& tr) {
    for (SymbolIndex m = 0; m < p_.messages.size(); ++m) {
      Options recv{receive_options(Side::Controller, c, m)};
      for (auto q : tr) recv.push_back(receive_options(Side::User, q, m));
      for_each_choice(recv, [&](StateIndex y) {
        if (y != x) ctrl_move(TransitionKind::Receive, x, y, m);
      });
      for (const auto& b : p_.transitions) {
        if (b.kind != TransitionKind::Broadcast || b.symbol != m) continue;
        if (b.side == Side::Controller) {
          if (b.from != c) continue;
          Options o = recv;
          o[0] = {b.to};
          for_each_choice(o, [&](StateIndex y) { ctrl_move(TransitionKind::Broadcast, x, y, m); });
          continue;
        }
        // A non-empty set of tracked users in b.from sends; the rest may receive.
        std::vector<std::size_t> here;
        for (std::size_t i = 0; i < k_; ++i)
          if (tr[i] == b.from) here.push_back(i);
        for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << here.size()); ++sub) {
          Options o = recv;
          for (std::size_t j = 0; j < here.size(); ++j)
            if ((sub >> j) & 1U) o[1 + here[j]] = {b.to};
          for_each_choice(o, [&](StateIndex y) { ctrl_move(TransitionKind::Broadcast, x, y, m); });
        }
      }
    }
  }

  void composite_sync(StateIndex x, StateIndex c, const std::vector<StateIndex>& tr) {
    for (SymbolIndex a = 0; a < p_.labels.size(); ++a) {
      auto targets = [&](Side side, StateIndex s) {
        std::vector<StateIndex> out;
        for (const auto& t : p_.transitions)
          if (t.kind == TransitionKind::Sync && t.side == side && t.from == s && t.symbol == a &&
              std::find(out.begin(), out.end(), t.to) == out.end())
            out.push_back(t.to);
        return out;
      };
      Options o;
      bool participates = false;
      auto add_component = [&](std::vector<StateIndex> ts, StateIndex self) {
        if (ts.empty()) {
          o.push_back({self});
        } else {
          participates = true;
          o.push_back(std::move(ts));
        }
      };
      add_component(targets(Side::Controller, c), c);
      for (auto q : tr) add_component(targets(Side::User, q), q);
      if (!participates) continue;
      for_each_choice(o, [&](StateIndex y) { ctrl_move(TransitionKind::Sync, x, y, a); });
    }
  }

  const Protocol& p_;
  std::size_t k_, nc_, nq_, total_ = 0;
  Protocol* out_ = nullptr;
  std::unordered_set<std::string> seen_;
};

}  // namespace

Protocol controller_product(const Protocol& p, std::size_t k, const std::vector<StateIndex>& tracked_initial,
                            std::size_t max_states) {
  if (tracked_initial.size() != k) throw std::invalid_argument("controller_product: need one initial state per user");
  for (auto q : tracked_initial)
    if (!has_user(p.initial_users, q)) throw std::invalid_argument("controller_product: tracked user not in Q0");
  double size = static_cast<double>(p.num_controller());
  for (std::size_t i = 0; i < k; ++i) size *= static_cast<double>(p.num_user());
  if (size > static_cast<double>(max_states))
    throw BudgetExceeded("controller product would have " + std::to_string(static_cast<std::uint64_t>(size)) +
                         " controller states");
  ProductBuilder b(p, k);
  auto out = b.build(tracked_initial);
  auto diags = validate_protocol(out);
  if (!diags.empty()) throw ProtocolError("controller product is invalid: " + diags.front().message());
  return out;
}

Protocol controller_product(const Protocol& p, std::size_t k) {
  StateIndex first = 0;
  while (!has_user(p.initial_users, first)) ++first;
  return controller_product(p, k, std::vector<StateIndex>(k, first));
}

std::vector<std::string> product_alphabet(const Protocol& p, std::size_t k) {
  ProductBuilder b(p, k);
  std::vector<std::string> out;
  for (StateIndex x = 0; x < b.total(); ++x) out.push_back(b.name(x));
  return out;
}

TraceCheckResult check_safety_tracked(const Protocol& p, std::size_t k, const SpecAutomaton& spec,
                                      const Budget& budget) {
  std::vector<StateIndex> q0;
  for (StateIndex q = 0; q < p.num_user(); ++q)
    if (has_user(p.initial_users, q)) q0.push_back(q);
  std::vector<std::size_t> odo(k, 0);
  TraceCheckResult last;
  while (true) {
    std::vector<StateIndex> init(k);
    for (std::size_t i = 0; i < k; ++i) init[i] = q0[odo[i]];
    auto prod = controller_product(p, k, init);
    auto r = check_safety(prod, spec, budget);
    if (!r.holds) return r;
    last.product_states += r.product_states;
    std::size_t i = 0;
    while (i < k && ++odo[i] == q0.size()) odo[i++] = 0;
    if (i == k) break;
  }
  return last;
}

// ---------------------------------------------------------------------------
// ω-traces

bool omega_eligible(const Protocol& p) {
  return p.kind_profile().only({Primitive::Internal, Primitive::Disjunctive});
}

std::vector<AbstractConfiguration> monotone_successors(const Protocol& p, const AbstractConfiguration& a) {
  if (!omega_eligible(p)) throw SpecError("monotone successors are defined for disjunctive protocols only");
  std::vector<AbstractConfiguration> out;
  for (const auto& b : abstract_successors(p, a))
    if ((b.occupied & a.occupied) == a.occupied) out.push_back(b);
  return out;
}

TraceCheckResult check_omega(const Protocol& p, const SpecAutomaton& negation, const Budget& budget) {
  if (!omega_eligible(p))
    throw SpecError("ω-trace checking is only sound for protocols built from disjunctive guards");
  if (negation.mode != SpecMode::Buchi) throw SpecError("check_omega needs a Büchi automaton");
  if (negation.alphabet != p.controller_states) throw SpecError("spec alphabet must be the controller states");
  BudgetClock clock(budget);
  Semantics sem(p);

  std::unordered_map<AbstractConfiguration, std::vector<AbstractConfiguration>, AbstractConfigurationHash> cache;
  auto succ = [&](const ProductNode& n) {
    auto it = cache.find(n.a);
    if (it == cache.end()) {
      std::vector<AbstractConfiguration> out;
      for (const auto& b : sem.abstract_successors(n.a))
        if ((b.occupied & n.a.occupied) == n.a.occupied) out.push_back(b);
      it = cache.emplace(n.a, std::move(out)).first;
    }
    std::vector<ProductNode> out;
    for (const auto& b : it->second) {
      if (b.ctrl == n.a.ctrl) {
        out.push_back({b, n.s, false});
      } else if (auto s = negation.step(n.s, b.ctrl)) {
        out.push_back({b, *s, negation.accepting[*s]});
      }
    }
    return out;
  };

  std::unordered_set<ProductNode, ProductNodeHash> outer_seen, inner_seen;
  std::vector<ProductNode> stem, loop;
  ProductNode seed;

  std::function<bool(const ProductNode&)> inner = [&](const ProductNode& n) {
    inner_seen.insert(n);
    loop.push_back(n);
    for (const auto& m : succ(n)) {
      if (m == seed) return true;
      if (!inner_seen.count(m) && inner(m)) return true;
    }
    loop.pop_back();
    return false;
  };
  std::function<bool(const ProductNode&)> outer = [&](const ProductNode& n) {
    outer_seen.insert(n);
    stem.push_back(n);
    clock.check(outer_seen.size() + inner_seen.size());
    for (const auto& m : succ(n))
      if (!outer_seen.count(m) && outer(m)) return true;
    if (n.flag) {
      seed = n;
      if (inner(n)) return true;
    }
    stem.pop_back();
    return false;
  };

  TraceCheckResult r;
  for (const auto& a0 : initial_abstract(p)) {
    auto s0 = negation.step(negation.initial, a0.ctrl);
    if (!s0) continue;
    ProductNode n{a0, *s0, negation.accepting[*s0]};
    if (outer_seen.count(n)) continue;
    if (outer(n)) {
      r.holds = false;
      for (const auto& x : stem) r.stem.push_back(x.a);
      for (const auto& x : loop) r.loop.push_back(x.a);
      r.stem_trace = trace_of(r.stem);
      // Letters consumed around the loop, starting after the seed.
      auto around = r.loop;
      around.push_back(r.loop.front());
      for (std::size_t i = 1; i < around.size(); ++i)
        if (around[i].ctrl != around[i - 1].ctrl) r.loop_trace.push_back(around[i].ctrl);
      // Same ω-word, shortest stem: c1 c2 (c1 c2)^ω becomes c1 (c2 c1)^ω.
      while (r.stem_trace.size() > 1 && !r.loop_trace.empty() && r.stem_trace.back() == r.loop_trace.back()) {
        r.stem_trace.pop_back();
        std::rotate(r.loop_trace.rbegin(), r.loop_trace.rbegin() + 1, r.loop_trace.rend());
      }
      r.counterexample = r.stem_trace;
      break;
    }
  }
  r.product_states = outer_seen.size() + inner_seen.size();
  return r;
}

TcsBuchi build_buchi(const Tcs& t, std::optional<UserMask> initial) {
  TcsBuchi out;
  out.letters = t.dmin();
  auto& a = out.automaton;
  a.mode = SpecMode::Buchi;
  for (const auto& d : out.letters) {
    std::string name;
    for (auto i : d.transitions)
      name += (name.empty() ? "" : ",") + t.user_states[t.delta[i].from] + "->" + t.user_states[t.delta[i].to];
    a.alphabet.push_back(name);
  }
  auto support_name = [&](UserMask m) {
    std::string n = "{";
    for (StateIndex q = 0; q < t.num_user(); ++q)
      if (has_user(m, q)) n += (n.size() > 1 ? "," : "") + t.user_states[q];
    return n + "}";
  };

  std::map<UserMask, std::uint32_t> index;
  std::vector<UserMask> order;
  auto intern = [&](UserMask m) {
    auto [it, fresh] = index.emplace(m, static_cast<std::uint32_t>(order.size()));
    if (fresh) order.push_back(m);
    return it->second;
  };
  intern(initial.value_or(t.initial_users));
  std::vector<std::vector<std::optional<std::uint32_t>>> delta;
  for (std::size_t i = 0; i < order.size(); ++i) {
    UserMask s = order[i];
    std::vector<std::optional<std::uint32_t>> row;
    for (const auto& d : out.letters) {
      if ((d.pre_support & ~s) == 0)
        row.push_back(intern(s | d.post_support));
      else
        row.push_back(std::nullopt);  // patched to the sink below
    }
    delta.push_back(std::move(row));
  }
  auto sink = static_cast<std::uint32_t>(order.size());
  for (auto& row : delta)
    for (auto& cell : row)
      if (!cell) cell = sink;
  delta.emplace_back(out.letters.size(), sink);
  for (auto m : order) {
    a.states.push_back(support_name(m));
    a.accepting.push_back(true);
    out.support.emplace_back(m);
  }
  a.states.push_back("bot");
  a.accepting.push_back(false);
  out.support.emplace_back(std::nullopt);
  a.initial = 0;
  a.delta = std::move(delta);
  return out;
}

}  // namespace zeroone
