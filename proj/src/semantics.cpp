#include "zeroone/semantics.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace zeroone {

namespace {

// Processes leaving `from` that must land on one of `targets`.
struct Group {
  StateIndex from;
  std::uint32_t count;
  std::vector<StateIndex> targets;
};

// Calls sink(counts) for every way of placing each group's processes.
void distribute(const std::vector<Group>& groups, std::size_t g, std::vector<std::uint32_t>& counts,
                const std::function<void(const std::vector<std::uint32_t>&)>& sink) {
  if (g == groups.size()) {
    sink(counts);
    return;
  }
  const auto& grp = groups[g];
  // Place `left` processes on targets[i..].
  std::function<void(std::size_t, std::uint32_t)> place = [&](std::size_t i, std::uint32_t left) {
    if (i + 1 == grp.targets.size()) {
      counts[grp.targets[i]] += left;
      distribute(groups, g + 1, counts, sink);
      counts[grp.targets[i]] -= left;
      return;
    }
    for (std::uint32_t k = 0; k <= left; ++k) {
      counts[grp.targets[i]] += k;
      place(i + 1, left - k);
      counts[grp.targets[i]] -= k;
    }
  };
  place(0, grp.count);
}

std::vector<StateIndex> unique_targets(StateIndex self, bool include_self, const auto& moves) {
  std::vector<StateIndex> out;
  if (include_self) out.push_back(self);
  for (const auto& m : moves)
    if (std::find(out.begin(), out.end(), m.to) == out.end()) out.push_back(m.to);
  return out;
}

UserMask mask_of(const std::vector<StateIndex>& states) {
  UserMask m = 0;
  for (auto s : states) m |= user_bit(s);
  return m;
}

// Every union obtained by picking one option per entry.
std::vector<UserMask> unions(const std::vector<std::vector<UserMask>>& choices) {
  std::vector<UserMask> cur{0};
  for (const auto& opts : choices) {
    std::unordered_set<UserMask> next;
    for (auto c : cur)
      for (auto o : opts) next.insert(c | o);
    cur.assign(next.begin(), next.end());
  }
  std::sort(cur.begin(), cur.end());
  return cur;
}

std::vector<UserMask> nonempty_subsets(UserMask m) {
  std::vector<UserMask> out;
  for (UserMask sub = m; sub != 0; sub = (sub - 1) & m) out.push_back(sub);
  return out;
}

// Transportation problem between user states: supply[s] processes in s must
// move along allowed edges s->t to meet demand[t] exactly.
class Transport {
 public:
  explicit Transport(std::size_t n) : n_(n), cap_(2 * n + 2, std::vector<std::int64_t>(2 * n + 2, 0)) {}

  void allow(StateIndex s, StateIndex t) { cap_[1 + s][1 + n_ + t] = kInf; }

  // On success returns flow[s][t].
  std::optional<std::vector<std::vector<std::int64_t>>> solve(const std::vector<std::uint32_t>& supply,
                                                              const std::vector<std::uint32_t>& demand) {
    std::int64_t total = 0, total_demand = 0;
    for (std::size_t q = 0; q < n_; ++q) {
      cap_[0][1 + q] = supply[q];
      cap_[1 + n_ + q][sink()] = demand[q];
      total += supply[q];
      total_demand += demand[q];
    }
    if (total != total_demand) return std::nullopt;
    auto orig = cap_;
    std::int64_t flow = 0;
    // Edmonds-Karp; the graph is tiny.
    while (true) {
      std::vector<int> parent(cap_.size(), -1);
      parent[0] = 0;
      std::deque<int> queue{0};
      while (!queue.empty() && parent[sink()] < 0) {
        int u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < cap_.size(); ++v)
          if (parent[v] < 0 && cap_[u][v] > 0) {
            parent[v] = u;
            queue.push_back(static_cast<int>(v));
          }
      }
      if (parent[sink()] < 0) break;
      std::int64_t push = kInf;
      for (int v = sink(); v != 0; v = parent[v]) push = std::min(push, cap_[parent[v]][v]);
      for (int v = sink(); v != 0; v = parent[v]) {
        cap_[parent[v]][v] -= push;
        cap_[v][parent[v]] += push;
      }
      flow += push;
    }
    if (flow != total) return std::nullopt;
    std::vector<std::vector<std::int64_t>> out(n_, std::vector<std::int64_t>(n_, 0));
    for (std::size_t s = 0; s < n_; ++s)
      for (std::size_t t = 0; t < n_; ++t)
        if (orig[1 + s][1 + n_ + t] > 0) out[s][t] = orig[1 + s][1 + n_ + t] - cap_[1 + s][1 + n_ + t];
    return out;
  }

 private:
  static constexpr std::int64_t kInf = std::int64_t{1} << 40;
  int sink() const { return static_cast<int>(2 * n_ + 1); }
  std::size_t n_;
  std::vector<std::vector<std::int64_t>> cap_;
};

bool ctrl_in(const StateSet& g, StateIndex c) { return g.contains_ctrl(c); }

}  // namespace

Semantics::Semantics(const Protocol& p) : p_(p) {
  auto nq = p.num_user(), nc = p.num_controller();
  user_receive_.assign(p.messages.size(), std::vector<std::vector<UserMove>>(nq));
  ctrl_receive_.assign(p.messages.size(), std::vector<std::vector<UserMove>>(nc));
  user_sync_.assign(p.labels.size(), std::vector<std::vector<UserMove>>(nq));
  ctrl_sync_.assign(p.labels.size(), std::vector<std::vector<UserMove>>(nc));
  for (TransitionIndex i = 0; i < p.transitions.size(); ++i) {
    const auto& t = p.transitions[i];
    bool user = t.side == Side::User;
    switch (t.kind) {
      case TransitionKind::Broadcast: broadcasts_.push_back(i); break;
      case TransitionKind::Receive:
        (user ? user_receive_ : ctrl_receive_)[t.symbol][t.from].push_back({i, t.to});
        break;
      case TransitionKind::Sync: (user ? user_sync_ : ctrl_sync_)[t.symbol][t.from].push_back({i, t.to}); break;
      default: singles_.push_back(i); break;
    }
  }
}

const std::vector<Semantics::UserMove>& Semantics::user_moves(const Table& t, SymbolIndex sym, StateIndex q) const {
  return sym < t.size() ? t[sym][q] : none_;
}

const std::vector<Semantics::UserMove>& Semantics::ctrl_moves(const Table& t, SymbolIndex sym, StateIndex c) const {
  return sym < t.size() ? t[sym][c] : none_;
}

bool Semantics::gsync_enabled(SymbolIndex label, StateIndex ctrl, UserMask support) const {
  const auto* g = p_.guard_for(label);
  if (!g) return true;
  bool some = g->exists.contains_ctrl(ctrl) || (support & g->exists.users) != 0;
  bool all = g->forall.contains_ctrl(ctrl) && (support & ~g->forall.users) == 0;
  return some && all;
}

// ---------------------------------------------------------------------------
// Concrete steps

void Semantics::for_each_step(const Configuration& cfg, const ConcreteSink& sink) const {
  const auto& counts = cfg.counts;
  for (auto i : singles_) {
    const auto& t = p_.transitions[i];
    StepInfo info{Primitive::Internal, t.symbol, i};
    if (t.kind == TransitionKind::Disjunctive) info.kind = Primitive::Disjunctive;
    if (t.kind == TransitionKind::AsmWrite || t.kind == TransitionKind::AsmRead) info.kind = Primitive::Asm;

    if (t.side == Side::Controller) {
      if (cfg.ctrl != t.from) continue;
      if (t.kind == TransitionKind::Disjunctive && (cfg.support() & t.guard.users) == 0) continue;
      Configuration next = cfg;
      next.ctrl = t.to;
      sink(next, info);
      continue;
    }

    StateIndex ctrl_after = cfg.ctrl;
    if (t.kind == TransitionKind::AsmWrite) ctrl_after = p_.assign_value(cfg.ctrl, t.symbol);
    if (t.kind == TransitionKind::AsmRead && p_.value_of(cfg.ctrl) != t.symbol) continue;
    for (std::uint32_t i_move = 1; i_move <= counts[t.from]; ++i_move) {
      if (t.kind == TransitionKind::Disjunctive) {
        // Some process that does not move must satisfy the guard.
        bool ok = ctrl_in(t.guard, cfg.ctrl);
        for (StateIndex r = 0; !ok && r < counts.size(); ++r)
          if (t.guard.contains_user(r) && counts[r] - (r == t.from ? i_move : 0) >= 1) ok = true;
        if (!ok) continue;
      }
      Configuration next = cfg;
      next.ctrl = ctrl_after;
      next.counts[t.from] -= i_move;
      next.counts[t.to] += i_move;
      sink(next, info);
    }
  }
  lossy_steps(cfg, sink);
  sync_steps(cfg, sink);
}

void Semantics::lossy_steps(const Configuration& cfg, const ConcreteSink& sink) const {
  for (auto bi : broadcasts_) {
    const auto& b = p_.transitions[bi];
    StepInfo info{Primitive::Lossy, b.symbol, bi};
    auto m = b.symbol;

    auto receivers = [&](const std::vector<std::uint32_t>& remaining, std::vector<std::uint32_t> base,
                         const std::vector<StateIndex>& ctrl_options) {
      std::vector<Group> groups;
      for (StateIndex s = 0; s < remaining.size(); ++s) {
        if (remaining[s] == 0) continue;
        groups.push_back({s, remaining[s], unique_targets(s, true, user_moves(user_receive_, m, s))});
        base[s] -= remaining[s];
      }
      distribute(groups, 0, base, [&](const std::vector<std::uint32_t>& out) {
        for (auto c : ctrl_options) sink(Configuration{c, out}, info);
      });
    };

    if (b.side == Side::Controller) {
      if (cfg.ctrl != b.from) continue;
      receivers(cfg.counts, cfg.counts, {b.to});
      continue;
    }
    if (cfg.counts[b.from] == 0) continue;
    auto ctrl_options = unique_targets(cfg.ctrl, true, ctrl_moves(ctrl_receive_, m, cfg.ctrl));
    for (std::uint32_t j = 1; j <= cfg.counts[b.from]; ++j) {
      auto remaining = cfg.counts;
      remaining[b.from] -= j;
      auto base = cfg.counts;
      base[b.from] -= j;
      base[b.to] += j;
      // Senders are already placed; `receivers` subtracts the rest from base.
      receivers(remaining, base, ctrl_options);
    }
  }
}

void Semantics::sync_steps(const Configuration& cfg, const ConcreteSink& sink) const {
  for (SymbolIndex a = 0; a < p_.labels.size(); ++a) {
    const auto& cmoves = ctrl_moves(ctrl_sync_, a, cfg.ctrl);
    std::vector<Group> groups;
    auto base = cfg.counts;
    for (StateIndex s = 0; s < cfg.counts.size(); ++s) {
      const auto& moves = user_moves(user_sync_, a, s);
      if (cfg.counts[s] == 0 || moves.empty()) continue;
      groups.push_back({s, cfg.counts[s], unique_targets(s, false, moves)});
      base[s] = 0;
    }
    if (groups.empty() && cmoves.empty()) continue;
    if (!gsync_enabled(a, cfg.ctrl, cfg.support())) continue;
    StepInfo info{p_.guard_for(a) ? Primitive::GuardedSync : Primitive::Sync, a, 0};
    auto ctrl_options = cmoves.empty() ? std::vector<StateIndex>{cfg.ctrl} : unique_targets(cfg.ctrl, false, cmoves);
    distribute(groups, 0, base, [&](const std::vector<std::uint32_t>& out) {
      for (auto c : ctrl_options) sink(Configuration{c, out}, info);
    });
  }
}

std::vector<Configuration> Semantics::successors(const Configuration& cfg) const {
  std::vector<Configuration> out;
  for_each_step(cfg, [&](const Configuration& c, const StepInfo&) { out.push_back(c); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Step membership

std::optional<StepWitness> Semantics::is_step(const Configuration& src, const Configuration& dst) const {
  if (src.counts.size() != p_.num_user() || dst.counts.size() != p_.num_user() || src.users() != dst.users())
    throw std::invalid_argument("is_step: configurations of different size");
  const auto nq = src.counts.size();

  for (auto i : singles_) {
    const auto& t = p_.transitions[i];
    Primitive kind = t.kind == TransitionKind::Disjunctive ? Primitive::Disjunctive
                     : (t.kind == TransitionKind::AsmWrite || t.kind == TransitionKind::AsmRead) ? Primitive::Asm
                                                                                                 : Primitive::Internal;
    if (t.side == Side::Controller) {
      if (src.ctrl != t.from || dst.ctrl != t.to || src.counts != dst.counts) continue;
      if (t.kind == TransitionKind::Disjunctive && (src.support() & t.guard.users) == 0) continue;
      return StepWitness{kind, {{i, 1}}, std::nullopt, std::nullopt};
    }
    StateIndex ctrl_after = src.ctrl;
    if (t.kind == TransitionKind::AsmWrite) ctrl_after = p_.assign_value(src.ctrl, t.symbol);
    if (t.kind == TransitionKind::AsmRead && p_.value_of(src.ctrl) != t.symbol) continue;
    if (dst.ctrl != ctrl_after || src.counts[t.from] == 0) continue;
    std::uint32_t moved = 1;
    if (t.from == t.to) {
      if (src.counts != dst.counts) continue;
    } else {
      if (dst.counts[t.from] >= src.counts[t.from]) continue;
      moved = src.counts[t.from] - dst.counts[t.from];
      bool ok = dst.counts[t.to] == src.counts[t.to] + moved;
      for (StateIndex q = 0; ok && q < nq; ++q)
        if (q != t.from && q != t.to && src.counts[q] != dst.counts[q]) ok = false;
      if (!ok) continue;
    }
    if (t.kind == TransitionKind::Disjunctive) {
      bool ok = ctrl_in(t.guard, src.ctrl);
      for (StateIndex r = 0; !ok && r < nq; ++r)
        if (t.guard.contains_user(r) && src.counts[r] - (r == t.from ? moved : 0) >= 1) ok = true;
      if (!ok) continue;
    }
    return StepWitness{kind, {{i, moved}}, std::nullopt, std::nullopt};
  }
  if (auto w = lossy_witness(src, dst)) return w;
  return sync_witness(src, dst);
}

namespace {

// Adds the flows s->t (s != t) as moves along the first matching transition.
template <typename Moves>
bool add_flow_moves(const std::vector<std::vector<std::int64_t>>& flow, const Moves& moves_of, StepWitness& w) {
  for (StateIndex s = 0; s < flow.size(); ++s)
    for (StateIndex t = 0; t < flow.size(); ++t) {
      if (flow[s][t] == 0) continue;
      const auto& moves = moves_of(s);
      auto it = std::find_if(moves.begin(), moves.end(), [&](const auto& m) { return m.to == t; });
      if (it == moves.end()) {
        if (s == t) continue;  // staying put
        return false;
      }
      w.moves.emplace_back(it->index, static_cast<std::uint32_t>(flow[s][t]));
    }
  return true;
}

}  // namespace

std::optional<StepWitness> Semantics::lossy_witness(const Configuration& src, const Configuration& dst) const {
  const auto nq = src.counts.size();
  for (auto bi : broadcasts_) {
    const auto& b = p_.transitions[bi];
    auto m = b.symbol;
    auto receive_of = [&](StateIndex s) -> const std::vector<UserMove>& { return user_moves(user_receive_, m, s); };
    auto try_flow = [&](const std::vector<std::uint32_t>& supply, const std::vector<std::uint32_t>& demand,
                        StepWitness w) -> std::optional<StepWitness> {
      Transport tr(nq);
      for (StateIndex s = 0; s < nq; ++s) {
        tr.allow(s, s);
        for (const auto& mv : receive_of(s)) tr.allow(s, mv.to);
      }
      auto flow = tr.solve(supply, demand);
      if (!flow) return std::nullopt;
      // A receive self-loop never needs to be listed: staying is equivalent.
      if (!add_flow_moves(*flow, receive_of, w)) return std::nullopt;
      std::sort(w.moves.begin(), w.moves.end());
      return w;
    };

    if (b.side == Side::Controller) {
      if (src.ctrl != b.from || dst.ctrl != b.to) continue;
      if (auto w = try_flow(src.counts, dst.counts,
                            StepWitness{Primitive::Lossy, {{bi, 1}}, bi, std::nullopt}))
        return w;
      continue;
    }
    std::optional<std::pair<TransitionIndex, std::uint32_t>> ctrl_move;
    if (dst.ctrl != src.ctrl) {
      const auto& cm = ctrl_moves(ctrl_receive_, m, src.ctrl);
      auto it = std::find_if(cm.begin(), cm.end(), [&](const UserMove& mv) { return mv.to == dst.ctrl; });
      if (it == cm.end()) continue;
      ctrl_move = std::make_pair(it->index, 1U);
    }
    for (std::uint32_t j = 1; j <= src.counts[b.from]; ++j) {
      if (dst.counts[b.to] < j) break;
      auto supply = src.counts;
      supply[b.from] -= j;
      auto demand = dst.counts;
      demand[b.to] -= j;
      StepWitness w{Primitive::Lossy, {{bi, j}}, bi, std::nullopt};
      if (ctrl_move) w.moves.push_back(*ctrl_move);
      if (auto ok = try_flow(supply, demand, std::move(w))) return ok;
    }
  }
  return std::nullopt;
}

std::optional<StepWitness> Semantics::sync_witness(const Configuration& src, const Configuration& dst) const {
  const auto nq = src.counts.size();
  for (SymbolIndex a = 0; a < p_.labels.size(); ++a) {
    const auto& cmoves = ctrl_moves(ctrl_sync_, a, src.ctrl);
    bool participant = !cmoves.empty();
    for (StateIndex s = 0; s < nq; ++s)
      if (src.counts[s] > 0 && !user_moves(user_sync_, a, s).empty()) participant = true;
    if (!participant || !gsync_enabled(a, src.ctrl, src.support())) continue;

    StepWitness w{p_.guard_for(a) ? Primitive::GuardedSync : Primitive::Sync, {}, std::nullopt, a};
    if (!cmoves.empty()) {
      auto it = std::find_if(cmoves.begin(), cmoves.end(), [&](const UserMove& mv) { return mv.to == dst.ctrl; });
      if (it == cmoves.end()) continue;
      w.moves.emplace_back(it->index, 1);
    } else if (dst.ctrl != src.ctrl) {
      continue;
    }
    Transport tr(nq);
    for (StateIndex s = 0; s < nq; ++s) {
      const auto& moves = user_moves(user_sync_, a, s);
      if (moves.empty()) tr.allow(s, s);
      for (const auto& mv : moves) tr.allow(s, mv.to);
    }
    auto flow = tr.solve(src.counts, dst.counts);
    if (!flow) continue;
    // Here every flow edge of a participating state is a real transition.
    for (StateIndex s = 0; s < nq; ++s)
      for (StateIndex t = 0; t < nq; ++t) {
        if ((*flow)[s][t] == 0) continue;
        const auto& moves = user_moves(user_sync_, a, s);
        if (moves.empty()) continue;
        auto it = std::find_if(moves.begin(), moves.end(), [&](const UserMove& mv) { return mv.to == t; });
        w.moves.emplace_back(it->index, static_cast<std::uint32_t>((*flow)[s][t]));
      }
    std::sort(w.moves.begin(), w.moves.end());
    return w;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Abstract steps

void Semantics::for_each_abstract_step(const AbstractConfiguration& a, const AbstractSink& sink) const {
  const UserMask S = a.occupied;
  for (auto i : singles_) {
    const auto& t = p_.transitions[i];
    StepInfo info{Primitive::Internal, t.symbol, i};
    if (t.kind == TransitionKind::Disjunctive) info.kind = Primitive::Disjunctive;
    if (t.kind == TransitionKind::AsmWrite || t.kind == TransitionKind::AsmRead) info.kind = Primitive::Asm;

    if (t.side == Side::Controller) {
      if (a.ctrl != t.from) continue;
      if (t.kind == TransitionKind::Disjunctive && (S & t.guard.users) == 0) continue;
      sink({t.to, S}, info);
      continue;
    }
    if (!has_user(S, t.from)) continue;
    StateIndex ctrl_after = a.ctrl;
    if (t.kind == TransitionKind::AsmWrite) ctrl_after = p_.assign_value(a.ctrl, t.symbol);
    if (t.kind == TransitionKind::AsmRead && p_.value_of(a.ctrl) != t.symbol) continue;

    UserMask partial = S | user_bit(t.to);
    UserMask full = (S & ~user_bit(t.from)) | user_bit(t.to);
    bool partial_ok = true, full_ok = true;
    if (t.kind == TransitionKind::Disjunctive) {
      bool by_ctrl = ctrl_in(t.guard, a.ctrl);
      partial_ok = by_ctrl || (S & t.guard.users) != 0;
      full_ok = by_ctrl || (S & ~user_bit(t.from) & t.guard.users) != 0;
    }
    if (partial_ok) sink({ctrl_after, partial}, info);
    if (full_ok && full != partial) sink({ctrl_after, full}, info);
  }
  lossy_abstract(a, sink);
  sync_abstract(a, sink);
}

void Semantics::lossy_abstract(const AbstractConfiguration& a, const AbstractSink& sink) const {
  const UserMask S = a.occupied;
  const auto nq = p_.num_user();
  for (auto bi : broadcasts_) {
    const auto& b = p_.transitions[bi];
    auto m = b.symbol;
    StepInfo info{Primitive::Lossy, m, bi};
    std::vector<StateIndex> ctrl_options;
    if (b.side == Side::Controller) {
      if (a.ctrl != b.from) continue;
      ctrl_options = {b.to};
    } else {
      if (!has_user(S, b.from)) continue;
      ctrl_options = unique_targets(a.ctrl, true, ctrl_moves(ctrl_receive_, m, a.ctrl));
    }
    std::vector<std::vector<UserMask>> choices;
    for (StateIndex s = 0; s < nq; ++s) {
      if (!has_user(S, s)) continue;
      UserMask outcomes = mask_of(unique_targets(s, true, user_moves(user_receive_, m, s)));
      if (b.side == Side::User && s == b.from) {
        // The senders land in b.to; any other process here stays or receives.
        std::vector<UserMask> opts{user_bit(b.to)};
        for (auto sub : nonempty_subsets(outcomes)) opts.push_back(sub | user_bit(b.to));
        choices.push_back(std::move(opts));
      } else {
        choices.push_back(nonempty_subsets(outcomes));
      }
    }
    for (auto u : unions(choices))
      for (auto c : ctrl_options) sink({c, u}, info);
  }
}

void Semantics::sync_abstract(const AbstractConfiguration& a, const AbstractSink& sink) const {
  const UserMask S = a.occupied;
  const auto nq = p_.num_user();
  for (SymbolIndex l = 0; l < p_.labels.size(); ++l) {
    const auto& cmoves = ctrl_moves(ctrl_sync_, l, a.ctrl);
    std::vector<std::vector<UserMask>> choices;
    bool participant = !cmoves.empty();
    for (StateIndex s = 0; s < nq; ++s) {
      if (!has_user(S, s)) continue;
      const auto& moves = user_moves(user_sync_, l, s);
      if (moves.empty()) {
        choices.push_back({user_bit(s)});
      } else {
        participant = true;
        choices.push_back(nonempty_subsets(mask_of(unique_targets(s, false, moves))));
      }
    }
    if (!participant || !gsync_enabled(l, a.ctrl, S)) continue;
    StepInfo info{p_.guard_for(l) ? Primitive::GuardedSync : Primitive::Sync, l, 0};
    auto ctrl_options = cmoves.empty() ? std::vector<StateIndex>{a.ctrl} : unique_targets(a.ctrl, false, cmoves);
    for (auto u : unions(choices))
      for (auto c : ctrl_options) sink({c, u}, info);
  }
}

std::vector<AbstractConfiguration> Semantics::abstract_successors(const AbstractConfiguration& a) const {
  std::vector<AbstractConfiguration> out;
  for_each_abstract_step(a, [&](const AbstractConfiguration& s, const StepInfo&) { out.push_back(s); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<AbstractConfiguration> Semantics::generic_abstract_successors(const AbstractConfiguration& a,
                                                                          StepBound bound) const {
  std::vector<StateIndex> occupied;
  for (StateIndex q = 0; q < p_.num_user(); ++q)
    if (has_user(a.occupied, q)) occupied.push_back(q);
  Configuration src{a.ctrl, std::vector<std::uint32_t>(p_.num_user(), 0)};
  for (auto q : occupied) src.counts[q] = 1;

  std::unordered_set<AbstractConfiguration, AbstractConfigurationHash> seen;
  while (true) {
    for_each_step(src, [&](const Configuration& c, const StepInfo&) { seen.insert(alpha(c)); });
    // Odometer over counts in 1..B.
    std::size_t k = 0;
    while (k < occupied.size() && src.counts[occupied[k]] == bound.value) src.counts[occupied[k++]] = 1;
    if (k == occupied.size()) break;
    ++src.counts[occupied[k]];
  }
  std::vector<AbstractConfiguration> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Configuration> concrete_successors(const Protocol& p, const Configuration& cfg) {
  return Semantics(p).successors(cfg);
}

std::optional<StepWitness> is_step(const Protocol& p, const Configuration& src, const Configuration& dst) {
  return Semantics(p).is_step(src, dst);
}

Configuration apply_witness(const Protocol& p, const Configuration& src, const StepWitness& w) {
  Configuration out = src;
  bool ctrl_moved = false;
  for (const auto& [index, k] : w.moves) {
    const auto& t = p.transitions.at(index);
    if (t.side == Side::Controller) {
      if (k != 1 || ctrl_moved || out.ctrl != t.from) throw std::invalid_argument("witness: bad controller move");
      out.ctrl = t.to;
      ctrl_moved = true;
      continue;
    }
    if (src.counts[t.from] < k || out.counts[t.from] < k) throw std::invalid_argument("witness: not enough processes");
    out.counts[t.from] -= k;
    out.counts[t.to] += k;
    if (t.kind == TransitionKind::AsmWrite) out.ctrl = p.assign_value(src.ctrl, t.symbol);
  }
  // Each process moves at most once: the moved total per source state is bounded by its count.
  std::vector<std::uint64_t> left(src.counts.size(), 0);
  for (const auto& [index, k] : w.moves) {
    const auto& t = p.transitions[index];
    if (t.side == Side::User) left[t.from] += k;
  }
  for (StateIndex q = 0; q < left.size(); ++q)
    if (left[q] > src.counts[q]) throw std::invalid_argument("witness: a process moves twice");
  return out;
}

StepBound step_bound(const Protocol& p) {
  auto profile = p.kind_profile();
  auto nq = static_cast<std::uint32_t>(p.num_user());
  std::uint32_t b = 1;
  // An internal move that keeps its source occupied needs a mover and a stayer,
  // exactly like a disjunctive one.
  if (profile.has(Primitive::Disjunctive) || profile.has(Primitive::Internal)) b = std::max(b, 2U);
  if (profile.has(Primitive::Lossy) || profile.has(Primitive::Sync) || profile.has(Primitive::GuardedSync))
    b = std::max(b, nq);
  return {b};
}

std::vector<AbstractConfiguration> abstract_successors(const Protocol& p, const AbstractConfiguration& a) {
  return Semantics(p).abstract_successors(a);
}

std::vector<AbstractConfiguration> generic_abstract_successors(const Protocol& p, const AbstractConfiguration& a,
                                                               StepBound bound) {
  return Semantics(p).generic_abstract_successors(a, bound);
}

}  // namespace zeroone
