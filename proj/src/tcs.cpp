#include "zeroone/tcs.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "zeroone/configuration.hpp"

namespace zeroone {

MinimalStep Tcs::make_step(std::vector<std::size_t> transitions) const {
  std::sort(transitions.begin(), transitions.end());
  transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
  MinimalStep d;
  std::vector<std::uint32_t> pre(num_user(), 0);
  for (auto i : transitions) {
    const auto& t = delta.at(i);
    d.pre_support |= user_bit(t.from);
    d.post_support |= user_bit(t.to);
    d.max_pre = std::max(d.max_pre, ++pre[t.from]);
  }
  d.transitions = std::move(transitions);
  return d;
}

void Tcs::for_each_step(const std::function<bool(const MinimalStep&)>& fn) const {
  for (const auto& f : families) {
    if (f.optional.size() >= 32) throw TcsError("too many optional transitions in one step family");
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << f.optional.size()); ++sub) {
      auto ts = f.fixed;
      for (std::size_t k = 0; k < f.optional.size(); ++k)
        if ((sub >> k) & 1U) ts.push_back(f.optional[k]);
      if (!fn(make_step(std::move(ts)))) return;
    }
  }
}

std::vector<MinimalStep> Tcs::dmin() const {
  std::set<std::vector<std::size_t>> seen;
  std::vector<MinimalStep> out;
  for_each_step([&](const MinimalStep& d) {
    if (seen.insert(d.transitions).second) out.push_back(d);
    return true;
  });
  return out;
}

std::size_t Tcs::dmin_size() const { return dmin().size(); }

namespace {

std::size_t intern(Tcs& t, StateIndex from, StateIndex to) {
  LocalTransition lt{from, to};
  auto it = std::find(t.delta.begin(), t.delta.end(), lt);
  if (it != t.delta.end()) return static_cast<std::size_t>(it - t.delta.begin());
  t.delta.push_back(lt);
  return t.delta.size() - 1;
}

}  // namespace

Tcs to_tcs(const Protocol& p) {
  auto profile = p.kind_profile();
  if (profile.has(Primitive::Sync) || profile.has(Primitive::GuardedSync))
    throw TcsError("not a TCS: synchronization protocols are not transition counter systems");
  if (profile.has(Primitive::Asm)) throw TcsError("not a TCS: ASM protocols are not supported");
  if (profile.has(Primitive::Lossy) && profile.has(Primitive::Disjunctive))
    throw TcsError("not a TCS: mixes lossy broadcast and disjunctive guards");
  if (!p.controller_free()) throw TcsError("not a TCS: the controller takes part in the protocol");

  Tcs t;
  t.user_states = p.user_states;
  t.initial_users = p.initial_users;
  for (const auto& tr : p.transitions) {
    switch (tr.kind) {
      case TransitionKind::Internal: t.families.push_back({{intern(t, tr.from, tr.to)}, {}}); break;
      case TransitionKind::Disjunctive: {
        auto move = intern(t, tr.from, tr.to);
        for (StateIndex r = 0; r < p.num_user(); ++r)
          if (tr.guard.contains_user(r)) t.families.push_back({{move, intern(t, r, r)}, {}});
        break;
      }
      case TransitionKind::Broadcast: {
        StepFamily f{{intern(t, tr.from, tr.to)}, {}};
        // Receive self-loops are indistinguishable from staying put.
        for (const auto& rc : p.transitions) {
          if (rc.kind != TransitionKind::Receive || rc.symbol != tr.symbol || rc.from == rc.to) continue;
          auto i = intern(t, rc.from, rc.to);
          if (i != f.fixed.front() && std::find(f.optional.begin(), f.optional.end(), i) == f.optional.end())
            f.optional.push_back(i);
        }
        t.families.push_back(std::move(f));
        break;
      }
      default: break;
    }
  }
  return t;
}

std::vector<UserMask> tcs_abstract_successors(const Tcs& t, UserMask a) {
  std::unordered_set<UserMask> out;
  t.for_each_step([&](const MinimalStep& d) {
    if ((d.pre_support & ~a) != 0) return true;
    UserMask freed = d.pre_support & ~d.post_support;
    UserMask base = (a & ~freed) | d.post_support;
    for (UserMask sub = freed;; sub = (sub - 1) & freed) {
      out.insert(base | sub);
      if (sub == 0) break;
    }
    return true;
  });
  std::vector<UserMask> v(out.begin(), out.end());
  std::sort(v.begin(), v.end());
  return v;
}

namespace {

AbstractConfiguration as_abstract(UserMask m) { return {0, m}; }

}  // namespace

SaturationResult saturate(const Tcs& t, const Constraint& phi) {
  if (phi.classify() != ConstraintClass::Geq) throw TcsError("saturation requires a constraint of class GEQ");
  auto phi_alpha = abstract_constraint(phi);
  SaturationResult r;
  UserMask cur = t.initial_users;
  while (true) {
    UserMask grown = cur;
    t.for_each_step([&](const MinimalStep& d) {
      if ((d.pre_support & ~cur) == 0) grown |= d.post_support;
      return true;
    });
    if (grown == cur) break;
    cur = grown;
    ++r.rounds;
  }
  r.support = cur;
  r.verdict = eval_abstract(phi_alpha, as_abstract(cur));
  return r;
}

bool decide_crp_geq(const Tcs& t, const Constraint& phi) { return saturate(t, phi).verdict; }

TwoPhaseResult two_phase_search(const Tcs& t, const std::function<bool(UserMask)>& goal, bool allow_empty_start) {
  TwoPhaseResult r;
  // (support, phase) pairs already fully explored without success.
  std::set<std::pair<UserMask, int>> dead;
  std::vector<UserMask> path;

  std::function<bool(UserMask, int)> dfs = [&](UserMask s, int phase) {
    ++r.nodes;
    path.push_back(s);
    r.longest_run = std::max(r.longest_run, path.size() - 1);
    if (goal(s)) return true;
    if (dead.count({s, phase})) {
      path.pop_back();
      return false;
    }
    for (auto w : tcs_abstract_successors(t, s)) {
      bool grows = (w & s) == s && w != s;
      bool shrinks = (w & s) == w && w != s;
      if ((phase == 0 && grows && dfs(w, 0)) || (shrinks && dfs(w, 1))) return true;
    }
    dead.insert({s, phase});
    path.pop_back();
    return false;
  };

  UserMask q0 = t.initial_users;
  UserMask sub = 0;
  do {
    if ((sub != 0 || allow_empty_start) && dfs(sub, 0)) {
      r.verdict = true;
      r.run = path;
      return r;
    }
    sub = (sub - q0) & q0;
  } while (sub != 0);
  return r;
}

TwoPhaseResult decide_crp_geq_zero_run(const Tcs& t, const Constraint& phi, bool allow_empty_start) {
  if (phi.classify() == ConstraintClass::Full)
    throw TcsError("the two-phase search requires a constraint of class GEQ or GEQ_ZERO");
  auto phi_alpha = abstract_constraint(phi);
  return two_phase_search(
      t, [&](UserMask s) { return eval_abstract(phi_alpha, as_abstract(s)); }, allow_empty_start);
}

bool decide_crp_geq_zero(const Tcs& t, const Constraint& phi) { return decide_crp_geq_zero_run(t, phi).verdict; }

DeadlockResult detect_deadlock(const Tcs& t) {
  auto steps = t.dmin();
  for (const auto& d : steps)
    if (d.max_pre > 1) throw TcsError("deadlock detection requires pre(D)(p) <= 1 for every minimal step");
  auto stuck = [&](UserMask s) {
    return std::none_of(steps.begin(), steps.end(),
                        [&](const MinimalStep& d) { return (d.pre_support & ~s) == 0; });
  };
  DeadlockResult r;
  r.with_empty_start = two_phase_search(t, stuck, true).verdict;
  r.without_empty_start = two_phase_search(t, stuck, false).verdict;
  return r;
}

Constraint deadlock_constraint(const Tcs& t) {
  std::vector<Constraint> clauses;
  std::set<UserMask> seen;
  for (const auto& d : t.dmin()) {
    if (!seen.insert(d.pre_support).second) continue;
    std::vector<Constraint> any_empty;
    for (StateIndex q = 0; q < t.num_user(); ++q)
      if (has_user(d.pre_support, q)) any_empty.push_back(Constraint::zero(q));
    clauses.push_back(disj_all(any_empty));
  }
  if (clauses.empty()) throw TcsError("no minimal steps: every configuration is a deadlock");
  return conj_all(clauses);
}

std::string dump_tcs(const Tcs& t) {
  std::string out;
  for (const auto& d : t.dmin()) {
    out += "D:";
    for (std::size_t k = 0; k < d.transitions.size(); ++k) {
      const auto& lt = t.delta[d.transitions[k]];
      out += (k ? ", " : " ") + t.user_states[lt.from] + "->" + t.user_states[lt.to];
    }
    out += "\n";
  }
  return out;
}

}  // namespace zeroone
