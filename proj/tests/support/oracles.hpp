// oracles.hpp -- independent reference implementations used only by tests.
// Nothing here calls the library's step relation.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "zeroone/configuration.hpp"
#include "zeroone/dfa.hpp"
#include "zeroone/protocol.hpp"

namespace oracles {

using namespace zeroone;

inline std::string corpus(const std::string& name) { return std::string(ZEROONE_CORPUS_DIR) + "/" + name + ".proto"; }

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{"lossy_basic",       "lossy_q1",  "sync_basic",          "gsync_basic",      "lossy_spurious",
                                              "disj_basic",   "asm_basic",  "walk",          "mixed",          "tcs_lossy",
                                              "tcs_disj",   "tcs_relay", "tcs_chain",    "omega_cycle",    "omega_deadlock"};
  return names;
}

// ---------------------------------------------------------------------------
// Process-level simulator. Every user process is an individual; each step
// enumerates one choice per process straight from the step definitions and
// only then counts.

struct Option {
  StateIndex to;
  bool tagged;  // sender / mover
};

inline Configuration count(StateIndex ctrl, const std::vector<StateIndex>& procs, std::size_t nq) {
  Configuration c;
  c.ctrl = ctrl;
  c.counts.assign(nq, 0);
  for (auto q : procs) ++c.counts[q];
  return c;
}

/// Calls fn for every combination of per-process options.
inline void product(const std::vector<std::vector<Option>>& options,
                    const std::function<void(const std::vector<Option>&)>& fn) {
  std::vector<Option> pick(options.size(), Option{0, false});
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == options.size()) return fn(pick);
    for (const auto& o : options[i]) {
      pick[i] = o;
      rec(i + 1);
    }
  };
  rec(0);
}

/// `skip_alone`: the mutant where a process alone in its state may ignore a
/// synchronization it should take part in.
inline std::set<Configuration> explicit_successors(const Protocol& p, const Configuration& cfg,
                                                   bool skip_alone = false) {
  std::vector<StateIndex> procs;
  for (StateIndex q = 0; q < cfg.counts.size(); ++q)
    for (std::uint32_t i = 0; i < cfg.counts[q]; ++i) procs.push_back(q);
  const auto nq = p.num_user();
  const auto& ts = p.transitions;
  std::set<Configuration> out;
  auto stay = [](StateIndex q) { return Option{q, false}; };
  auto in_guard = [](const StateSet& g, StateIndex q) { return g.contains_user(q); };

  for (const auto& t : ts) {
    if (t.kind == TransitionKind::Internal || t.kind == TransitionKind::Disjunctive ||
        t.kind == TransitionKind::AsmWrite || t.kind == TransitionKind::AsmRead) {
      if (t.side == Side::Controller) {
        if (cfg.ctrl != t.from) continue;
        if (t.kind == TransitionKind::Disjunctive &&
            std::none_of(procs.begin(), procs.end(), [&](StateIndex q) { return in_guard(t.guard, q); }))
          continue;
        out.insert(count(t.to, procs, nq));
        continue;
      }
      if (t.kind == TransitionKind::AsmRead && p.value_of(cfg.ctrl) != t.symbol) continue;
      std::vector<std::vector<Option>> opts;
      for (auto q : procs) {
        opts.push_back({stay(q)});
        if (q == t.from) opts.back().push_back({t.to, true});
      }
      product(opts, [&](const std::vector<Option>& pick) {
        bool moved = false, guard = t.guard.contains_ctrl(cfg.ctrl);
        std::vector<StateIndex> next;
        for (const auto& o : pick) {
          moved |= o.tagged;
          if (!o.tagged && in_guard(t.guard, o.to)) guard = true;
          next.push_back(o.to);
        }
        if (!moved) return;
        if (t.kind == TransitionKind::Disjunctive && !guard) return;
        auto ctrl = t.kind == TransitionKind::AsmWrite ? p.assign_value(cfg.ctrl, t.symbol) : cfg.ctrl;
        out.insert(count(ctrl, next, nq));
      });
    }
  }

  // Lossy broadcast: one broadcast transition, everybody else may receive.
  for (const auto& b : ts) {
    if (b.kind != TransitionKind::Broadcast) continue;
    auto receives = [&](Side side, StateIndex from) {
      std::vector<Option> o{stay(from)};
      for (const auto& r : ts)
        if (r.kind == TransitionKind::Receive && r.side == side && r.symbol == b.symbol && r.from == from)
          o.push_back({r.to, false});
      return o;
    };
    if (b.side == Side::Controller) {
      if (cfg.ctrl != b.from) continue;
      std::vector<std::vector<Option>> opts;
      for (auto q : procs) opts.push_back(receives(Side::User, q));
      product(opts, [&](const std::vector<Option>& pick) {
        std::vector<StateIndex> next;
        for (const auto& o : pick) next.push_back(o.to);
        out.insert(count(b.to, next, nq));
      });
      continue;
    }
    std::vector<std::vector<Option>> opts;
    opts.push_back(receives(Side::Controller, cfg.ctrl));  // slot 0: the controller
    for (auto q : procs) {
      opts.push_back(receives(Side::User, q));
      if (q == b.from) opts.back().push_back({b.to, true});
    }
    product(opts, [&](const std::vector<Option>& pick) {
      if (std::none_of(pick.begin() + 1, pick.end(), [](const Option& o) { return o.tagged; })) return;
      std::vector<StateIndex> next;
      for (std::size_t i = 1; i < pick.size(); ++i) next.push_back(pick[i].to);
      out.insert(count(pick[0].to, next, nq));
    });
  }

  // Synchronization: everybody with a transition on the label takes one.
  for (SymbolIndex a = 0; a < p.labels.size(); ++a) {
    if (const auto* g = p.guard_for(a)) {
      bool exists = g->exists.contains_ctrl(cfg.ctrl);
      bool forall = g->forall.contains_ctrl(cfg.ctrl);
      for (auto q : procs) {
        exists |= g->exists.contains_user(q);
        forall &= g->forall.contains_user(q);
      }
      if (!exists || !forall) continue;
    }
    auto moves = [&](Side side, StateIndex from) {
      std::vector<Option> o;
      for (const auto& t : ts)
        if (t.kind == TransitionKind::Sync && t.side == side && t.symbol == a && t.from == from)
          o.push_back({t.to, true});
      return o;
    };
    std::vector<std::vector<Option>> opts;
    opts.push_back(moves(Side::Controller, cfg.ctrl));
    if (opts[0].empty()) opts[0].push_back(stay(cfg.ctrl));
    for (auto q : procs) {
      opts.push_back(moves(Side::User, q));
      if (opts.back().empty() || (skip_alone && cfg.counts[q] == 1)) opts.back().push_back(stay(q));
    }
    product(opts, [&](const std::vector<Option>& pick) {
      if (std::none_of(pick.begin(), pick.end(), [](const Option& o) { return o.tagged; })) return;
      std::vector<StateIndex> next;
      for (std::size_t i = 1; i < pick.size(); ++i) next.push_back(pick[i].to);
      out.insert(count(pick[0].to, next, nq));
    });
  }
  return out;
}

/// Every configuration reachable with exactly n users, by plain BFS over the
/// process-level simulator.
inline std::set<Configuration> explicit_reach(const Protocol& p, std::uint32_t n) {
  std::vector<StateIndex> q0;
  for (StateIndex q = 0; q < p.num_user(); ++q)
    if (has_user(p.initial_users, q)) q0.push_back(q);
  std::set<Configuration> seen;
  std::queue<Configuration> todo;
  std::function<void(std::size_t, std::uint32_t, Configuration&)> init = [&](std::size_t i, std::uint32_t left,
                                                                             Configuration& c) {
    if (i + 1 == q0.size()) {
      c.counts[q0[i]] = left;
      if (seen.insert(c).second) todo.push(c);
      c.counts[q0[i]] = 0;
      return;
    }
    for (std::uint32_t k = 0; k <= left; ++k) {
      c.counts[q0[i]] = k;
      init(i + 1, left - k, c);
    }
    c.counts[q0[i]] = 0;
  };
  Configuration c0{p.initial_controller, std::vector<std::uint32_t>(p.num_user(), 0)};
  if (q0.empty()) {
    if (n == 0) seen.insert(c0), todo.push(c0);
  } else {
    init(0, n, c0);
  }
  while (!todo.empty()) {
    auto c = todo.front();
    todo.pop();
    for (const auto& d : explicit_successors(p, c))
      if (seen.insert(d).second) todo.push(d);
  }
  return seen;
}

// ---------------------------------------------------------------------------
// DFAs

/// Intersection non-emptiness by BFS over the synchronous product.
inline bool product_nonempty(const std::vector<Dfa>& ds) {
  std::vector<std::size_t> letter_of(ds.size());
  std::vector<std::uint32_t> start;
  for (const auto& d : ds) start.push_back(d.initial);
  std::set<std::vector<std::uint32_t>> seen{start};
  std::queue<std::vector<std::uint32_t>> todo;
  todo.push(start);
  while (!todo.empty()) {
    auto s = todo.front();
    todo.pop();
    bool all = true;
    for (std::size_t i = 0; i < ds.size(); ++i) all = all && ds[i].accepting[s[i]];
    if (all) return true;
    for (const auto& letter : ds[0].alphabet) {
      auto t = s;
      for (std::size_t i = 0; i < ds.size(); ++i) {
        auto l = std::find(ds[i].alphabet.begin(), ds[i].alphabet.end(), letter) - ds[i].alphabet.begin();
        t[i] = ds[i].delta[s[i]][static_cast<std::size_t>(l)];
      }
      if (seen.insert(t).second) todo.push(t);
    }
  }
  return false;
}

inline Dfa random_dfa(std::mt19937& rng, std::size_t max_states, const std::vector<std::string>& sigma,
                      double accept = 0.3) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_states);
  std::size_t n = n_dist(rng);
  std::uniform_int_distribution<std::uint32_t> s_dist(0, static_cast<std::uint32_t>(n - 1));
  std::bernoulli_distribution acc(accept);
  Dfa d;
  d.alphabet = sigma;
  for (std::size_t i = 0; i < n; ++i) {
    d.states.push_back("s" + std::to_string(i));
    d.accepting.push_back(acc(rng));
    d.delta.emplace_back();
    for (std::size_t l = 0; l < sigma.size(); ++l) d.delta.back().push_back(s_dist(rng));
  }
  d.initial = s_dist(rng);
  return d;
}

}  // namespace oracles
