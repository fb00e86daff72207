#include "zeroone/oracle.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "zeroone/semantics.hpp"

namespace zeroone {

namespace {

void compositions(std::size_t nq, UserMask allowed, std::uint64_t n, StateIndex q, std::vector<std::uint32_t>& counts,
                  std::vector<std::vector<std::uint32_t>>& out) {
  if (q == nq) {
    if (n == 0) out.push_back(counts);
    return;
  }
  if (!has_user(allowed, q)) {
    compositions(nq, allowed, n, q + 1, counts, out);
    return;
  }
  for (std::uint64_t k = 0; k <= n; ++k) {
    counts[q] = static_cast<std::uint32_t>(k);
    compositions(nq, allowed, n - k, q + 1, counts, out);
  }
  counts[q] = 0;
}

std::vector<std::vector<std::uint32_t>> count_vectors(std::size_t nq, UserMask allowed, std::uint64_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> counts(nq, 0);
  compositions(nq, allowed, n, 0, counts, out);
  return out;
}

UserMask all_users(std::size_t nq) { return nq == 64 ? ~UserMask{0} : (UserMask{1} << nq) - 1; }

SuccessorFn default_successors(const Protocol& p) {
  auto sem = std::make_shared<Semantics>(p);
  return [sem](const Configuration& c) { return sem->successors(c); };
}

}  // namespace

std::vector<Configuration> initial_configurations(const Protocol& p, std::uint64_t n) {
  std::vector<Configuration> out;
  for (auto& v : count_vectors(p.num_user(), p.initial_users, n)) out.push_back({p.initial_controller, std::move(v)});
  return out;
}

std::vector<Configuration> all_configurations(const Protocol& p, std::uint64_t n) {
  std::vector<Configuration> out;
  auto vectors = count_vectors(p.num_user(), all_users(p.num_user()), n);
  for (StateIndex c = 0; c < p.num_controller(); ++c)
    for (const auto& v : vectors) out.push_back({c, v});
  return out;
}

OracleReport concrete_reach(const Protocol& p, std::uint64_t n, const Budget& budget, SuccessorFn succ) {
  if (!succ) succ = default_successors(p);
  BudgetClock clock(budget);
  std::unordered_set<Configuration, ConfigurationHash> seen;
  std::vector<Configuration> frontier;
  for (auto& c : initial_configurations(p, n))
    if (seen.insert(c).second) frontier.push_back(c);
  while (!frontier.empty()) {
    std::vector<Configuration> next;
    for (const auto& c : frontier) {
      for (auto& d : succ(c))
        if (seen.insert(d).second) next.push_back(std::move(d));
      clock.check(seen.size());
    }
    frontier = std::move(next);
  }
  OracleReport r;
  r.population = n;
  r.reachable.assign(seen.begin(), seen.end());
  std::sort(r.reachable.begin(), r.reachable.end());
  std::set<AbstractConfiguration> image;
  for (const auto& c : r.reachable) image.insert(alpha(c));
  r.alpha_image.assign(image.begin(), image.end());
  return r;
}

OracleReport check_compatibility(const Protocol& p, std::uint64_t n_max, SuccessorFn succ, const Budget& budget) {
  if (!succ) succ = default_successors(p);
  BudgetClock clock(budget);
  OracleReport r;
  r.population = n_max;

  // Steps and their inverse over every configuration with at most n_max users.
  std::vector<Configuration> configs;
  for (std::uint64_t n = 0; n <= n_max; ++n)
    for (auto& c : all_configurations(p, n)) configs.push_back(std::move(c));
  std::unordered_map<Configuration, std::vector<Configuration>, ConfigurationHash> post, pre;
  for (const auto& c : configs) {
    auto s = succ(c);
    for (const auto& d : s) pre[d].push_back(c);
    post.emplace(c, std::move(s));
    clock.check(post.size());
  }
  // Configurations grouped by (controller, support): ⪯₀ only relates members of one group.
  std::map<std::pair<StateIndex, UserMask>, std::vector<const Configuration*>> groups;
  for (const auto& c : configs) groups[{c.ctrl, c.support()}].push_back(&c);
  auto bigger = [&](const Configuration& x) -> const std::vector<const Configuration*>& {
    return groups.at({x.ctrl, x.support()});
  };
  static const std::vector<Configuration> kNone;

  for (const auto& x : configs) {
    const auto& steps = post.at(x);
    for (const auto* y : bigger(x)) {
      if (!wqo_leq(x, *y)) continue;
      ++r.pairs_checked;
      const auto& ysteps = post.at(*y);
      for (const auto& xs : steps) {
        bool ok = std::any_of(ysteps.begin(), ysteps.end(), [&](const Configuration& ys) { return wqo_leq(xs, ys); });
        if (!ok) r.violations.push_back({Violation::Kind::Forward, x, xs, *y});
      }
    }
    for (const auto& xs : steps) {
      for (const auto* ys : bigger(xs)) {
        if (!wqo_leq(xs, *ys)) continue;
        ++r.pairs_checked;
        auto it = pre.find(*ys);
        const auto& preds = it == pre.end() ? kNone : it->second;
        bool ok = std::any_of(preds.begin(), preds.end(), [&](const Configuration& y) { return wqo_leq(x, y); });
        if (!ok) r.violations.push_back({Violation::Kind::Backward, x, xs, *ys});
      }
    }
    clock.check(post.size());
  }
  return r;
}

CrpOracleResult crp_oracle(const Protocol& p, const Constraint& phi, const std::vector<std::uint64_t>& populations,
                           const Budget& budget) {
  CrpOracleResult out;
  for (auto n : populations) {
    auto rep = concrete_reach(p, n, budget);
    bool hit = std::any_of(rep.reachable.begin(), rep.reachable.end(),
                           [&](const Configuration& c) { return eval_constraint(phi, c); });
    out.per_population.emplace_back(n, hit);
    out.any = out.any || hit;
  }
  return out;
}

std::set<Trace> concrete_traces(const Protocol& p, std::size_t max_len, std::uint64_t max_n, const Budget& budget) {
  Semantics sem(p);
  BudgetClock clock(budget);
  std::set<Trace> traces;
  if (max_len == 0) return traces;
  for (std::uint64_t n = 0; n <= max_n; ++n) {
    // (configuration, trace so far); a trace stops growing at max_len letters,
    // after which only the controller's current letter matters.
    std::set<std::pair<Configuration, Trace>> seen;
    std::vector<std::pair<Configuration, Trace>> frontier;
    for (auto& c : initial_configurations(p, n)) {
      Trace t{c.ctrl};
      if (seen.emplace(c, t).second) frontier.emplace_back(c, t);
    }
    while (!frontier.empty()) {
      std::vector<std::pair<Configuration, Trace>> next;
      for (const auto& [c, t] : frontier) {
        traces.insert(t);
        if (t.size() == max_len) continue;  // longer traces are out of range
        for (const auto& d : sem.successors(c)) {
          Trace u = t;
          if (d.ctrl != t.back()) u.push_back(d.ctrl);
          if (seen.emplace(d, u).second) next.emplace_back(d, std::move(u));
        }
      }
      clock.check(seen.size());
      frontier = std::move(next);
    }
  }
  return traces;
}

}  // namespace zeroone
