#include "zeroone/crp.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "zeroone/semantics.hpp"

namespace zeroone {

void BudgetClock::check(std::size_t states) const {
  if (states > budget_.max_states)
    throw BudgetExceeded("state budget exhausted (" + std::to_string(budget_.max_states) + " states)");
  if (std::chrono::steady_clock::now() - start_ > budget_.timeout)
    throw BudgetExceeded("time budget exhausted (" + std::to_string(budget_.timeout.count()) + " ms)");
}

double BudgetClock::millis() const {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
}

std::vector<AbstractConfiguration> initial_abstract(const Protocol& p) {
  std::vector<AbstractConfiguration> out;
  UserMask q0 = p.initial_users;
  // Submasks of Q0 in increasing order, starting with the empty set.
  UserMask sub = 0;
  do {
    out.push_back({p.initial_controller, sub});
    sub = (sub - q0) & q0;
  } while (sub != 0);
  return out;
}

namespace {

using Parents = std::unordered_map<AbstractConfiguration, std::optional<AbstractConfiguration>,
                                   AbstractConfigurationHash>;

// BFS from the initial configurations; stops early once `goal` holds.
template <typename Goal>
std::optional<AbstractConfiguration> explore(const Protocol& p, const Budget& budget, Parents& parents,
                                             CrpStats& stats, Goal goal) {
  BudgetClock clock(budget);
  Semantics sem(p);
  std::vector<AbstractConfiguration> frontier;
  for (const auto& a : initial_abstract(p)) {
    parents.emplace(a, std::nullopt);
    frontier.push_back(a);
  }
  std::optional<AbstractConfiguration> found;
  for (const auto& a : frontier)
    if (goal(a)) {
      found = a;
      break;
    }
  while (!found && !frontier.empty()) {
    stats.frontier_peak = std::max(stats.frontier_peak, frontier.size());
    std::vector<AbstractConfiguration> next;
    for (const auto& a : frontier) {
      for (const auto& b : sem.abstract_successors(a)) {
        if (!parents.emplace(b, a).second) continue;
        next.push_back(b);
        if (!found && goal(b)) found = b;
      }
      clock.check(parents.size());
      if (found) break;
    }
    frontier = std::move(next);
  }
  stats.states = parents.size();
  stats.millis = clock.millis();
  return found;
}

}  // namespace

std::vector<AbstractConfiguration> reachable_abstract(const Protocol& p, const Budget& budget) {
  Parents parents;
  CrpStats stats;
  explore(p, budget, parents, stats, [](const AbstractConfiguration&) { return false; });
  std::vector<AbstractConfiguration> out;
  out.reserve(parents.size());
  for (const auto& [a, parent] : parents) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

CrpResult decide_crp(const Protocol& p, const Constraint& phi, const Budget& budget) {
  auto phi_alpha = abstract_constraint(phi);
  Parents parents;
  CrpResult r;
  auto hit = explore(p, budget, parents, r.stats,
                     [&](const AbstractConfiguration& a) { return eval_abstract(phi_alpha, a); });
  if (!hit) return r;
  r.reachable = true;
  r.satisfied_target = hit;
  for (std::optional<AbstractConfiguration> cur = hit; cur; cur = parents.at(*cur)) r.witness.push_back(*cur);
  std::reverse(r.witness.begin(), r.witness.end());
  return r;
}

std::uint64_t default_population_cap(const Protocol& p, const std::vector<AbstractConfiguration>& w,
                                     const Constraint& phi) {
  std::uint64_t a = std::max<std::uint64_t>(phi.max_threshold(), 1);
  std::uint64_t steps = w.empty() ? 0 : w.size() - 1;
  return a * p.num_user() * (steps + 1);
}

namespace {

// All count vectors with the given support summing to n.
void with_support(UserMask support, std::size_t nq, std::uint64_t n, std::vector<std::uint32_t>& counts,
                  StateIndex q, std::vector<std::vector<std::uint32_t>>& out) {
  while (q < nq && !has_user(support, q)) ++q;
  if (q == nq) {
    if (n == 0) out.push_back(counts);
    return;
  }
  UserMask rest = support & ~((user_bit(q) << 1) - 1);
  std::uint64_t later = std::popcount(rest);
  for (std::uint64_t k = 1; k + later <= n; ++k) {
    counts[q] = static_cast<std::uint32_t>(k);
    with_support(support, nq, n - k, counts, q + 1, out);
  }
  counts[q] = 0;
}

}  // namespace

std::optional<ConcreteWitness> concretize_witness(const Protocol& p, const std::vector<AbstractConfiguration>& w,
                                                  const Constraint& phi, std::uint64_t n_max,
                                                  const Budget& budget) {
  if (w.empty()) throw std::invalid_argument("concretize_witness: empty witness");
  BudgetClock clock(budget);
  Semantics sem(p);
  const auto nq = p.num_user();
  std::uint64_t n_min = std::popcount(w.front().occupied);
  for (std::uint64_t n = n_min; n <= n_max; ++n) {
    std::vector<std::vector<std::uint32_t>> starts;
    std::vector<std::uint32_t> scratch(nq, 0);
    with_support(w.front().occupied, nq, n, scratch, 0, starts);

    // layers[i]: configuration -> predecessor in layer i-1
    std::vector<std::unordered_map<Configuration, Configuration, ConfigurationHash>> layers(1);
    std::size_t states = 0;
    for (auto& counts : starts) {
      Configuration c{w.front().ctrl, std::move(counts)};
      layers[0].emplace(c, c);
    }
    states += layers[0].size();
    for (std::size_t i = 1; i < w.size() && !layers.back().empty(); ++i) {
      layers.emplace_back();
      auto& prev = layers[i - 1];
      auto& cur = layers[i];
      for (const auto& [c, pred] : prev) {
        for (const auto& d : sem.successors(c))
          if (alpha(d) == w[i]) cur.emplace(d, c);
        clock.check(states + cur.size());
      }
      states += cur.size();
    }
    if (layers.size() != w.size()) continue;
    // Deterministic pick among satisfying end points.
    std::optional<Configuration> end;
    for (const auto& [c, pred] : layers.back())
      if (eval_constraint(phi, c) && (!end || c < *end)) end = c;
    if (!end) continue;
    ConcreteWitness cw{n, {}};
    Configuration cur = *end;
    for (std::size_t i = w.size(); i-- > 0;) {
      cw.run.push_back(cur);
      cur = layers[i].at(cur);
    }
    std::reverse(cw.run.begin(), cw.run.end());
    return cw;
  }
  return std::nullopt;
}

Constraint encode_cover(const Protocol& p, std::string_view q) {
  auto i = p.find_user(q);
  if (!i) throw ConstraintError("unknown user state '" + std::string(q) + "'");
  return Constraint::geq(*i, 1);
}

Constraint encode_coverctrl(const Protocol& p, std::string_view c) {
  auto i = p.find_controller(c);
  if (!i) throw ConstraintError("unknown controller state '" + std::string(c) + "'");
  return Constraint::ctrl_eq(*i);
}

Constraint encode_coverability(const Protocol& p, const Configuration& cfg) {
  if (cfg.counts.size() != p.num_user()) throw ConstraintError("configuration does not match the protocol");
  std::vector<Constraint> parts;
  for (StateIndex q = 0; q < cfg.counts.size(); ++q)
    if (cfg.counts[q] > 0) parts.push_back(Constraint::geq(q, cfg.counts[q]));
  if (parts.empty()) throw ConstraintError("coverability of the empty configuration has no atoms");
  return conj_all(parts);
}

Constraint encode_target(const Protocol& p, std::string_view q) {
  auto i = p.find_user(q);
  if (!i) throw ConstraintError("unknown user state '" + std::string(q) + "'");
  std::vector<Constraint> parts;
  for (StateIndex r = 0; r < p.num_user(); ++r)
    if (r != *i) parts.push_back(Constraint::zero(r));
  if (parts.empty()) throw ConstraintError("target over a single user state has no atoms");
  return conj_all(parts);
}

Constraint encode_named_problem(const Protocol& p, std::string_view spec) {
  auto open = spec.find('(');
  if (open == std::string_view::npos || spec.back() != ')')
    throw ConstraintError("expected name(argument): '" + std::string(spec) + "'");
  auto name = spec.substr(0, open);
  auto arg = spec.substr(open + 1, spec.size() - open - 2);
  if (name == "cover") return encode_cover(p, arg);
  if (name == "coverctrl") return encode_coverctrl(p, arg);
  if (name == "target") return encode_target(p, arg);
  if (name == "coverability") {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : arg) {
      if (ch == ',') {
        parts.push_back(cur);
        cur.clear();
      } else if (ch != ' ') {
        cur += ch;
      }
    }
    parts.push_back(cur);
    // An optional leading controller state is ignored by the encoding.
    if (!parts.empty() && p.find_controller(parts.front()) && parts.size() == p.num_user() + 1)
      parts.erase(parts.begin());
    if (parts.size() != p.num_user()) throw ConstraintError("coverability expects one count per user state");
    Configuration cfg{p.initial_controller, {}};
    for (const auto& s : parts) {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ConstraintError("bad count '" + s + "'");
      cfg.counts.push_back(static_cast<std::uint32_t>(std::stoul(s)));
    }
    return encode_coverability(p, cfg);
  }
  throw ConstraintError("unknown problem '" + std::string(name) + "'");
}

nlohmann::json to_json(const Protocol& p, const AbstractConfiguration& a) {
  nlohmann::json occ = nlohmann::json::array();
  for (StateIndex q = 0; q < p.num_user(); ++q)
    if (has_user(a.occupied, q)) occ.push_back(p.user_states[q]);
  return {{"ctrl", p.controller_states.at(a.ctrl)}, {"occupied", occ}};
}

nlohmann::json to_json(const Protocol& p, const Configuration& c) {
  nlohmann::json counts = nlohmann::json::object();
  for (StateIndex q = 0; q < p.num_user(); ++q) counts[p.user_states[q]] = c.counts[q];
  return {{"ctrl", p.controller_states.at(c.ctrl)}, {"counts", counts}};
}

nlohmann::json crp_report(const Protocol& p, const CrpResult& r, const std::optional<ConcreteWitness>& concrete) {
  nlohmann::json j;
  j["reachable"] = r.reachable;
  j["witness"] = nlohmann::json::array();
  for (const auto& a : r.witness) j["witness"].push_back(to_json(p, a));
  if (concrete) {
    nlohmann::json run = nlohmann::json::array();
    for (const auto& c : concrete->run) run.push_back(to_json(p, c));
    j["concrete"] = {{"n", concrete->population}, {"run", run}};
  } else {
    j["concrete"] = nullptr;
  }
  j["stats"] = {{"states", r.stats.states}, {"millis", r.stats.millis}};
  return j;
}

}  // namespace zeroone
