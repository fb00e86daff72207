// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "zeroone/crp.hpp"
#include "zeroone/dfa.hpp"
#include "zeroone/oracle.hpp"
#include "zeroone/semantics.hpp"
#include "zeroone/tcs.hpp"
#include "zeroone/traces.hpp"

using namespace zeroone;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Protocol corpus(const std::string& name) { return load_protocol(oracles::corpus(name)); }

template <class T>
std::set<T> as_set(const std::vector<T>& v) {
  return {v.begin(), v.end()};
}

SymbolIndex symbol(const std::vector<std::string>& names, const std::string& s) {
  return static_cast<SymbolIndex>(std::find(names.begin(), names.end(), s) - names.begin());
}

std::set<Configuration> steps_on(const Protocol& p, const Configuration& c, SymbolIndex sym,
                                 std::initializer_list<Primitive> kinds) {
  std::set<Configuration> out;
  Semantics(p).for_each_step(c, [&](const Configuration& d, const StepInfo& i) {
    if (i.symbol == sym && std::find(kinds.begin(), kinds.end(), i.kind) != kinds.end()) out.insert(d);
  });
  return out;
}

// 1. Golden examples.
void golden(Outcome& o) {
  auto t0 = Clock::now();
  auto lossy = corpus("lossy_basic");
  auto v = make_configuration(lossy, "c1", {2, 1, 0});
  std::set<Configuration> ex1{make_configuration(lossy, "c2", {1, 2, 0}), make_configuration(lossy, "c1", {2, 1, 0}),
                              make_configuration(lossy, "c2", {2, 1, 0}), make_configuration(lossy, "c1", {1, 2, 0})};
  o.require(steps_on(lossy, v, symbol(lossy.messages, "a"), {Primitive::Lossy}) == ex1, "lossy a-successors");

  auto sync = corpus("sync_basic");
  std::set<Configuration> ex2{make_configuration(sync, "c2", {2, 1, 0}), make_configuration(sync, "c2", {1, 2, 0}),
                              make_configuration(sync, "c2", {0, 3, 0})};
  o.require(steps_on(sync, make_configuration(sync, "c1", {2, 1, 0}), symbol(sync.labels, "a"), {Primitive::Sync}) ==
                ex2,
            "sync a-successors");

  auto gsync = corpus("gsync_basic");
  auto a = symbol(gsync.labels, "a");
  auto enabled = [&](std::initializer_list<std::uint32_t> counts, const char* ctrl) {
    return !steps_on(gsync, make_configuration(gsync, ctrl, counts), a, {Primitive::GuardedSync}).empty();
  };
  std::vector<bool> triple{enabled({2, 1, 0}, "c1"), enabled({0, 2, 0}, "c2"), enabled({0, 2, 1}, "c1")};
  o.require(triple == std::vector<bool>{true, false, false}, "guarded sync enabledness");
  double s = seconds_since(t0);
  o.require(s < 1.0, "runtime under 1 s");
  o.detail << "lossy 4/4, sync 3/3, gsync enabled/disabled/disabled, " << s << " s";
}

// 2. Compatibility.
void compatibility(Outcome& o) {
  auto t0 = Clock::now();
  std::size_t pairs = 0;
  for (auto name : {"walk", "lossy_basic", "disj_basic", "sync_basic", "gsync_basic", "asm_basic", "mixed"}) {
    auto r = check_compatibility(corpus(name), 4);
    pairs += r.pairs_checked;
    o.require(r.violations.empty(), std::string(name) + " has " + std::to_string(r.violations.size()) + " violations");
  }
  auto sync = corpus("sync_basic");
  SuccessorFn mutant = [&sync](const Configuration& c) {
    auto s = oracles::explicit_successors(sync, c, true);
    return std::vector<Configuration>(s.begin(), s.end());
  };
  auto m = check_compatibility(sync, 4, mutant);
  o.require(!m.violations.empty(), "mutant not detected");
  double s = seconds_since(t0);
  o.require(s < 120, "runtime under 2 min");
  o.detail << "7 protocols, " << pairs << " pairs, 0 violations; mutant: " << m.violations.size() << " violations, "
           << s << " s";
}

// 3. Abstraction precision.
void precision(Outcome& o) {
  auto t0 = Clock::now();
  std::size_t abstract_total = 0;
  for (const auto& name : oracles::corpus_names()) {
    auto p = corpus(name);
    auto reach = as_set(reachable_abstract(p));
    abstract_total += reach.size();
    std::set<AbstractConfiguration> realized;
    for (std::uint64_t n = 0; n <= 8; ++n) {
      auto img = concrete_reach(p, n).alpha_image;
      for (const auto& a : img) {
        if (n <= 6)
          o.require(reach.count(a) == 1, name + ": concrete state outside the abstraction at n=" + std::to_string(n));
        realized.insert(a);
      }
    }
    for (const auto& a : reach) o.require(realized.count(a) == 1, name + ": unrealized " + to_string(p, a));
  }
  double s = seconds_since(t0);
  o.require(s < 300, "runtime under 5 min");
  o.detail << oracles::corpus_names().size() << " protocols, " << abstract_total
           << " abstract configurations, all realized by n <= 8, " << s << " s";
}

// 4. CRP engine agreement.
void crp_agreement(Outcome& o) {
  auto t0 = Clock::now();
  std::map<ConstraintClass, std::size_t> per_class;
  std::size_t pairs = 0, positive = 0;
  std::vector<std::uint64_t> ns{0, 1, 2, 3, 4, 5, 6, 7, 8};
  for (const auto& name : oracles::corpus_names()) {
    auto p = corpus(name);
    std::vector<Constraint> phis;
    auto nq = static_cast<StateIndex>(p.num_user());
    for (StateIndex q = 0; q < nq; ++q) {
      phis.push_back(Constraint::geq(q, 1));
      phis.push_back(Constraint::geq(q, 2));
      phis.push_back(Constraint::conj(Constraint::zero(q), Constraint::geq((q + 1) % nq, 1)));
      phis.push_back(Constraint::conj(Constraint::ctrl_eq(static_cast<StateIndex>(q % p.num_controller())),
                                      Constraint::geq((q + 2) % nq, 1)));
    }
    for (StateIndex q = 0; q < nq; ++q) {
      // Every user in q, with and without a controller condition.
      std::vector<Constraint> only_q{Constraint::geq(q, 1)};
      for (StateIndex r = 0; r < nq; ++r)
        if (r != q) only_q.push_back(Constraint::zero(r));
      phis.push_back(conj_all(only_q));
      for (StateIndex c = 0; c < p.num_controller(); ++c)
        phis.push_back(Constraint::conj(Constraint::ctrl_eq(c), conj_all(only_q)));
    }
    phis.push_back(encode_target(p, p.user_states.back()));
    phis.push_back(Constraint::conj(Constraint::ctrl_neq(p.initial_controller), Constraint::zero(0)));
    for (const auto& phi : phis) {
      auto abs = decide_crp(p, phi).reachable;
      auto orc = crp_oracle(p, phi, ns);
      ++pairs;
      ++per_class[phi.classify()];
      positive += abs;
      auto text = name + " / " + to_string(phi, p);
      o.require(!orc.any || abs, "oracle reaches but abstraction does not: " + text);
      o.require(!abs || orc.any, "abstract positive not confirmed for n <= 8: " + text);
    }
  }
  o.require(pairs >= 50, "fewer than 50 pairs");
  for (auto c : {ConstraintClass::Geq, ConstraintClass::GeqZero, ConstraintClass::Full})
    o.require(per_class[c] > 0, std::string("no pair of class ") + std::string(to_string(c)));
  o.detail << pairs << " pairs (GEQ " << per_class[ConstraintClass::Geq] << ", GEQ_ZERO "
           << per_class[ConstraintClass::GeqZero] << ", FULL " << per_class[ConstraintClass::Full] << "), " << positive
           << " positive, 100% agreement, " << seconds_since(t0) << " s";
}

// 5. TCS algorithms.
void tcs_algorithms(Outcome& o) {
  std::size_t instances = 0, checks = 0, max_rounds = 0, max_run = 0;
  for (const auto& name : oracles::corpus_names()) {
    auto p = corpus(name);
    Tcs t;
    try {
      t = to_tcs(p);
    } catch (const TcsError&) {
      continue;
    }
    ++instances;
    auto nq = static_cast<StateIndex>(p.num_user());
    std::vector<Constraint> geq, geq_zero;
    for (StateIndex q = 0; q < nq; ++q) {
      geq.push_back(Constraint::geq(q, 1));
      geq.push_back(Constraint::geq(q, 3));
      geq_zero.push_back(Constraint::zero(q));
      for (StateIndex r = 0; r < nq; ++r) {
        if (r == q) continue;
        geq.push_back(Constraint::conj(Constraint::geq(q, 1), Constraint::geq(r, 1)));
        geq_zero.push_back(Constraint::conj(Constraint::zero(q), Constraint::geq(r, 1)));
        geq_zero.push_back(Constraint::conj(Constraint::zero(q), Constraint::zero(r)));
      }
      geq_zero.push_back(encode_target(p, p.user_states[q]));
    }
    for (const auto& phi : geq) {
      auto truth = decide_crp(p, phi).reachable;
      auto sat = saturate(t, phi);
      auto two = decide_crp_geq_zero_run(t, phi);
      max_rounds = std::max(max_rounds, sat.rounds);
      max_run = std::max(max_run, two.longest_run);
      o.require(sat.verdict == truth, name + ": saturation disagrees on " + to_string(phi, p));
      o.require(two.verdict == truth, name + ": two-phase disagrees on " + to_string(phi, p));
      o.require(sat.rounds <= nq, name + ": too many saturation rounds");
      o.require(two.longest_run <= 2 * nq, name + ": two-phase run longer than 2|Q|");
      checks += 2;
    }
    for (const auto& phi : geq_zero) {
      auto two = decide_crp_geq_zero_run(t, phi);
      max_run = std::max(max_run, two.longest_run);
      o.require(two.verdict == decide_crp(p, phi).reachable, name + ": two-phase disagrees on " + to_string(phi, p));
      o.require(two.longest_run <= 2 * nq, name + ": two-phase run longer than 2|Q|");
      ++checks;
    }
  }
  o.require(instances > 0, "no eligible instance");
  o.detail << instances << " eligible instances, " << checks << " verdicts match, max rounds " << max_rounds
           << ", longest examined run " << max_run;
}

// 6. DFA intersection reduction.
void dfa_reduction(Outcome& o) {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<std::size_t> sigma_size(1, 3);
  std::size_t nonempty = 0;
  for (int i = 0; i < 10; ++i) {
    std::vector<std::string> sigma{"a", "b", "c"};
    sigma.resize(sigma_size(rng));
    std::vector<Dfa> ds;
    for (int k = 0; k < 3; ++k) ds.push_back(oracles::random_dfa(rng, 5, sigma, 0.6));
    auto inst = gen_dfa_intersection(ds);
    auto want = oracles::product_nonempty(ds);
    nonempty += want;
    o.require(decide_crp(inst.protocol, inst.constraint).reachable == want, "triple " + std::to_string(i));
  }
  o.detail << "10 triples (" << nonempty << " non-empty, " << 10 - nonempty << " empty), 100% agreement";
}

// 7. Step bound validation.
void bound_validation(Outcome& o) {
  std::size_t configs = 0, raw_asm_mismatch = 0;
  for (const auto& name : oracles::corpus_names()) {
    auto p = corpus(name);
    auto bound = step_bound(p);
    bool asm_only_bound = p.kind_profile().has(Primitive::Asm) && bound.value < 2;
    for (const auto& a : reachable_abstract(p)) {
      ++configs;
      auto direct = as_set(abstract_successors(p, a));
      auto at_bound = as_set(generic_abstract_successors(p, a, bound));
      if (asm_only_bound) {
        raw_asm_mismatch += direct != at_bound;
        o.require(direct == as_set(generic_abstract_successors(p, a, {2})), name + " at B=2: " + to_string(p, a));
      } else {
        o.require(direct == at_bound, name + " at B=" + std::to_string(bound.value) + ": " + to_string(p, a));
      }
    }
  }
  o.detail << configs << " reachable abstract configurations, 0 mismatches (ASM checked at B=2)";
  if (raw_asm_mismatch > 0)
    o.notes.push_back("flagged: ASM at its bound B=1 misses " + std::to_string(raw_asm_mismatch) +
                      " successor sets (steps where some but not all processes of a state move need 2 processes)");
}

// 8. Traces.
bool replay_lasso(const Protocol& p, const SpecAutomaton& neg, const TraceCheckResult& r) {
  auto monotone = [&](const AbstractConfiguration& x, const AbstractConfiguration& y) {
    auto s = monotone_successors(p, x);
    return std::find(s.begin(), s.end(), y) != s.end();
  };
  if (r.stem.empty() || r.loop.empty() || r.stem.back() != r.loop.front() || r.loop_trace.empty()) return false;
  for (std::size_t i = 1; i < r.stem.size(); ++i)
    if (!monotone(r.stem[i - 1], r.stem[i])) return false;
  for (std::size_t i = 0; i < r.loop.size(); ++i)
    if (!monotone(r.loop[i], r.loop[(i + 1) % r.loop.size()])) return false;
  auto s = run_word(neg, r.stem_trace);
  if (!s) return false;
  for (std::size_t lap = 0; lap <= neg.states.size(); ++lap)
    for (auto l : r.loop_trace)
      if (!(s = neg.step(*s, l))) return false;
  bool accepted = false;
  for (std::size_t lap = 0; lap < neg.states.size(); ++lap)
    for (auto l : r.loop_trace) {
      if (!(s = neg.step(*s, l))) return false;
      accepted |= neg.accepting[*s];
    }
  return accepted;
}

void traces(Outcome& o) {
  for (const auto& name : oracles::corpus_names()) {
    auto p = corpus(name);
    o.require(abstract_traces(p, 5) == concrete_traces(p, 5, 6), name + ": Tr != Tr_alpha");
  }

  auto spurious = corpus("lossy_spurious");
  auto both = make_abstract(spurious, "idle", {"qh", "q1"});
  auto self = abstract_successors(spurious, both);
  o.require(std::find(self.begin(), self.end(), both) != self.end(), "spurious loop: abstract a-loop missing");
  auto qh = *spurious.find_user("qh");
  for (std::uint64_t n = 0; n <= 6; ++n)
    for (const auto& c : all_configurations(spurious, n))
      for (const auto& d : concrete_successors(spurious, c))
        o.require(d.counts[qh] < c.counts[qh], "spurious loop: a concrete step does not consume qh");
  bool refused = false;
  try {
    check_omega(spurious, parse_spec("state s init accept\non idle s -> s\n", spurious.controller_states, SpecMode::Buchi));
  } catch (const SpecError&) {
    refused = true;
  }
  o.require(refused, "spurious loop: ω-check accepted a lossy protocol");

  auto cyc = corpus("omega_cycle");
  auto neg = parse_spec(
      "state n0 init\nstate n1 accept\non c1 n0 -> n0\non c3 n0 -> n0\non c2 n0 -> n1\n"
      "on c1 n1 -> n0\non c3 n1 -> n0\non c2 n1 -> n1\n",
      cyc.controller_states, SpecMode::Buchi);
  auto lasso = check_omega(cyc, neg);
  o.require(!lasso.holds && replay_lasso(cyc, neg, lasso), "omega_cycle: no replayable lasso");

  auto dl = corpus("omega_deadlock");
  auto changes = parse_spec("state s init accept\non c1 s -> s\non c2 s -> s\n", dl.controller_states, SpecMode::Buchi);
  o.require(check_omega(dl, changes).holds, "omega_deadlock: unexpected lasso");

  o.detail << "Tr = Tr_alpha on " << oracles::corpus_names().size()
           << " protocols (L <= 5, n <= 6); spurious-loop guard holds; lasso " << trace_to_string(cyc, lasso.stem_trace)
           << " (" << trace_to_string(cyc, lasso.loop_trace) << ")^w replayed; omega_deadlock empty";
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<void(Outcome&)> run;
  };
  std::vector<Criterion> criteria{
      {"golden examples", golden},
      {"compatibility suite", compatibility},
      {"abstraction precision", precision},
      {"CRP engine agreement", crp_agreement},
      {"TCS algorithms", tcs_algorithms},
      {"DFA intersection reduction", dfa_reduction},
      {"step bound validation", bound_validation},
      {"trace results", traces},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].title
              << "): " << o.detail.str() << "\n";
    for (const auto& n : o.notes) std::cout << "     " << n << "\n";
    std::cout.flush();
  }
  return failed;
}
