#include "zeroone/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

#include <CLI11.hpp>
#include <json.hpp>

#include "zeroone/dfa.hpp"
#include "zeroone/oracle.hpp"
#include "zeroone/tcs.hpp"
#include "zeroone/traces.hpp"

namespace zeroone::cli {

namespace {

using nlohmann::json;

std::optional<std::uint64_t> env_number(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  auto n = std::strtoull(v, &end, 10);
  if (*end != '\0') throw std::invalid_argument(std::string(name) + " is not a number: '" + v + "'");
  return n;
}

Constraint read_constraint(const Protocol& p, const std::string& text) {
  static const std::regex named(R"(^\s*(cover|coverctrl|coverability|target)\s*\()");
  if (std::regex_search(text, named)) return encode_named_problem(p, text);
  return parse_constraint(text, p);
}

json names(const Protocol& p, const Trace& t) {
  json j = json::array();
  for (auto c : t) j.push_back(p.controller_states.at(c));
  return j;
}

json occupied(const Protocol& p, UserMask m) {
  json j = json::array();
  for (StateIndex q = 0; q < p.num_user(); ++q)
    if (has_user(m, q)) j.push_back(p.user_states[q]);
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CheckArgs {
  std::string protocol, constraint, engine = "abstract";
  std::optional<std::uint64_t> population;
  bool concretize = false;
};

int cmd_check(const CheckArgs& a, const Limits& lim, std::ostream& out, std::ostream& err) {
  auto p = load_protocol(a.protocol);
  auto phi = read_constraint(p, a.constraint);
  json j;
  bool verdict = false;
  if (a.engine == "abstract") {
    auto r = decide_crp(p, phi, lim.budget);
    std::optional<ConcreteWitness> cw;
    std::string status = "not requested";
    if (a.concretize && r.reachable) {
      auto n_max = a.population.value_or(default_population_cap(p, r.witness, phi));
      cw = concretize_witness(p, r.witness, phi, n_max, lim.budget);
      status = cw ? "found" : "not found up to n=" + std::to_string(n_max);
    }
    j = crp_report(p, r, cw);
    if (a.concretize) j["concrete_status"] = status;
    verdict = r.reachable;
  } else if (a.engine == "tcs") {
    Tcs t;
    try {
      t = to_tcs(p);
    } catch (const TcsError& e) {
      err << "error: " << e.what() << "\n";
      return kError;
    }
    auto cls = phi.classify();
    if (cls == ConstraintClass::Full) {
      err << "error: the tcs engine handles constraints of class GEQ and GEQ_ZERO only\n";
      return kError;
    }
    if (cls == ConstraintClass::Geq) {
      auto r = saturate(t, phi);
      j = {{"reachable", r.verdict}, {"algorithm", "saturation"}, {"support", occupied(p, r.support)},
           {"rounds", r.rounds}};
      verdict = r.verdict;
    } else {
      auto r = decide_crp_geq_zero_run(t, phi);
      json run = json::array();
      for (auto s : r.run) run.push_back(occupied(p, s));
      j = {{"reachable", r.verdict}, {"algorithm", "two-phase"}, {"witness", run},
           {"longest_run", r.longest_run}, {"nodes", r.nodes}};
      verdict = r.verdict;
    }
  } else {
    auto cap = a.population.value_or(lim.max_population);
    std::vector<std::uint64_t> ns;
    for (std::uint64_t n = 0; n <= cap; ++n) ns.push_back(n);
    auto r = crp_oracle(p, phi, ns, lim.budget);
    json per = json::array();
    for (auto [n, hit] : r.per_population) per.push_back({{"n", n}, {"reachable", hit}});
    j = {{"reachable", r.any}, {"bounded", true}, {"cap", cap}, {"populations", per}};
    verdict = r.any;
  }
  j["engine"] = a.engine;
  j["class"] = std::string(to_string(phi.classify()));
  j["constraint"] = to_string(phi, p);
  out << j.dump(2) << "\n";
  return verdict ? kPositive : kNegative;
}

struct TracesArgs {
  std::string protocol, spec;
  bool omega = false;
  std::size_t track = 0;
};

std::vector<std::vector<StateIndex>> tracked_assignments(const Protocol& p, std::size_t k) {
  std::vector<StateIndex> q0;
  for (StateIndex q = 0; q < p.num_user(); ++q)
    if (has_user(p.initial_users, q)) q0.push_back(q);
  std::vector<std::vector<StateIndex>> out{{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<StateIndex>> next;
    for (const auto& v : out)
      for (auto q : q0) {
        next.push_back(v);
        next.back().push_back(q);
      }
    out = std::move(next);
  }
  return out;
}

int cmd_traces(const TracesArgs& a, const Limits& lim, std::ostream& out) {
  auto p = load_protocol(a.protocol);
  auto text = read_file(a.spec);
  auto alphabet = a.track == 0 ? p.controller_states : product_alphabet(p, a.track);
  json j;
  TraceCheckResult r;
  const Protocol* shown = &p;
  Protocol prod;
  if (!a.omega) {
    auto spec = parse_spec(text, alphabet, SpecMode::Safety);
    r = a.track == 0 ? check_safety(p, spec, lim.budget) : check_safety_tracked(p, a.track, spec, lim.budget);
    if (a.track > 0) {
      prod = controller_product(p, a.track);
      shown = &prod;
    }
    j = {{"holds", r.holds}, {"mode", "safety"}, {"product_states", r.product_states}};
    if (!r.holds) j["counterexample"] = names(*shown, r.counterexample);
  } else {
    auto spec = parse_spec(text, alphabet, SpecMode::Buchi);
    if (a.track == 0) {
      r = check_omega(p, spec, lim.budget);
    } else {
      if (p.initial_users == 0) throw SpecError("no initial user state to track");
      for (const auto& init : tracked_assignments(p, a.track)) {
        prod = controller_product(p, a.track, init);
        shown = &prod;
        r = check_omega(prod, spec, lim.budget);
        if (!r.holds) break;
      }
    }
    j = {{"holds", r.holds}, {"mode", "omega"}, {"product_states", r.product_states}};
    if (!r.holds) {
      j["stem"] = names(*shown, r.stem_trace);
      j["loop"] = names(*shown, r.loop_trace);
    }
  }
  out << j.dump(2) << "\n";
  return r.holds ? kPositive : kNegative;
}

int cmd_gen_dfa(const std::vector<std::string>& files, const std::string& out_dir, std::ostream& out) {
  std::vector<Dfa> automata;
  for (const auto& f : files) automata.push_back(load_dfa(f));
  auto inst = gen_dfa_intersection(automata);
  std::filesystem::create_directories(out_dir);
  auto proto_path = std::filesystem::path(out_dir) / "protocol.proto";
  auto phi_path = std::filesystem::path(out_dir) / "constraint.txt";
  std::ofstream(proto_path) << serialize_protocol(inst.protocol);
  std::ofstream(phi_path) << to_string(inst.constraint, inst.protocol) << "\n";
  out << json{{"protocol", proto_path.string()}, {"constraint", phi_path.string()},
              {"user_states", inst.protocol.num_user()}}
             .dump(2)
      << "\n";
  return kPositive;
}

json config_json(const Protocol& p, const Configuration& c) { return to_json(p, c); }

int cmd_compat(const std::string& path, std::uint64_t n, const Limits& lim, std::ostream& out) {
  auto p = load_protocol(path);
  auto r = check_compatibility(p, n, {}, lim.budget);
  json examples = json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < 5; ++i) {
    const auto& v = r.violations[i];
    examples.push_back({{"kind", v.kind == Violation::Kind::Forward ? "forward" : "backward"},
                        {"small", config_json(p, v.small)},
                        {"small_step", config_json(p, v.small_step)},
                        {"big", config_json(p, v.big)}});
  }
  out << json{{"compatible", r.violations.empty()}, {"n_max", n}, {"pairs_checked", r.pairs_checked},
              {"violations", r.violations.size()}, {"examples", examples}}
             .dump(2)
      << "\n";
  return r.violations.empty() ? kPositive : kNegative;
}

}  // namespace

Limits limits_from_env() {
  Limits l;
  if (auto v = env_number("ZEROONE_MAX_STATES")) l.budget.max_states = *v;
  if (auto v = env_number("ZEROONE_TIMEOUT_MS")) l.budget.timeout = std::chrono::milliseconds(*v);
  if (auto v = env_number("ZEROONE_MAX_POPULATION")) l.max_population = *v;
  return l;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Limits lim;
  try {
    lim = limits_from_env();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }

  CLI::App app{"Parameterized verification via the 01-counter abstraction", "zeroone"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::size_t> max_states;
  std::optional<std::uint64_t> timeout_ms, max_population;
  app.add_option("--max-states", max_states, "State budget per search (default 1000000)");
  app.add_option("--timeout-ms", timeout_ms, "Wall-clock budget per search in ms (default 60000)");
  app.add_option("--max-population", max_population, "Population cap of the oracle engine (default 8)");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Decide a cardinality reachability query");
  c->add_option("-p,--protocol", check.protocol, "Protocol file")->required()->check(CLI::ExistingFile);
  c->add_option("-c,--constraint", check.constraint, "Constraint, e.g. \"#q3 >= 1 & ctrl = c2\" or cover(q3)")
      ->required();
  c->add_option("--engine", check.engine, "abstract | tcs | oracle")
      ->check(CLI::IsMember({"abstract", "tcs", "oracle"}));
  c->add_option("--population", check.population, "Oracle cap, or concretization cap with --concretize");
  c->add_flag("--concretize", check.concretize, "Search a concrete run for a positive verdict");

  TracesArgs traces;
  auto* t = app.add_subcommand("traces", "Check controller traces against a specification automaton");
  t->add_option("-p,--protocol", traces.protocol, "Protocol file")->required()->check(CLI::ExistingFile);
  t->add_option("-s,--spec", traces.spec, "Specification automaton")->required()->check(CLI::ExistingFile);
  t->add_flag("--omega", traces.omega, "Spec is a Büchi automaton for the negated ω-property");
  t->add_option("--track", traces.track, "Number of tracked users");

  std::string tcs_protocol;
  auto* tcs = app.add_subcommand("tcs", "Transition counter systems");
  tcs->require_subcommand(1);
  auto* show = tcs->add_subcommand("show", "Print the minimal steps");
  show->add_option("-p,--protocol", tcs_protocol, "Protocol file")->required()->check(CLI::ExistingFile);

  std::vector<std::string> dfa_files;
  std::string dfa_out;
  auto* gen = app.add_subcommand("gen", "Instance generators");
  gen->require_subcommand(1);
  auto* dfa = gen->add_subcommand("dfa-intersection", "CRP instance for DFA intersection non-emptiness");
  dfa->add_option("files", dfa_files, "DFA files")->required()->check(CLI::ExistingFile);
  dfa->add_option("-o,--out", dfa_out, "Output directory")->required();

  std::string compat_protocol;
  std::uint64_t compat_n = 4;
  auto* oracle = app.add_subcommand("oracle", "Brute-force checks on small populations");
  oracle->require_subcommand(1);
  auto* compat = oracle->add_subcommand("compat", "Check full ⪯₀-compatibility up to population n");
  compat->add_option("-p,--protocol", compat_protocol, "Protocol file")->required()->check(CLI::ExistingFile);
  compat->add_option("-n", compat_n, "Largest population")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPositive : kError;
  }
  if (max_states) lim.budget.max_states = *max_states;
  if (timeout_ms) lim.budget.timeout = std::chrono::milliseconds(*timeout_ms);
  if (max_population) lim.max_population = *max_population;

  try {
    if (c->parsed()) return cmd_check(check, lim, out, err);
    if (t->parsed()) return cmd_traces(traces, lim, out);
    if (show->parsed()) {
      out << dump_tcs(to_tcs(load_protocol(tcs_protocol)));
      return kPositive;
    }
    if (dfa->parsed()) return cmd_gen_dfa(dfa_files, dfa_out, out);
    if (compat->parsed()) return cmd_compat(compat_protocol, compat_n, lim, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace zeroone::cli
