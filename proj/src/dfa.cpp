#include "zeroone/dfa.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "zeroone/traces.hpp"

namespace zeroone {

Dfa parse_dfa(std::string_view text) {
  std::vector<std::string> alphabet;
  bool have_alphabet = false;
  for (auto line : detail::split_lines(text)) {
    detail::Token bad;
    auto toks = detail::tokenize(line, 1, true, &bad);
    if (toks.empty() || toks.front().text != "alphabet") continue;
    if (have_alphabet) throw SpecError("dfa: more than one alphabet line");
    have_alphabet = true;
    for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
      if (std::find(alphabet.begin(), alphabet.end(), toks[i].text) != alphabet.end())
        throw SpecError("dfa: duplicate letter '" + toks[i].text + "'");
      alphabet.push_back(toks[i].text);
    }
  }
  if (!have_alphabet || alphabet.empty()) throw SpecError("dfa: missing 'alphabet' line");
  auto table = parse_spec(text, alphabet, SpecMode::Buchi);
  Dfa d;
  d.alphabet = alphabet;
  d.states = table.states;
  d.initial = table.initial;
  d.accepting = table.accepting;
  for (std::size_t s = 0; s < table.states.size(); ++s) {
    d.delta.emplace_back();
    for (std::size_t l = 0; l < alphabet.size(); ++l) {
      auto t = table.delta[s][l];
      if (!t) throw SpecError("dfa is not complete: no transition from '" + d.states[s] + "' on '" + alphabet[l] + "'");
      d.delta.back().push_back(*t);
    }
  }
  return d;
}

Dfa load_dfa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dfa(ss.str());
}

std::string serialize_dfa(const Dfa& d) {
  std::string out = "alphabet";
  for (const auto& l : d.alphabet) out += " " + l;
  out += "\n";
  for (std::size_t s = 0; s < d.states.size(); ++s) {
    out += "state " + d.states[s];
    if (s == d.initial) out += " init";
    if (d.accepting[s]) out += " accept";
    out += "\n";
  }
  for (std::size_t s = 0; s < d.states.size(); ++s)
    for (std::size_t l = 0; l < d.alphabet.size(); ++l)
      out += "on " + d.alphabet[l] + " " + d.states[s] + " -> " + d.states[d.delta[s][l]] + "\n";
  return out;
}

DfaInstance gen_dfa_intersection(const std::vector<Dfa>& automata) {
  if (automata.empty()) throw SpecError("dfa-intersection needs at least one automaton");
  const auto& sigma = automata.front().alphabet;
  std::set<std::string> sigma_set(sigma.begin(), sigma.end());
  for (const auto& a : automata)
    if (std::set<std::string>(a.alphabet.begin(), a.alphabet.end()) != sigma_set)
      throw SpecError("dfa-intersection: the automata have different alphabets");

  const std::string ctrl = "idle";
  std::set<std::string> names{ctrl};
  bool overlap = false;
  for (const auto& a : automata)
    for (const auto& s : a.states)
      if (!names.insert(s).second) overlap = true;

  Protocol p;
  p.name = "dfa_intersection";
  p.declared_kind = DeclaredKind::Sync;
  p.controller_states = {ctrl};
  p.initial_controller = 0;
  p.labels = sigma;
  std::vector<StateIndex> offset;
  for (std::size_t i = 0; i < automata.size(); ++i) {
    const auto& a = automata[i];
    offset.push_back(static_cast<StateIndex>(p.user_states.size()));
    for (const auto& s : a.states) {
      if (p.user_states.size() == kMaxUserStates) throw SpecError("dfa-intersection: more than 64 states in total");
      p.user_states.push_back(overlap ? "m" + std::to_string(i) + "_" + s : s);
    }
    p.initial_users |= user_bit(offset[i] + a.initial);
  }
  for (std::size_t i = 0; i < automata.size(); ++i) {
    const auto& a = automata[i];
    for (std::size_t s = 0; s < a.states.size(); ++s)
      for (std::size_t l = 0; l < a.alphabet.size(); ++l) {
        Transition t;
        t.kind = TransitionKind::Sync;
        t.side = Side::User;
        t.from = offset[i] + static_cast<StateIndex>(s);
        t.to = offset[i] + a.delta[s][l];
        t.symbol = static_cast<SymbolIndex>(std::find(sigma.begin(), sigma.end(), a.alphabet[l]) - sigma.begin());
        p.transitions.push_back(t);
      }
  }
  std::vector<Constraint> per_automaton;
  for (std::size_t i = 0; i < automata.size(); ++i) {
    const auto& a = automata[i];
    std::vector<Constraint> finals;
    for (std::size_t s = 0; s < a.states.size(); ++s)
      if (a.accepting[s]) finals.push_back(Constraint::geq(offset[i] + static_cast<StateIndex>(s), 1));
    if (finals.empty()) {
      // No final state: an unsatisfiable atom pair keeps the constraint well formed.
      auto q = offset[i];
      finals.push_back(Constraint::conj(Constraint::geq(q, 1), Constraint::zero(q)));
    }
    per_automaton.push_back(disj_all(finals));
  }
  auto diags = validate_protocol(p);
  if (!diags.empty()) throw ProtocolError("generated protocol is invalid: " + diags.front().message());
  return {std::move(p), conj_all(per_automaton)};
}

}  // namespace zeroone
