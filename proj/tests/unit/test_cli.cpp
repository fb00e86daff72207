#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "zeroone/cli.hpp"
#include "zeroone/crp.hpp"
#include "zeroone/dfa.hpp"
#include "zeroone/traces.hpp"

using namespace zeroone;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "zeroone");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("zeroone_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

// Accepts exactly "a" over {a, b}.
const char* kExactlyA = R"(
alphabet a b
state s0 init
state s1 accept
state dead
on a s0 -> s1
on b s0 -> dead
on a s1 -> dead
on b s1 -> dead
on a dead -> dead
on b dead -> dead
)";

const char* kAStar = R"(
alphabet a b
state s0 init accept
state dead
on a s0 -> s0
on b s0 -> dead
on a dead -> dead
on b dead -> dead
)";

const char* kBPlus = R"(
alphabet a b
state t0 init
state t1 accept
state sink
on b t0 -> t1
on a t0 -> sink
on b t1 -> t1
on a t1 -> sink
on a sink -> sink
on b sink -> sink
)";

bool crp_verdict(const std::vector<Dfa>& ds) {
  auto inst = gen_dfa_intersection(ds);
  return decide_crp(inst.protocol, inst.constraint).reachable;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("DFA parsing") {
  auto d = parse_dfa(kExactlyA);
  CHECK(d.alphabet == std::vector<std::string>{"a", "b"});
  CHECK(d.states.size() == 3);
  CHECK(d.accepting == std::vector<bool>{false, true, false});
  CHECK(parse_dfa(serialize_dfa(d)).delta == d.delta);
  CHECK_THROWS_AS(parse_dfa("alphabet a\nstate s init\n"), SpecError);
  CHECK_THROWS_AS(parse_dfa("state s init\non a s -> s\n"), SpecError);
}

TEST_CASE("two identical DFAs accepting exactly a") {
  auto d = parse_dfa(kExactlyA);
  CHECK(oracles::product_nonempty({d, d}));
  CHECK(crp_verdict({d, d}));
  auto inst = gen_dfa_intersection({d, d});
  CHECK(inst.protocol.num_user() == 6);
  CHECK(inst.protocol.find_user("m0_s0"));
  CHECK(inst.protocol.find_user("m1_s0"));
  CHECK(inst.protocol.controller_free());
  CHECK(inst.protocol.kind_profile().only({Primitive::Sync}));
}

TEST_CASE("a* and b+ do not intersect") {
  std::vector<Dfa> ds{parse_dfa(kAStar), parse_dfa(kBPlus)};
  CHECK_FALSE(oracles::product_nonempty(ds));
  CHECK_FALSE(crp_verdict(ds));
  // Disjoint state names are kept as they are.
  CHECK(gen_dfa_intersection(ds).protocol.find_user("t1"));
}

TEST_CASE("alphabet mismatch is an error") {
  auto only_a = parse_dfa("alphabet a\nstate s init accept\non a s -> s\n");
  CHECK_THROWS_AS(gen_dfa_intersection({only_a, parse_dfa(kAStar)}), SpecError);
  CHECK_THROWS_AS(gen_dfa_intersection({}), SpecError);
}

TEST_CASE("a DFA without final states gives an unsatisfiable clause") {
  auto none = parse_dfa("alphabet a\nstate s init\non a s -> s\n");
  CHECK_FALSE(crp_verdict({none}));
}

TEST_CASE("single DFAs: reachable iff the language is non-empty") {
  std::mt19937 rng(7);
  for (int i = 0; i < 30; ++i) {
    auto d = oracles::random_dfa(rng, 5, {"a", "b"});
    CAPTURE(serialize_dfa(d));
    CHECK(crp_verdict({d}) == oracles::product_nonempty({d}));
  }
}

TEST_CASE("random DFA pairs agree with the product construction") {
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    std::vector<Dfa> ds{oracles::random_dfa(rng, 4, {"x", "y"}), oracles::random_dfa(rng, 4, {"x", "y"})};
    CHECK(crp_verdict(ds) == oracles::product_nonempty(ds));
  }
}

TEST_CASE("check: lossy_basic covers q3") {
  auto r = invoke({"check", "-p", oracles::corpus("lossy_basic"), "-c", "#q3 >= 1"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["reachable"] == true);
  CHECK(j["class"] == "GEQ");
  CHECK(j["witness"].size() >= 2);
}

TEST_CASE("check: negative verdict exits 1") {
  auto r = invoke({"check", "-p", oracles::corpus("lossy_q1"), "-c", "#q1 = 0 & #q2 = 0 & #q3 = 0 & ctrl = c2"});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.out)["reachable"] == false);
}

TEST_CASE("check: the tcs engine refuses synchronization protocols") {
  auto r = invoke({"check", "-p", oracles::corpus("sync_basic"), "-c", "#q3 >= 1", "--engine", "tcs"});
  CHECK(r.code == 2);
  CHECK(r.err.find("not a TCS") != std::string::npos);
}

TEST_CASE("check: engines agree") {
  for (auto phi : {"#q4 >= 1", "#q1 = 0 & #q2 >= 1", "#q3 >= 2", "#q1 = 0 & #q2 = 0 & #q3 = 0"}) {
    CAPTURE(phi);
    auto a = invoke({"check", "-p", oracles::corpus("tcs_lossy"), "-c", phi});
    auto t = invoke({"check", "-p", oracles::corpus("tcs_lossy"), "-c", phi, "--engine", "tcs"});
    auto o = invoke({"check", "-p", oracles::corpus("tcs_lossy"), "-c", phi, "--engine", "oracle", "--population", "5"});
    CHECK(a.code == t.code);
    if (o.code == 0) CHECK(a.code == 0);
  }
}

TEST_CASE("check: named problems and concretization") {
  auto r = invoke({"check", "-p", oracles::corpus("lossy_q1"), "-c", "coverability(c1,0,0,3)", "--concretize"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["concrete"].is_object());
  CHECK(j["concrete"]["n"].get<int>() >= 3);
  CHECK(j["concrete_status"] == "found");
}

TEST_CASE("budgets: flags and environment") {
  auto r = invoke({"--max-states", "2", "check", "-p", oracles::corpus("lossy_basic"), "-c", "#q3 >= 1 & #q1 = 0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("budget") != std::string::npos);
  setenv("ZEROONE_MAX_STATES", "2", 1);
  CHECK(invoke({"check", "-p", oracles::corpus("lossy_basic"), "-c", "#q3 >= 1 & #q1 = 0"}).code == 2);
  setenv("ZEROONE_MAX_STATES", "lots", 1);
  CHECK(invoke({"check", "-p", oracles::corpus("lossy_basic"), "-c", "#q3 >= 1"}).code == 2);
  unsetenv("ZEROONE_MAX_STATES");
  setenv("ZEROONE_MAX_POPULATION", "1", 1);
  auto o = invoke({"check", "-p", oracles::corpus("lossy_basic"), "-c", "ctrl = c2 & #q3 >= 1", "--engine", "oracle"});
  unsetenv("ZEROONE_MAX_POPULATION");
  CHECK(o.code == 1);
  CHECK(nlohmann::json::parse(o.out)["cap"] == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"check", "-p", oracles::corpus("lossy_basic")}).code == 2);
  CHECK(invoke({"check", "-p", "/nonexistent.proto", "-c", "#q1 >= 1"}).code == 2);
  CHECK(invoke({"check", "-p", oracles::corpus("lossy_basic"), "-c", "#q1 >="}).code == 2);
  CHECK(invoke({"check", "-p", oracles::corpus("lossy_basic"), "-c", "#q1 >= 1", "--engine", "magic"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("gen dfa-intersection writes a checkable instance") {
  auto dir = scratch("gen");
  write(dir / "a.dfa", kExactlyA);
  write(dir / "b.dfa", kAStar);
  auto r = invoke({"gen", "dfa-intersection", (dir / "a.dfa").string(), (dir / "b.dfa").string(), "-o",
                (dir / "inst").string()});
  CHECK(r.code == 0);
  REQUIRE(fs::exists(dir / "inst" / "protocol.proto"));
  REQUIRE(fs::exists(dir / "inst" / "constraint.txt"));
  std::ifstream in(dir / "inst" / "constraint.txt");
  std::string phi;
  std::getline(in, phi);
  auto check = invoke({"check", "-p", (dir / "inst" / "protocol.proto").string(), "-c", phi});
  // Both automata accept "a".
  CHECK(check.code == 0);
  fs::remove_all(dir);
}

TEST_CASE("tcs show") {
  auto r = invoke({"tcs", "show", "-p", oracles::corpus("tcs_disj")});
  CHECK(r.code == 0);
  CHECK(r.out.find("D: p->q, r->r\n") != std::string::npos);
  CHECK(invoke({"tcs", "show", "-p", oracles::corpus("sync_basic")}).code == 2);
}

TEST_CASE("oracle compat") {
  auto r = invoke({"oracle", "compat", "-p", oracles::corpus("lossy_basic"), "-n", "3"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["violations"] == 0);
  CHECK(j["pairs_checked"].get<int>() > 0);
}

TEST_CASE("traces: safety and omega") {
  auto dir = scratch("traces");
  write(dir / "stay.spec", "state ok init accept\nstate bad\non c1 ok -> ok\non c2 ok -> bad\n"
                           "on c1 bad -> bad\non c2 bad -> bad\n");
  auto r = invoke({"traces", "-p", oracles::corpus("lossy_basic"), "-s", (dir / "stay.spec").string()});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.out)["counterexample"] == nlohmann::json{"c1", "c2"});

  write(dir / "inf_c2.spec", "state n0 init\nstate n1 accept\non c1 n0 -> n0\non c3 n0 -> n0\non c2 n0 -> n1\n"
                             "on c1 n1 -> n0\non c3 n1 -> n0\non c2 n1 -> n1\n");
  auto o = invoke({"traces", "-p", oracles::corpus("omega_cycle"), "-s", (dir / "inf_c2.spec").string(), "--omega"});
  CHECK(o.code == 1);
  auto j = nlohmann::json::parse(o.out);
  CHECK(j["loop"] == nlohmann::json{"c2", "c1"});

  auto bad = invoke({"traces", "-p", oracles::corpus("lossy_basic"), "-s", (dir / "inf_c2.spec").string(), "--omega"});
  CHECK(bad.code == 2);

  auto ab = product_alphabet(load_protocol(oracles::corpus("lossy_basic")), 1);
  std::string all = "state s init accept\n";
  for (const auto& x : ab) all += "on " + x + " s -> s\n";
  write(dir / "all.spec", all);
  auto t = invoke({"traces", "-p", oracles::corpus("lossy_basic"), "-s", (dir / "all.spec").string(), "--track", "1"});
  CHECK(t.code == 0);
  fs::remove_all(dir);
}

}  // TEST_SUITE
