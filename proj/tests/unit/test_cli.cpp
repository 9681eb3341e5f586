#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/fixtures.hpp"
#include "cumact/graph.hpp"

using Catch::Matchers::ContainsSubstring;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the installed binary with the given argument string, captures both
// streams. Tests only ever pass fixed strings here.
CliResult run_cli(const std::string& args) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out_path = dir / "cumact_cli_out.txt";
  const auto err_path = dir / "cumact_cli_err.txt";
  const std::string cmd = std::string(CUMACT_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return r;
}

}  // namespace

TEST_CASE("cli usage errors exit with the validation code") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("solve").code == 2);
  CHECK(run_cli("solve im-ca --graph missing.txt --k 1 --no-such-flag").code == 2);
  CHECK(run_cli("baseline fame --graph x").code == 2);
  CliResult missing = run_cli("solve im-ca --graph /nonexistent.edges --k 1");
  CHECK(missing.code == 2);
  CHECK_THAT(missing.err, ContainsSubstring("error:"));
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("cli solves the star and reports the greedy trace") {
  CliResult r = run_cli("solve im-ca --graph " + fixtures::path("star.txt") +
                        " --k 2 --tau 1.0 --theta 4 --strategy btg --seed 1");
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("step 1 node a inc 12 est_active 3"));
  CHECK_THAT(r.out, ContainsSubstring("summary seeds a;b seed_count 2 est_active 4 feasible 1"));
}

TEST_CASE("cli signals an impossible coverage demand distinctly") {
  CliResult r = run_cli("solve sm-ca --graph " + fixtures::path("star.txt") +
                        " --eta 9 --tau 1.0 --theta 4");
  CHECK(r.code == 3);
  CHECK_THAT(r.out, ContainsSubstring("feasible 0"));
  CliResult ok = run_cli("solve sm-ca --graph " + fixtures::path("star.txt") +
                         " --eta 4 --tau 1.0 --theta 4");
  CHECK(ok.code == 0);
}

TEST_CASE("cli rejects contradictory threshold flags") {
  CliResult r = run_cli("solve im-ca --graph " + fixtures::path("star.txt") +
                        " --k 1 --tau 0.5 --tau-file somewhere.txt");
  CHECK(r.code == 2);
  CHECK_THAT(r.err, ContainsSubstring("mutually exclusive"));
}

TEST_CASE("cli gen-probs emits a loadable weighted edge list") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto bare = dir / "cumact_cli_bare.edges";
  const auto out = dir / "cumact_cli_probbed.edges";
  std::ofstream(bare) << "s t\nt w\nw s\n";
  CliResult r = run_cli("gen-probs --graph " + bare.string() + " --model constant --p 0.25 --out " +
                        out.string());
  REQUIRE(r.code == 0);
  cumact::Graph g = cumact::load_edge_list(out.string(), true);
  CHECK(g.n == 3);
  CHECK(g.has_probs);
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (const cumact::Arc& a : g.out[u]) CHECK(a.p == 0.25);
  std::filesystem::remove(bare);
  std::filesystem::remove(out);
}

TEST_CASE("cli eval reports held-out activation counts") {
  CliResult r = run_cli("eval --graph " + fixtures::path("star.txt") +
                        " --seeds a --tau 1.0 --runs 100");
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("targets 4"));
  CHECK_THAT(r.out, ContainsSubstring("active 3"));
  CliResult bad = run_cli("eval --graph " + fixtures::path("star.txt") + " --seeds nobody");
  CHECK(bad.code == 2);
  CHECK_THAT(bad.err, ContainsSubstring("unknown seed node"));
}

TEST_CASE("cli sweep needs a graph and honors overrides") {
  CliResult r = run_cli("sweep --set algorithms=degree");
  CHECK(r.code == 2);
  CHECK_THAT(r.err, ContainsSubstring("graph"));
  CliResult ok = run_cli("sweep --quiet --set graph=" + fixtures::path("star.txt") +
                         " --set taus=1 --set budgets=1 --set algorithms=degree --set theta=4" +
                         " --set runs=50");
  REQUIRE(ok.code == 0);
  CHECK_THAT(ok.out, ContainsSubstring("algorithm,tau,c,budget_or_eta,seeds"));
  CHECK_THAT(ok.out, ContainsSubstring("degree,1,1,1,\"a\",1,3,"));
}
