// End-to-end checks of the command-line binary: spawns the real
// executable, captures stdout, and verifies output and exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string out_path = std::string(PACTEACH_WORK_DIR) + "/cli_stdout.txt";
  const std::string cmd =
      std::string(PACTEACH_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
#ifdef _WIN32
  r.exit_code = status;
#else
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
  std::ifstream in(out_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

const std::string kFixture = std::string(PACTEACH_FIXTURE_DIR) + "/two_by_two.json";

}  // namespace

TEST_CASE("evaluate prints the success probability") {
  const RunResult r = run("evaluate --instance " + kFixture + " --set x1,x2 --q 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0.8928\n");

  const RunResult j = run("evaluate --instance " + kFixture +
                          " --set x1,x2 --q 1 --format json");
  CHECK(j.exit_code == 0);
  CHECK(j.out == "{\"success_probability\": 0.8928}\n");
}

TEST_CASE("solve reports the smallest sufficient set") {
  const RunResult r = run("solve --instance " + kFixture +
                          " --objective size --q 1 --p 0.8 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"feasible\": true") != std::string::npos);
  CHECK(r.out.find("\"size\": 1") != std::string::npos);
  CHECK(r.out.find("{\"example\": \"x1\", \"label\": 0}") != std::string::npos);
}

TEST_CASE("infeasible solves still exit 0 and say so") {
  const RunResult r = run("solve --instance " + kFixture +
                          " --objective size --q 1 --p 0.95 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"feasible\": false") != std::string::npos);
  CHECK(r.out.find("\"achieved_p\": 0.8928") != std::string::npos);
}

TEST_CASE("conflicting flags are usage errors") {
  const RunResult r = run("solve --instance " + kFixture +
                          " --objective probable --q 1 --k 2 --p 0.5");
  CHECK(r.exit_code == 2);

  const RunResult missing = run("solve --instance " + kFixture +
                                " --objective approx --k 1");
  CHECK(missing.exit_code == 2);

  const RunResult exact_em = run("solve --instance " + kFixture +
                                 " --objective approx --p 0.8 --k 1 --mode em --exact");
  CHECK(exact_em.exit_code == 2);
}

TEST_CASE("malformed input files are format errors") {
  CHECK(run("evaluate --instance /no/such/file.json --set x1 --q 1").exit_code == 3);

  const std::string bad_path = std::string(PACTEACH_WORK_DIR) + "/bad.json";
  std::ofstream(bad_path) << "{\"schema_version\": 1}";
  CHECK(run("evaluate --instance " + bad_path + " --set x1 --q 1").exit_code == 3);
}

TEST_CASE("an exhausted subset budget is signalled by exit code 4") {
  const RunResult r = run("solve --instance " + kFixture +
                          " --objective probable --q 1 --k 2 --max-subsets 1 "
                          "--format json");
  CHECK(r.exit_code == 4);
  CHECK(r.out.find("\"budget_exhausted\": true") != std::string::npos);
  CHECK(r.out.find("\"subsets_evaluated\": 1") != std::string::npos);
}

TEST_CASE("generated instances feed straight back into the solver") {
  const std::string gen_path = std::string(PACTEACH_WORK_DIR) + "/gen_roundtrip.json";
  const RunResult g = run("gen --family multiples --ks 3,5 --xmax 12 --target-k 5 "
                          "--gamma const:0.1 --out " + gen_path);
  CHECK(g.exit_code == 0);

  const RunResult s = run("solve --instance " + gen_path +
                          " --objective probable --q 1 --k 1 --format json");
  CHECK(s.exit_code == 0);
  CHECK(s.out.find("\"feasible\": true") != std::string::npos);

  const RunResult bad_gamma = run("gen --family multiples --ks 3,5 --xmax 12 "
                                  "--target-k 5 --gamma const:1.7 --out " + gen_path);
  CHECK(bad_gamma.exit_code == 2);
}

TEST_CASE("similarity table output") {
  const RunResult r = run("simmatrix --instance " + kFixture + " --mode em");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "concept,c1,c2\n"
        "c1,0.85,0.15\n"
        "c2,0.15,0.85\n");
}

TEST_CASE("simulation agrees with the computed probability") {
  const RunResult r = run("simulate --instance " + kFixture +
                          " --set x1,x2 --q 1 --trials 20000 --seed 7 --format json");
  CHECK(r.exit_code == 0);
  double estimate = 0.0, se = 0.0;
  CHECK(std::sscanf(r.out.c_str(), "{\"estimate\": %lf, \"std_error\": %lf", &estimate,
                    &se) == 2);
  CHECK(std::abs(estimate - 0.8928) <= 4.0 * se);

  // Identical invocation, identical bytes.
  const RunResult again = run("simulate --instance " + kFixture +
                              " --set x1,x2 --q 1 --trials 20000 --seed 7 "
                              "--format json");
  CHECK(again.out == r.out);
}

TEST_CASE("greedy selection subcommand") {
  const RunResult r = run("heuristic --instance " + kFixture +
                          " --criterion combined --stop prob:0.85@1 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"satisfied\": true") != std::string::npos);
  CHECK(r.out.find("\"achieved_p\": 0.8928") != std::string::npos);

  const RunResult bad = run("heuristic --instance " + kFixture + " --stop nonsense");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("help exits cleanly") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("").exit_code == 2);  // a subcommand is required
}
