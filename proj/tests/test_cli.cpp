#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const fs::path& scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() /
                       ("primesums_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path out = scratch() / ("out" + std::to_string(counter));
  const fs::path err = scratch() / ("err" + std::to_string(counter));
  ++counter;
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" PRIMESUMS_CLI_PATH "' " +
                          args + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

size_t count_lines(const std::string& s) {
  size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("cli: no subcommand is a usage error") {
  REQUIRE(run_cli("").exit_code == 1);
  REQUIRE(run_cli("frobnicate").exit_code == 1);
  REQUIRE(run_cli("verify").exit_code == 1);  // --to is required
}

TEST_CASE("cli: minlen") {
  const auto r = run_cli("minlen --n 2 --json");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out == "{\"n\":2,\"p\":3,\"k_min\":9,\"sum\":127}\n");

  const auto human = run_cli("minlen --n 3");
  REQUIRE(human.exit_code == 0);
  REQUIRE_THAT(human.out, ContainsSubstring("k_min = 3"));

  const auto parity = run_cli("minlen --n 1");
  REQUIRE(parity.exit_code == 1);
  REQUIRE_THAT(parity.err, ContainsSubstring("n = 1"));

  const auto exhausted = run_cli("minlen --n 2 --k-cap 3");
  REQUIRE(exhausted.exit_code == 2);
  REQUIRE_THAT(exhausted.err, ContainsSubstring("exhausted"));
}

TEST_CASE("cli: lengths emits one csv row per admissible length") {
  const auto r = run_cli("lengths --n 4 --window 999");
  REQUIRE(r.exit_code == 0);
  REQUIRE(count_lines(r.out) == 100);  // header + 99 rows
  REQUIRE(r.out.substr(0, 6) == "n,p,k\n");
  REQUIRE_THAT(r.out, ContainsSubstring("4,7,3\n"));
  REQUIRE_THAT(r.out, ContainsSubstring("4,7,993\n"));

  const auto j = run_cli("lengths --n 4 --window 999 --json");
  REQUIRE(j.exit_code == 0);
  const auto parsed = nlohmann::json::parse(j.out);
  REQUIRE(parsed.at("p") == 7);
  REQUIRE(parsed.at("lengths").size() == 99);

  const auto out_path = (scratch() / "lengths.csv").string();
  const auto f = run_cli("lengths --n 4 --window 999 --out '" + out_path + "'");
  REQUIRE(f.exit_code == 0);
  REQUIRE(count_lines(slurp(out_path)) == 100);
  REQUIRE_THAT(f.out, ContainsSubstring("99 rows"));
}

TEST_CASE("cli: modular histogram and divisibility") {
  const auto h = run_cli("modular --n 2 --q 3 --k-max 9");
  REQUIRE(h.exit_code == 0);
  REQUIRE_THAT(h.out, ContainsSubstring("n,q,k_max,residue,count\n"));
  REQUIRE_THAT(h.out, ContainsSubstring("2,3,9,0,3\n"));
  REQUIRE_THAT(h.out, ContainsSubstring("2,3,9,1,1\n"));
  REQUIRE_THAT(h.out, ContainsSubstring("2,3,9,2,0\n"));

  const auto d = run_cli("modular --n 2 --l 3 --k-max 9");
  REQUIRE(d.exit_code == 0);
  REQUIRE_THAT(d.out, ContainsSubstring("n,l,k_max,freq\n2,3,9,0.75\n"));

  REQUIRE(run_cli("modular --n 2 --q 3 --l 5 --k-max 9").exit_code == 1);
  REQUIRE(run_cli("modular --n 2 --k-max 9").exit_code == 1);
  REQUIRE(run_cli("modular --n 2 --l 2 --k-max 9").exit_code == 1);
  REQUIRE(run_cli("modular --n 1 --q 3 --k-max 9").exit_code == 1);
}

TEST_CASE("cli: heuristic") {
  const auto r = run_cli("heuristic --p 15485863");
  REQUIRE(r.exit_code == 0);
  REQUIRE_THAT(r.out, ContainsSubstring("33.1109"));
  REQUIRE_THAT(r.out, ContainsSubstring("1096.33"));

  const auto csv_path = (scratch() / "heuristic.csv").string();
  const auto c = run_cli("heuristic --p 3 --p 15485863 --out '" + csv_path + "'");
  REQUIRE(c.exit_code == 0);
  const auto csv = slurp(csv_path);
  REQUIRE_THAT(csv, ContainsSubstring("p_n,expected_k_min,variance_k_min\n"));
  REQUIRE(count_lines(csv) == 3);

  REQUIRE(run_cli("heuristic").exit_code == 1);
  REQUIRE(run_cli("heuristic --p 2").exit_code == 1);
}

TEST_CASE("cli: small verify run with records and manifest") {
  const auto records_path = (scratch() / "records.jsonl").string();
  const auto manifest_path = (scratch() / "manifest.json").string();
  const auto r = run_cli("verify --from 1 --to 50 --k-cap 101 --out '" + records_path +
                         "' --manifest '" + manifest_path + "'");
  REQUIRE(r.exit_code == 0);
  REQUIRE_THAT(r.out, ContainsSubstring("counterexamples: 0"));

  REQUIRE(count_lines(slurp(records_path)) == 49);
  const auto manifest = nlohmann::json::parse(slurp(manifest_path));
  REQUIRE(manifest.at("digest_algorithm") == "sha256");
  REQUIRE(manifest.at("outcome").at("searched") == 49);
  REQUIRE(manifest.at("outcome").at("counterexample_count") == 0);
  REQUIRE(manifest.at("outputs").size() == 1);
  REQUIRE(manifest.at("outputs")[0].at("path") == records_path);

  // a verify that hits exhaustion exits 2 and says which n
  const auto ex = run_cli("verify --from 2 --to 10 --k-cap 3");
  REQUIRE(ex.exit_code == 2);
  REQUIRE_THAT(ex.out, ContainsSubstring("counterexamples: 2 (n = 2 6)"));
}

TEST_CASE("cli: thread environment variable is honored, flag wins") {
  const auto env_ok = run_cli("verify --from 1 --to 50 --k-cap 101",
                              "PRIMESUMS_THREADS=3");
  REQUIRE(env_ok.exit_code == 0);

  const auto env_bad = run_cli("verify --from 1 --to 50 --k-cap 101",
                               "PRIMESUMS_THREADS=banana");
  REQUIRE(env_bad.exit_code == 1);
  REQUIRE_THAT(env_bad.err, ContainsSubstring("PRIMESUMS_THREADS"));

  // the flag silences the bad environment value
  const auto flag_wins = run_cli("verify --from 1 --to 50 --k-cap 101 --threads 2",
                                 "PRIMESUMS_THREADS=banana");
  REQUIRE(flag_wins.exit_code == 0);
}
