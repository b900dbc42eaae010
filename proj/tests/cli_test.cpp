// End-to-end tests against the installed binary: exit codes, payload shape,
// determinism, environment handling, and the fit CSV contract. Each case
// spawns the real executable, so keep the workloads small.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = "env ";
  cmd += env.empty() ? "-u FLOORSUM_THREADS" : env;
  cmd += " '";
  cmd += FLOORSUM_CLI_PATH;
  cmd += "' ";
  cmd += args;
  cmd += " 2>/dev/null";

  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Timing is the one intentionally nondeterministic field.
std::string strip_seconds(std::string s) {
  const std::string key = "\"seconds\":";
  size_t pos = 0;
  while ((pos = s.find(key)) != std::string::npos) {
    size_t end = s.find_first_of(",}", pos + key.size());
    REQUIRE(end != std::string::npos);
    if (s[end] == ',')
      s.erase(pos, end - pos + 1);
    else
      s.erase(pos - 1, end - pos + 1);
  }
  return s;
}

std::string extract(const std::string& payload, const std::string& field) {
  const std::string key = "\"" + field + "\":";
  const size_t pos = payload.find(key);
  REQUIRE(pos != std::string::npos);
  const size_t start = pos + key.size();
  const size_t end = payload.find_first_of(",}", start);
  REQUIRE(end != std::string::npos);
  return payload.substr(start, end - start);
}

}  // namespace

TEST_CASE("compute: values, modes, exit codes", "[cli]") {
  const RunResult exact = run_cli("compute --j 3 --k 1 --x 10 --method block");
  CHECK(exact.code == 0);
  CHECK(extract(exact.out, "value") == "\"75\"");
  CHECK(extract(exact.out, "mode") == "\"exact\"");
  CHECK(extract(exact.out, "abs_error") == "0");

  const RunResult fl = run_cli("compute --j 1 --k 1 --x 10 --method naive");
  CHECK(fl.code == 0);
  CHECK(extract(fl.out, "mode") == "\"float\"");
  CHECK(fl.out.find("7.86666666666666") != std::string::npos);  // 118/15

  CHECK(run_cli("compute --j 1 --k 1 --x 0").code == 2);
  CHECK(run_cli("compute --j 0.5 --k 1 --x 10").code == 2);
  CHECK(run_cli("compute --j 1 --k 1 --x 10 --method warp").code == 2);
  CHECK(run_cli("compute --j 1 --k 1").code == 2);  // missing required --x
  CHECK(run_cli("frobnicate --x 1").code == 2);
  // The naive evaluator refuses linear work beyond its cap.
  CHECK(run_cli("compute --j 1 --k 1 --x 2000000000 --method naive").code == 3);
}

TEST_CASE("payloads are byte-identical apart from timing", "[cli]") {
  const std::string args = "compute --j 1.5 --k 0.5 --x 12345 --method hybrid";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(strip_seconds(a.out) == strip_seconds(b.out));
  CHECK(a.out.find("\"command\":\"compute\"") != std::string::npos);
  CHECK(a.out.find("\"j\":1.5") != std::string::npos);
  CHECK(a.out.find("\"x\":12345") != std::string::npos);
}

TEST_CASE("output formats", "[cli]") {
  const RunResult csv = run_cli("--format csv compute --j 3 --k 1 --x 10");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("command,", 0) == 0);
  CHECK(csv.out.find(",value,") != std::string::npos);
  CHECK(csv.out.find("\r") == std::string::npos);

  const RunResult plain = run_cli("--format plain compute --j 3 --k 1 --x 10");
  REQUIRE(plain.code == 0);
  CHECK(plain.out.find("value = 75\n") != std::string::npos);

  CHECK(run_cli("--format yaml compute --j 3 --k 1 --x 10").code == 2);
}

TEST_CASE("thread plumbing: flag beats environment beats default", "[cli]") {
  const RunResult env_only = run_cli("compute --j 2 --k 1 --x 100000", "FLOORSUM_THREADS=3");
  REQUIRE(env_only.code == 0);
  CHECK(extract(env_only.out, "threads") == "3");

  const RunResult both =
      run_cli("--threads 2 compute --j 2 --k 1 --x 100000", "FLOORSUM_THREADS=3");
  REQUIRE(both.code == 0);
  CHECK(extract(both.out, "threads") == "2");

  // Exact results cannot depend on the worker count.
  const RunResult one = run_cli("--threads 1 compute --j 2 --k 1 --x 100000");
  CHECK(extract(one.out, "value") == extract(both.out, "value"));
  CHECK(extract(one.out, "value") == extract(env_only.out, "value"));

  CHECK(run_cli("compute --j 2 --k 1 --x 100", "FLOORSUM_THREADS=abc").code == 2);
  CHECK(run_cli("--threads 0 compute --j 2 --k 1 --x 100").code == 2);
  CHECK(run_cli("--memory-cap 1000 compute --j 2 --k 1 --x 100").code == 2);
}

TEST_CASE("single-point subcommands", "[cli]") {
  const RunResult sp = run_cli("summatory --kind phi --n 1000");
  CHECK(sp.code == 0);
  CHECK(extract(sp.out, "value") == "\"304192\"");

  const RunResult sm = run_cli("summatory --kind mertens --n 100");
  CHECK(sm.code == 0);
  CHECK(extract(sm.out, "value") == "1");

  const RunResult con = run_cli("constant --cprime 2");
  CHECK(con.code == 0);
  CHECK(con.out.find("0.78838543541673") != std::string::npos);

  const RunResult lin = run_cli("mainterm --j 1 --k 1 --x 1000000");
  CHECK(lin.code == 0);
  CHECK(extract(lin.out, "case") == "\"linear\"");
  CHECK(lin.out.find("788385.435416730") != std::string::npos);

  const RunResult lg = run_cli("mainterm --j 2 --k 1 --x 1000000");
  CHECK(lg.code == 0);
  CHECK(extract(lg.out, "case") == "\"log\"");
  CHECK(lg.out.find("8398823.29") != std::string::npos);
  CHECK(run_cli("mainterm --j 3 --k 1 --x 100").code == 2);  // c = 2 unsupported

  const RunResult pc = run_cli("psi-check --t 0.25 --H 16");
  CHECK(pc.code == 0);
  CHECK(extract(pc.out, "within_bound") == "true");

  const RunResult mho = run_cli("mho --j 1 --k 1 --x 1000000 --W 1024 --delta 0");
  CHECK(mho.code == 0);
  CHECK(extract(mho.out, "branch") == "\"small\"");
  CHECK(mho.out.find("\"envelope\":") != std::string::npos);
  CHECK(run_cli("mho --j 1 --k 1 --x 100 --W 4 --delta 2").code == 2);
}

TEST_CASE("verify suites drive exit codes", "[cli]") {
  CHECK(run_cli("verify --suite decomposition --x 1000 --z 5").code == 0);
  CHECK(run_cli("verify --suite sandwich --c 2 --xmax 50").code == 0);
  CHECK(run_cli("verify --suite vaaler --H 4,16 --grid 500").code == 0);
  CHECK(run_cli("verify --suite oracle --j 1.5 --k 0.5 --xmax 200").code == 0);
  CHECK(run_cli("verify --suite walfisz --x 100000").code == 0);

  // floorpow at x = 1000 sits near 3.6e-3, above the default 1e-3 gate.
  const RunResult fail = run_cli("verify --suite floorpow --x 1000 --c 2");
  CHECK(fail.code == 1);
  CHECK(extract(fail.out, "ok") == "false");
  const RunResult pass = run_cli("verify --suite floorpow --x 100000 --c 2");
  CHECK(pass.code == 0);
  CHECK(extract(pass.out, "ok") == "true");

  CHECK(run_cli("verify --suite nonsense --x 10").code == 2);
  CHECK(run_cli("verify --suite sandwich --c 1 --xmax 50").code == 2);
}

TEST_CASE("fit: CSV contract and failure paths", "[cli]") {
  namespace fs = std::filesystem;
  const fs::path out = fs::temp_directory_path() / "floorsum_cli_test_fit.csv";
  std::error_code ec;
  fs::remove(out, ec);

  const RunResult r = run_cli("fit --j 1 --k 1 --xmin 10000 --xmax 100000 --points 5 --out " +
                              out.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"slope\":") != std::string::npos);
  CHECK(r.out.find("\"r_squared\":") != std::string::npos);
  CHECK(r.out.find("\"theta_reference\":0.238095238095238") != std::string::npos);
  CHECK(extract(r.out, "admitted") == "5");

  std::ifstream csv(out, std::ios::binary);
  REQUIRE(csv.good());
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line == "x,s_value,main,delta,log10_x,log10_abs_delta,seconds");
  unsigned rows = 0;
  while (std::getline(csv, line)) {
    REQUIRE(!line.empty());
    CHECK(line.find('\r') == std::string::npos);
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
    ++rows;
  }
  CHECK(rows == 5);
  fs::remove(out, ec);

  CHECK(run_cli("fit --j 1 --k 1 --xmin 1000 --xmax 1002 --points 5 --out " + out.string()).code ==
        4);
  fs::remove(out, ec);
  CHECK(run_cli("fit --j 1 --k 1 --xmin 10000 --xmax 100000 --points 5 "
                "--out /floorsum_no_such_dir/fit.csv")
            .code == 3);
  CHECK(run_cli("fit --j 2 --k 1 --xmin 10000 --xmax 100000 --points 5 --out " + out.string())
            .code == 2);  // log case has no power fit
  fs::remove(out, ec);
}
