#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome cli(const std::string& args) {
  const std::string cmd = std::string(ANTROUTE_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("antroute_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

const std::string kScenario = std::string(ANTROUTE_SOURCE_DIR) + "/scenarios/three_node/";
const std::string kData = std::string(ANTROUTE_SOURCE_DIR) + "/tests/data/";

std::string simulate_args(const fs::path& out) {
  return "simulate --network " + kScenario + "network.json --workload " + kScenario +
         "workload.json --out " + out.string();
}

}  // namespace

TEST_CASE("three-node scenario matches the golden reports") {
  const auto out = scratch("golden");
  const auto r = cli(simulate_args(out));
  CHECK(r.code == 0);
  for (const char* f : {"payments.csv", "nodes.csv", "report.json"}) {
    CAPTURE(f);
    CHECK(slurp(out / f) == slurp(kData + "three_node/" + f));
  }
  fs::remove_all(out);
}

TEST_CASE("repeated runs are byte-identical") {
  const auto a = scratch("repeat_a");
  const auto b = scratch("repeat_b");
  REQUIRE(cli(simulate_args(a) + " --seed 11 --latency-ms 4").code == 0);
  REQUIRE(cli(simulate_args(b) + " --seed 11 --latency-ms 4").code == 0);
  for (const char* f : {"payments.csv", "nodes.csv", "report.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("batch mode writes one directory per seed") {
  const auto out = scratch("batch");
  REQUIRE(cli(simulate_args(out) + " --seed 3 --batch 3").code == 0);
  for (int s = 3; s <= 5; ++s) CHECK(fs::exists(out / ("seed-" + std::to_string(s)) / "payments.csv"));
  fs::remove_all(out);
}

TEST_CASE("unknown channel endpoint is a config error naming the channel") {
  const auto out = scratch("bad");
  const auto r = cli("simulate --network " + kData + "bad_endpoint_network.json --workload " + kScenario +
                     "workload.json --out " + out.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("channel #1") != std::string::npos);
  CHECK(r.out.find("5") != std::string::npos);
  CHECK_FALSE(fs::exists(out / "report.json"));
}

TEST_CASE("usage errors exit 1") {
  CHECK(cli("simulate --network x.json").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("capacity --preset nope").code == 1);
  CHECK(cli("scaling lambda-max --alpha -1").code == 1);
}

TEST_CASE("capacity, scaling and reproduce print CSV") {
  auto r = cli("capacity --preset all");
  CHECK(r.code == 0);
  CHECK(r.out.find("bitcoin-typical") != std::string::npos);
  CHECK(r.out.find("6.67") != std::string::npos);
  CHECK(r.out.find("bitcoin-typical,\"Bitcoin, typical transaction\",") != std::string::npos);

  r = cli("capacity --block-max 1000000 --tx-size 250 --interblock-time 600");
  CHECK(r.code == 0);
  CHECK(r.out.find("6.67") != std::string::npos);

  r = cli("scaling bandwidth --rate 10000 --size 16");
  CHECK(r.code == 0);
  CHECK(r.out.find("160000") != std::string::npos);

  r = cli("reproduce --only capacity,bandwidth");
  CHECK(r.code == 0);
  CHECK(r.out.find("\nsection,name,value,expected,tolerance,pass,note\n") != std::string::npos);
  CHECK(r.out.find(",FAIL,") == std::string::npos);

  // the match-probability bound at N = 32 is not met by the formula
  r = cli("reproduce --only match");
  CHECK(r.code == 3);
  CHECK(cli("reproduce --only nonsense").code == 1);
}
