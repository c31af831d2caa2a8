// Drives the mqv binary through a shell and checks output and exit codes.
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "mqv/generators.hpp"
#include "mqv/json_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(MQV_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mqv_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateThenCheck) {
  const std::string g = path("g.json");
  ASSERT_EQ(run_cli("generate --named D4 --dims 1,2,1,1 --seed 3 -o " + g).code, 0);
  CliRun rel = run_cli("relation --rep " + g);
  EXPECT_EQ(rel.code, 0);
  EXPECT_TRUE(mqv::Json::parse(rel.out)["exact_zero"].get<bool>());

  CliRun st = run_cli("stability --rep " + g);
  EXPECT_EQ(st.code, 0);
  EXPECT_EQ(mqv::Json::parse(st.out)["status"], "Stable");

  CliRun cv = run_cli("convolve --rep " + g + " --vertex 1 --verify-involution");
  EXPECT_EQ(cv.code, 0);
  mqv::Json c = mqv::Json::parse(cv.out);
  EXPECT_TRUE(c["involution"]["verified"].get<bool>());
  EXPECT_EQ(c["dims"]["1"], 1);

  EXPECT_EQ(run_cli("jacobian --rep " + g).code, 0);
  EXPECT_EQ(run_cli("--mode float relation --rep " + g).code, 0);
}

TEST_F(Cli, GenerateIsDeterministic) {
  CliRun a = run_cli("generate --named A3 --dims 1,1,1 --seed 11");
  CliRun b = run_cli("generate --named A3 --dims 1,1,1 --seed 11");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, PropertyFailureExitsOne) {
  const std::string x = file("x.json", R"({"quiver": "A2", "dims": {"1": 1, "2": 1},
                                          "maps": {"a1": [["1"]], "~a1": [["1"]]}})");
  EXPECT_EQ(run_cli("relation --rep " + x + " --q " + file("good.json", R"({"1": "1/2", "2": "2"})")).code, 0);
  EXPECT_EQ(run_cli("relation --rep " + x + " --q " + file("bad.json", R"({"1": "1", "2": "1"})")).code, 1);
  const std::string d = file("d.json", R"({"1": 1, "2": 1})");
  EXPECT_EQ(run_cli("generic --named A2 --dim " + d + " --q " + file("q.json", R"(["2", "1/3"])") + " --theta " +
                file("t.json", "[1, -1]"))
                .code,
            1);
}

TEST_F(Cli, UsageAndContractErrorsExitTwo) {
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("suite --name nope").code, 2);
  EXPECT_EQ(run_cli("relation --rep " + file("broken.json", "{")).code, 2);
  EXPECT_EQ(run_cli("relation --rep " + path("missing.json")).code, 2);
  const std::string x = file("x.json", R"({"quiver": "jordan", "dims": {"1": 1}})");
  EXPECT_EQ(run_cli("convolve --rep " + x + " --vertex 1 --q " + file("q.json", R"(["1"])") + " --theta " +
                file("t.json", R"(["0"])"))
                .code,
            2);
}

TEST_F(Cli, SuiteAndStar) {
  CliRun s = run_cli("suite --name det-identity --count 0");
  EXPECT_EQ(s.code, 0);
  EXPECT_TRUE(mqv::Json::parse(s.out)["passed"].get<bool>());
  CliRun r = run_cli("suite --name reflection-dualities --count 20 --seed 4");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(mqv::Json::parse(r.out)["instances"].size(), 20u);

  std::mt19937_64 rng(6);
  const mqv::LocalSystemData d = mqv::generate_star_tuple(4, rng);
  const std::string tf = file("t.json", mqv::tuple_to_json(d).dump());
  const std::string rf = path("r.json");
  ASSERT_EQ(run_cli("star to-rep --tuple " + tf + " -o " + rf).code, 0);
  CliRun t = run_cli("star to-tuple --rep " + rf + " --ladders " + tf);
  ASSERT_EQ(t.code, 0) << t.out;
  mqv::Json tj = mqv::Json::parse(t.out);
  EXPECT_TRUE(tj["containments"].get<bool>());
  EXPECT_EQ(mqv::tuple_from_json(tj).matrices, d.matrices);
}

TEST_F(Cli, RootsOfA3) {
  CliRun r = run_cli("roots --named A3 --dim " + file("d.json", "[1, 1, 1]"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(mqv::Json::parse(r.out)["roots"].size(), 6u);
}
