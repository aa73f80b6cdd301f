#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("invopt_cli_" + std::to_string(::getpid()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int Run(const std::string& args, std::string* out = nullptr) {
    const fs::path capture = dir / "stdout.txt";
    const std::string cmd = std::string(INVOPT_BIN) + " " + args + " > " +
                            capture.string() + " 2> " +
                            (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    if (out) {
      std::ifstream in(capture);
      std::stringstream buf;
      buf << in.rdbuf();
      *out = buf.str();
    }
    return WEXITSTATUS(status);
  }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::string Ex1Variant(const std::string& from, const std::string& to) {
    std::ifstream in(INVOPT_EX1);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    text.replace(text.find(from), from.size(), to);
    return text;
  }

  fs::path dir;
};

TEST_F(Cli, SolveBiobjective) {
  std::string out;
  ASSERT_EQ(Run(std::string("solve ") + INVOPT_EX1 +
                    " --model biobj --weights unit --no-timing",
                &out),
            0);
  const auto r = nlohmann::json::parse(out);
  EXPECT_NEAR(r["l1_deviation"].get<double>(), 5.0 / 3, 1e-11);
  EXPECT_NEAR(r["eps_total"].get<double>(), 1.0, 1e-11);
}

TEST_F(Cli, SolveWritesOutFile) {
  const fs::path target = dir / "r.json";
  ASSERT_EQ(Run(std::string("solve ") + INVOPT_EX1 + " --tau 1e-3 --out " +
                target.string()),
            0);
  std::ifstream in(target);
  const auto r = nlohmann::json::parse(in);
  EXPECT_NEAR(r["l1_deviation"].get<double>(), 3.99, 0.05);
}

TEST_F(Cli, ExitCodes) {
  std::string out;
  EXPECT_EQ(Run("solve " + Write("bad.json", "{bad"), &out), 2);
  EXPECT_TRUE(out.empty());
  EXPECT_EQ(Run("solve " + Write("u.json", Ex1Variant("\"group\"", "\"grp\""))),
            2);
  EXPECT_EQ(Run(std::string("solve ") + INVOPT_EX1 + " --model nope"), 2);
  EXPECT_EQ(Run("solve " + Write("i.json", Ex1Variant("[4, 2]", "[0, 0]"))), 3);
  EXPECT_EQ(Run("solve " + Write("f.json", Ex1Variant("[4, 2]", "[3.5, 3]"))),
            3);
  EXPECT_EQ(Run(std::string("solve ") + INVOPT_EX1 +
                " --model biobj --weights 1,2"),
            2);
  EXPECT_EQ(Run("solve"), 2);
  EXPECT_EQ(Run("frobnicate"), 2);
}

TEST_F(Cli, CutplaneStreamsLog) {
  const fs::path log = dir / "log.jsonl";
  std::string out;
  ASSERT_EQ(Run(std::string("cutplane ") + INVOPT_EX1 + " --log " +
                    log.string() + " --oracle",
                &out),
            0);
  const auto r = nlohmann::json::parse(out);
  EXPECT_EQ(r["status"], "converged");
  EXPECT_NEAR(r["l1_deviation"].get<double>(), 2.0, 1e-8);
  std::ifstream in(log);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(nlohmann::json::parse(line)["iteration"], ++lines);
  }
  EXPECT_EQ(lines, r["iterations"].get<int>());

  ASSERT_EQ(Run(std::string("cutplane ") + INVOPT_EX1 + " --max-iters 0", &out),
            0);
  EXPECT_EQ(nlohmann::json::parse(out)["status"], "iter-limit");
}

TEST_F(Cli, Verify) {
  std::string out;
  ASSERT_EQ(Run(std::string("verify ") + INVOPT_EX1 + " --cost " +
                    Write("c.json", "{\"cost\": [1, 1]}"),
                &out),
            0);
  EXPECT_TRUE(nlohmann::json::parse(out)["optimal_e5"].get<bool>());
  EXPECT_EQ(Run(std::string("verify ") + INVOPT_EX1 + " --cost " +
                Write("c2.json", "[1]")),
            2);
}

TEST_F(Cli, GenerateAndBatch) {
  const fs::path gen = dir / "gen";
  ASSERT_EQ(Run("generate --out " + gen.string() +
                " --seed 4 --sizes 3 --per-size 6"),
            0);
  std::string one, four;
  ASSERT_EQ(Run("batch " + gen.string() + " --no-timing --parallel 1", &one),
            0);
  ASSERT_EQ(Run("batch " + gen.string() + " --no-timing --parallel 4 --csv " +
                    (dir / "s.csv").string(),
                &four),
            0);
  EXPECT_EQ(one, four);
  EXPECT_TRUE(fs::exists(dir / "s.csv"));

  fs::create_directories(dir / "empty");
  EXPECT_EQ(Run("batch " + (dir / "empty").string()), 2);
  Write("gen/zz.json", "{");
  EXPECT_EQ(Run("batch " + gen.string()), 1);
}

TEST_F(Cli, SeedFromEnvironment) {
  const std::string a = (dir / "a").string(), b = (dir / "b").string();
  ASSERT_EQ(Run("generate --out " + a + " --sizes 3 --per-size 2 --seed 12"),
            0);
  ASSERT_EQ(std::system(("INVOPT_SEED=12 " + std::string(INVOPT_BIN) +
                         " generate --out " + b +
                         " --sizes 3 --per-size 2 > /dev/null")
                            .c_str()),
            0);
  for (const auto& e : fs::directory_iterator(a)) {
    std::ifstream x(e.path()), y(fs::path(b) / e.path().filename());
    std::stringstream sx, sy;
    sx << x.rdbuf();
    sy << y.rdbuf();
    EXPECT_EQ(sx.str(), sy.str());
  }
}

}  // namespace
