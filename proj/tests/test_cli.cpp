#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "infousage_cli_test";

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + INFOUSAGE_BIN + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string header_line(const fs::path& csv) {
  std::ifstream f(csv);
  std::string line;
  while (std::getline(f, line))
    if (line.empty() || line[0] != '#') return line;
  return {};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = kRoot / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string out(const std::string& sub) const { return "--out " + (dir / sub).string(); }
  fs::path dir;
};

const std::string kFigure1 = "figure1 --reps 40 --set m=30 --set points=3";

}  // namespace

TEST_F(Cli, HelpListsExperimentsAndDefaults) {
  EXPECT_EQ(run("--help"), 0);
  const std::string cmd = std::string(INFOUSAGE_BIN) + " --help";
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::string text;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) text.append(buf, n);
  pclose(p);
  for (const char* s : {"figure1", "prop3-sandwich", "mu_max = 4.0", "INFOUSAGE_SEED"})
    EXPECT_NE(text.find(s), std::string::npos) << s;
}

TEST_F(Cli, GoldenCsvHeaders) {
  ASSERT_EQ(run(kFigure1 + " " + out("a")), 0);
  EXPECT_EQ(header_line(dir / "a" / "figure1.csv"), "mu,bias,bias_se,H_T,bound");
  EXPECT_EQ(header_line(dir / "a" / "figure1_checks.csv"),
            "check,kind,bound,empirical,tolerance,slack,satisfied,vacuous");
  ASSERT_EQ(run("pvalue --reps 500 " + out("a")), 0);
  EXPECT_EQ(header_line(dir / "a" / "pvalue.csv"),
            "m,epsilon,P_small,P_small_se,mean_selected,mean_selected_se,I_TZ,bound,pattern_lower_bound");
  ASSERT_EQ(run("classify --reps 500 --set n=6 " + out("a")), 0);
  EXPECT_EQ(header_line(dir / "a" / "classify.csv"),
            "n,gap,gap_se,I_hat,H_pattern,bound,vc_cap,vc_bound,joint_counted");
}

TEST_F(Cli, SameSeedByteIdenticalOutputs) {
  ASSERT_EQ(run(kFigure1 + " --seed 9 --svg " + out("a")), 0);
  ASSERT_EQ(run(kFigure1 + " --seed 9 --svg " + out("b")), 0);
  for (const char* f : {"figure1.csv", "figure1.svg", "figure1_checks.csv"}) {
    const auto a = slurp(dir / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(dir / "b" / f)) << f;
  }
  ASSERT_EQ(run(kFigure1 + " --seed 10 " + out("c")), 0);
  EXPECT_NE(slurp(dir / "a" / "figure1.csv"), slurp(dir / "c" / "figure1.csv"));
}

TEST_F(Cli, EnvironmentSeedIsTheDefault) {
  ASSERT_EQ(run(kFigure1 + " " + out("env"), "INFOUSAGE_SEED=9"), 0);
  ASSERT_EQ(run(kFigure1 + " --seed 9 " + out("flag")), 0);
  EXPECT_EQ(slurp(dir / "env" / "figure1.csv"), slurp(dir / "flag" / "figure1.csv"));
  ASSERT_EQ(run(kFigure1 + " --seed 9 " + out("over"), "INFOUSAGE_SEED=3"), 0);
  EXPECT_EQ(slurp(dir / "over" / "figure1.csv"), slurp(dir / "flag" / "figure1.csv"));
  EXPECT_EQ(run(kFigure1 + " " + out("bad"), "INFOUSAGE_SEED=abc"), 3);
}

TEST_F(Cli, JsonFormatEmbedsConfig) {
  ASSERT_EQ(run(kFigure1 + " --format json --seed 4 " + out("j")), 0);
  const auto text = slurp(dir / "j" / "figure1.json");
  EXPECT_NE(text.find("\"seed\": 4"), std::string::npos);
  EXPECT_NE(text.find("\"params\""), std::string::npos);
  EXPECT_NE(text.find("\"rows\""), std::string::npos);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"experiment": "figure1", "seed": 9, "replications": 40,
    "output_dir": ")" << (dir / "cfg").string() << R"(", "m": 30, "points": 3, "emit_svg": true})";
  ASSERT_EQ(run("--config " + cfg.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "cfg" / "figure1.svg"));
  ASSERT_EQ(run(kFigure1 + " --seed 9 " + out("flag")), 0);
  EXPECT_EQ(slurp(dir / "cfg" / "figure1.csv"), slurp(dir / "flag" / "figure1.csv"));
  ASSERT_EQ(run("--config " + cfg.string() + " --seed 11 " + out("over")), 0);
  EXPECT_NE(slurp(dir / "over" / "figure1.csv"), slurp(dir / "flag" / "figure1.csv"));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("figure9 " + out("x")), 2);
  EXPECT_EQ(run("figure1 --set bogus=1 " + out("x")), 2);
  EXPECT_EQ(run("figure1 --set m=-3 " + out("x")), 2);
  EXPECT_EQ(run("figure1 --format xml " + out("x")), 2);
  EXPECT_EQ(run("--reps 3"), 2);
  EXPECT_EQ(run("figure1 --config /nonexistent/run.json"), 3);
  fs::create_directories(dir);
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_EQ(run("--config " + (dir / "broken.json").string()), 3);
}

TEST_F(Cli, UnwritableOutputFailsBeforeSimulating) {
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  // a billion replications would take far longer than the test timeout
  EXPECT_EQ(run("bounds-table --reps 1000000000 --out " + (dir / "file" / "sub").string()), 4);
}

TEST_F(Cli, CheckModeFailsOnViolatedBound) {
  // Two replications: the plug-in entropy is at most ln 2, far below the
  // information a max over 1000 statistics really uses.
  const std::string args = "figure1 --reps 2 --set points=2 " + out("chk");
  EXPECT_EQ(run(args), 0);
  EXPECT_EQ(run(args + " --check"), 5);
  EXPECT_EQ(run(kFigure1 + " --check " + out("ok")), 0);
}
