#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kData = fs::path(APLAB_DATA_DIR) / "actions";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("aplab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the tool with stdout and stderr captured; returns the exit code.
  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + APLAB_CLI + "\" " + args + " >\"" + (dir_ / "stdout").string() +
                            "\" 2>\"" + (dir_ / "stderr").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return slurp(dir_ / "stdout"); }
  std::string err() const { return slurp(dir_ / "stderr"); }
  fs::path tmp(const std::string& name) const { return dir_ / name; }
  static std::string input(const std::string& name) { return "\"" + (kData / name).string() + "\""; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, PipelineBaumslagSolitarPasses) {
  EXPECT_EQ(run("--no-timestamp pipeline " + input("bs12.act")), 0) << err();
  const std::string o = out();
  EXPECT_NE(o.find("stage 1: skipped"), std::string::npos);
  EXPECT_NE(o.find("R: K=64 C=1 D=4"), std::string::npos);
  EXPECT_NE(o.find("membership: pass"), std::string::npos);
  EXPECT_NE(o.find("\"pass\": true"), std::string::npos);
}

TEST_F(Cli, FlowOnTranslations) {
  const fs::path csv = tmp("scan.csv");
  EXPECT_EQ(run("--no-timestamp flow " + input("translations.act") + " --samples 50 --csv \"" + csv.string() + "\""), 0)
      << err();
  EXPECT_NE(out().find("afp: 1 at x=0"), std::string::npos);
  EXPECT_NE(out().find("covering number: 1"), std::string::npos);
  const std::string c = slurp(csv);
  EXPECT_EQ(c.rfind("s,d_W,is_almost_period,s_exact,d_W_exact\n0,0,1,0,0\n1,0,1,1,0\n", 0), 0u);
}

TEST_F(Cli, VerifyRawBaumslagSolitarFails) {
  EXPECT_EQ(run("--no-timestamp verify-r " + input("raw-bs12.act") + " --C 1 --D 4"), 2) << err();
  EXPECT_NE(out().find("witness: x=16 generator=b kind=max_above_D value=16 bound=4"), std::string::npos);
}

TEST_F(Cli, StructuralErrors) {
  EXPECT_EQ(run("normalize " + input("affine-fixed.act")), 3);
  EXPECT_NE(err().find("fixed point"), std::string::npos);
  std::ofstream(tmp("bad.act")) << "action bad\ngen a affine 1 x\n";
  EXPECT_EQ(run("verify-r \"" + tmp("bad.act").string() + "\""), 3);
  EXPECT_NE(err().find("line 2, column 16"), std::string::npos);
  EXPECT_EQ(run("verify-r " + input("bs12.act") + " --K nope"), 3);
  EXPECT_EQ(run("frobnicate"), 3);
}

TEST_F(Cli, MorphismVerdicts) {
  EXPECT_EQ(run("--no-timestamp morphism " + input("bs12.act")), 0);
  EXPECT_NE(out().find("verdict: scaling cocycle nontrivial"), std::string::npos);
  EXPECT_NE(out().find("tail slope b: s+=2 s-=2"), std::string::npos);
  EXPECT_EQ(run("--no-timestamp morphism " + input("translations.act")), 0);
  EXPECT_NE(out().find("verdict: translation-like"), std::string::npos);
  EXPECT_NE(out().find("translation number a: 1 "), std::string::npos);
}

TEST_F(Cli, ReportsAreDeterministic) {
  const std::string r1 = tmp("r1.txt").string();
  const std::string r2 = tmp("r2.txt").string();
  ASSERT_EQ(run("--no-timestamp morphism " + input("free-pl.act") + " --report \"" + r1 + "\""), 0);
  ASSERT_EQ(run("--no-timestamp morphism " + input("free-pl.act") + " --report \"" + r2 + "\""), 0);
  EXPECT_EQ(slurp(r1), slurp(r2));
  EXPECT_EQ(slurp(r1).find("generated:"), std::string::npos);
  ASSERT_EQ(run("morphism " + input("free-pl.act") + " --report \"" + r1 + "\""), 0);
  EXPECT_NE(slurp(r1).find("# generated: "), std::string::npos);
}

TEST_F(Cli, GeneratedCorpusFilesReproduce) {
  const fs::path n = tmp("n.act");
  ASSERT_EQ(run("--no-timestamp normalize " + input("bs12.act") + " --depth 8 --out \"" + n.string() + "\""), 0);
  EXPECT_EQ(slurp(n), slurp(kData / "normalized-bs12.act"));
  const fs::path p = tmp("p.act");
  ASSERT_EQ(run("extend-interval " + input("interval-f.act") + " --periods 4 --out \"" + p.string() + "\""), 0);
  EXPECT_EQ(slurp(p), slurp(kData / "periodic-f.act"));
}
