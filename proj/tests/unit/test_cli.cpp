#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pathint/error.hpp"
#include "pathint_cli/cli.hpp"

using namespace pathint;
using namespace pathint::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("pathint_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::filesystem::path dir_;
};

const char* kP1 = "t,x\n0,0\n1,1\n2,0.5\n3,1.5\n4,-1\n";

}  // namespace

TEST(CliParse, Truncate) {
  auto cmd = parse({"truncate", "--c", "0.4", "--method", "skorohod", "--in", "p.csv", "--out", "x.csv"});
  EXPECT_EQ(cmd.subcommand, Subcommand::truncate);
  EXPECT_EQ(cmd.flags.at("c"), "0.4");
  EXPECT_EQ(cmd.flags.at("method"), "skorohod");
  EXPECT_EQ(cmd.flags.at("in"), "p.csv");
  EXPECT_EQ(cmd.flags.at("out"), "x.csv");
}

TEST(CliParse, Experiment) {
  auto cmd = parse({"experiment", "--config", "cfg.json", "--out", "rep.csv"});
  EXPECT_EQ(cmd.subcommand, Subcommand::experiment);
  EXPECT_EQ(cmd.flags.at("config"), "cfg.json");
}

TEST(CliParse, UsageErrors) {
  const std::vector<std::vector<std::string>> bad = {
      {},
      {"truncate", "--c", "-1", "--in", "p.csv"},
      {"truncate", "--c", "0", "--in", "p.csv"},
      {"truncate", "--in", "p.csv"},
      {"truncate", "--c", "0.4", "--in", "p.csv", "--colour", "red"},
      {"truncate", "--c", "0.4", "--in", "p.csv", "--method", "reflect"},
      {"generate", "--steps", "0"},
      {"generate", "--steps", "4", "--kind", "fractional"},
      {"variation", "--c", "-0.1", "--in", "p.csv"},
      {"integrate", "--integrand", "a.csv"},
      {"experiment", "--config", "a.json", "--default", "tv_limit"},
      {"launch"},
  };
  for (const auto& args : bad) {
    EXPECT_THROW(parse(args), UsageError);
    EXPECT_EQ(invoke(args).code, kExitUsage);
  }
}

TEST(CliRun, HelpExitsZero) {
  auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("truncate"), std::string::npos);
  EXPECT_EQ(invoke({"truncate", "--help"}).code, kExitOk);
}

TEST(CliRun, GenerateIsDeterministic) {
  auto a = invoke({"generate", "--steps", "4", "--seed", "7"});
  auto b = invoke({"generate", "--steps", "4", "--seed", "7"});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  std::istringstream in(a.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line != "t,x") ++rows;
  EXPECT_EQ(rows, 5);
  EXPECT_NE(a.out.find("\n0,0\n"), std::string::npos);
}

TEST_F(CliFiles, TruncateWritesCommentedPath) {
  write("p.csv", kP1);
  auto r = invoke({"truncate", "--c", "0.4", "--in", path("p.csv"), "--out", path("x.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read("x.csv"),
            "# method=skorohod c=0.4\nt,x\n0,0\n1,0.59999999999999998\n2,0.59999999999999998\n3,"
            "1.1000000000000001\n4,-0.59999999999999998\n");
  auto tv = invoke({"truncate", "--c", "0.4", "--method", "tvmin", "--in", path("p.csv")});
  EXPECT_EQ(tv.code, kExitOk);
  EXPECT_EQ(tv.out.rfind("# method=tvmin c=0.4\n", 0), 0u);
}

TEST_F(CliFiles, VariationAndIntegrate) {
  write("p.csv", kP1);
  auto v = invoke({"variation", "--c", "0.8", "--in", path("p.csv")});
  ASSERT_EQ(v.code, kExitOk) << v.err;
  EXPECT_NE(v.out.find("t,tv,utv_c,dtv_c,tv_c\n"), std::string::npos);
  EXPECT_NE(v.out.find("\n4,5,"), std::string::npos);

  auto left = invoke({"integrate", "--integrand", path("p.csv"), "--integrator", path("p.csv")});
  ASSERT_EQ(left.code, kExitOk) << left.err;
  EXPECT_NE(left.out.find("t,value\n"), std::string::npos);
  EXPECT_NE(left.out.find("\n4,-3.75\n"), std::string::npos);

  auto b = invoke({"integrate", "--integrand", path("p.csv"), "--integrator", path("p.csv"),
                   "--convention", "bichteler", "--threshold", "0.001"});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_NE(b.out.find("\n4,-3.75\n"), std::string::npos);

  EXPECT_EQ(invoke({"integrate", "--integrand", path("p.csv"), "--integrator", path("p.csv"),
                    "--convention", "bichteler"})
                .code,
            kExitUsage);
  EXPECT_EQ(invoke({"integrate", "--integrand", path("p.csv"), "--integrator", path("p.csv"),
                    "--threshold", "0.1"})
                .code,
            kExitUsage);
}

TEST_F(CliFiles, BadInputIsUsageErrorWithoutOutput) {
  write("bad.csv", "t,x\n0,1\n0,2\n");
  auto r = invoke({"truncate", "--c", "0.4", "--in", path("bad.csv"), "--out", path("x.csv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("NonMonotoneTimes"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(path("x.csv")));
  EXPECT_FALSE(std::filesystem::exists(path("x.csv.tmp")));
  EXPECT_EQ(invoke({"truncate", "--c", "0.4", "--in", path("missing.csv")}).code, kExitUsage);
}

TEST_F(CliFiles, ExperimentGridTooCoarse) {
  write("cfg.json", R"({"experiment":"tv_limit","steps":1000,"seeds":[1]})");
  auto r = invoke({"experiment", "--config", path("cfg.json"), "--out", path("rep.csv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("grid too coarse"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(path("rep.csv")));
}

TEST_F(CliFiles, ExperimentConfigAndDefault) {
  write("cfg.json", R"({"experiment":"tv_limit","steps":16384,"seeds":[1,2],"c_grid":[0.1]})");
  auto r = invoke({"experiment", "--config", path("cfg.json"), "--out", path("rep.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(read("rep.csv").find("seed,param,statistic,value,target,abs_error\n"), std::string::npos);

  write("broken.json", R"({"experiment":"tv_limit","colour":1})");
  EXPECT_EQ(invoke({"experiment", "--config", path("broken.json")}).code, kExitUsage);
  EXPECT_EQ(invoke({"experiment"}).code, kExitUsage);
}

TEST(CliRun, IdentitySuiteDefaultPasses) {
  auto r = invoke({"experiment", "--default", "run_identity_suite"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(CliRun, ViolationsMapToExitOne) {
  EXPECT_TRUE(is_violation(Errc::IdentityViolation));
  EXPECT_TRUE(is_violation(Errc::BoundViolation));
  EXPECT_TRUE(is_violation(Errc::CarrierViolation));
  EXPECT_TRUE(is_violation(Errc::PhiOutOfRange));
  EXPECT_FALSE(is_violation(Errc::GridTooCoarse));
  EXPECT_FALSE(is_violation(Errc::ParseError));
}
