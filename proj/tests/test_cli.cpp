#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "khb/functor_ops.hpp"
#include "khb/serialization.hpp"
#include "support.hpp"

using namespace khb::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(RunConfig c) {
  std::ostringstream out, err;
  int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig make(std::string command, std::vector<std::string> inputs) {
  RunConfig c;
  c.command = std::move(command);
  c.inputs = std::move(inputs);
  return c;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { setenv("KH_CORPUS_DIR", khb::test::corpus_path("").c_str(), 1); }
};

}  // namespace

TEST_F(Cli, HomologyText) {
  auto r = run_cli(make("kh homology", {"pd/trefoil_left.pd"}));
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_NE(r.out.find("Z/2"), std::string::npos);
  EXPECT_EQ(run_cli(make("kh homology", {"trefoil_left"})).out, r.out);
}

TEST_F(Cli, HomologyJsonMatchesGolden) {
  auto c = make("kh homology", {"pd/figure_eight.pd"});
  c.json = true;
  auto r = run_cli(c);
  ASSERT_EQ(r.code, kSuccess) << r.err;
  auto j = khb::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(khb::kh_table_from_json(j["homology"]), khb::test::load_golden("figure_eight"));
}

TEST_F(Cli, InlinePdAndReduced) {
  auto c = make("kh homology", {"PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]"});
  c.reduced = true;
  c.basepoint = 1;
  EXPECT_EQ(run_cli(c).code, kSuccess);
  c.basepoint.reset();
  EXPECT_EQ(run_cli(c).code, kInputError);
}

TEST_F(Cli, BadInputsGiveInputError) {
  EXPECT_EQ(run_cli(make("kh homology", {"PD[X(1,2,3,4)]"})).code, kInputError);
  EXPECT_EQ(run_cli(make("functor check", {"/nonexistent.json"})).code, kInputError);
  EXPECT_EQ(run_cli(make("no such command", {})).code, kInputError);
}

TEST_F(Cli, VerifyDiagramAndFunctor) {
  auto r = run_cli(make("kh verify", {"pd/hopf.pd"}));
  EXPECT_EQ(r.code, kSuccess) << r.out << r.err;
  EXPECT_NE(r.out.find("C-2"), std::string::npos);
  EXPECT_EQ(run_cli(make("kh verify", {"functors/rp2_wedge_G.json"})).code, kSuccess);
  EXPECT_EQ(run_cli(make("functor check", {"functors/multiple_extend.json"})).code, kVerificationFailed);
}

TEST_F(Cli, MatchingSearchWithFix) {
  auto c = make("functor search-matchings", {"functors/multiple_extend.json"});
  auto r = run_cli(c);
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_NE(r.out.find("24 coherent matchings"), std::string::npos) << r.out;
  c.fixes = {"11>00 via 10|01:b1∘a1=d1∘c1"};
  r = run_cli(c);
  EXPECT_NE(r.out.find("6 satisfying"), std::string::npos) << r.out;
  c.fixes = {"bogus"};
  EXPECT_EQ(run_cli(c).code, kInputError);
}

TEST_F(Cli, ZeroExtendHasNoMatching) {
  auto c = make("functor check", {"functors/zero_extend.json"});
  c.search = true;
  auto r = run_cli(c);
  EXPECT_EQ(r.code, kVerificationFailed);
  EXPECT_NE(r.out.find("no coherent matching exists"), std::string::npos) << r.out;
}

TEST_F(Cli, SearchWritesFirstCompletion) {
  auto path = std::filesystem::temp_directory_path() / "khb_cli_completion.json";
  auto c = make("functor search-matchings", {"functors/rp2_wedge_G_partial.json"});
  c.output = path.string();
  ASSERT_EQ(run_cli(c).code, kSuccess);
  auto written = khb::functor_from_json(khb::read_json_file(path.string()));
  EXPECT_TRUE(khb::same_functor_data(written.functor, khb::test::load_functor("rp2_wedge_G").functor));
  std::filesystem::remove(path);
}

TEST_F(Cli, Certificates) {
  EXPECT_EQ(run_cli(make("functor certificate", {"certificates/rp2_wedge.json"})).code, kSuccess);
  auto r = run_cli(make("functor certificate", {"certificates/rp2_wedge_corrupted.json"}));
  EXPECT_EQ(r.code, kVerificationFailed);
  EXPECT_NE(r.out.find("rejected"), std::string::npos);
}

TEST_F(Cli, DeltaAndExamples) {
  auto r = run_cli(make("delta homology", {"delta/rp2_6.json"}));
  EXPECT_EQ(r.code, kSuccess) << r.err;
  EXPECT_NE(r.out.find("Z/2"), std::string::npos);
  EXPECT_EQ(run_cli(make("examples run", {})).code, kSuccess);
  EXPECT_EQ(run_cli(make("examples run", {"delta"})).code, kSuccess);
}
