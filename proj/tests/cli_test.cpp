#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"
#include "test_util.hpp"

namespace ocds {
namespace {

using testing::scenario_path;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, RunStoryOne) {
  auto r = invoke({"run", scenario_path("story1.ocds")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("P = {1,2,3,4,6}"), std::string::npos);
  EXPECT_NE(r.out.find("result: PASS (5/5 assertions)"), std::string::npos);
}

TEST(Cli, TsvRows) {
  auto r = invoke({"run", scenario_path("story1.ocds"), "--format", "tsv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("final\tP\t1,2,3,4,6\n"), std::string::npos);
  EXPECT_NE(r.out.find("assert\tEND\tconsistent\tPASS\tP={6} Q={6}\n"),
            std::string::npos);
  EXPECT_NE(r.out.find("assert\t0\tconsistent\tPASS\tP={} Q={}\n"),
            std::string::npos);
}

TEST(Cli, StoryTwoWithoutFilterFails) {
  auto r = invoke({"run", scenario_path("story2.ocds"),
                   "--disable-effectful-filter", "--format", "tsv"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("assert\tEND\tconsistent\tFAIL\tP={} Q={6}"),
            std::string::npos);
  EXPECT_NE(r.err.find("story2.ocds:17: assertion failed"), std::string::npos)
      << r.err;
}

TEST(Cli, TraceShowsDiscard) {
  auto r = invoke({"run", scenario_path("story2.ocds"), "--trace"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Q local delete 6 discarded (non-effectful)"),
            std::string::npos);
}

TEST(Cli, IdenticalInvocationsIdenticalOutput) {
  std::vector<std::string> args{"run", scenario_path("triangle.ocds"),
                                "--trace", "--seed", "3"};
  auto a = invoke(args);
  auto b = invoke(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, b.code);
}

TEST(Cli, CheckHom) {
  auto ok = invoke({"check-hom", scenario_path("doorlight.fsm")});
  EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
  auto bad = invoke({"check-hom", scenario_path("doorlight_corrupt.fsm")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("violation h ({DoorClosed}, RingBell)"),
            std::string::npos);
  EXPECT_NE(bad.out.find("violations=1"), std::string::npos);
}

TEST(Cli, CheckLens) {
  auto ok = invoke({"check-lens", scenario_path("story1.ocds")});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("lens P PASS samples=1000 getput_failures=0 "
                        "putget_failures=0"),
            std::string::npos)
      << ok.out;
  auto bad = invoke({"check-lens", scenario_path("bad_lens.ocds")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("counterexample P"), std::string::npos);
  EXPECT_NE(bad.out.find("warning asymmetric link P Q"), std::string::npos);
}

TEST(Cli, UsageAndParseErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frob"}).code, 2);
  EXPECT_EQ(invoke({"run"}).code, 2);
  EXPECT_EQ(invoke({"run", "/nonexistent.ocds"}).code, 2);
  EXPECT_EQ(invoke({"run", scenario_path("story1.ocds"), "--format", "xml"}).code, 2);
  auto r = invoke({"check-hom", scenario_path("story1.ocds")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(Cli, StrictRejectsAsymmetricLink) {
  auto warn = invoke({"run", scenario_path("bad_lens.ocds")});
  EXPECT_EQ(warn.code, 0);
  EXPECT_NE(warn.err.find("asymmetric"), std::string::npos);
  EXPECT_EQ(invoke({"run", scenario_path("bad_lens.ocds"), "--strict"}).code, 2);
}

}  // namespace
}  // namespace ocds
