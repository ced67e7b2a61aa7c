#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpmut/cli.hpp"
#include "qpmut/generators.hpp"
#include "qpmut/serialize.hpp"

using namespace qpmut;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args, const std::string& input = {}) {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string shell(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int rc = pclose(p);
  *status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

const std::string kZ5 = "mckay:n=5,w=1,2,2";
const std::string kZ6 = "mckay:n=6,w=2,5,5";

}  // namespace

TEST(Cli, GenerateRoundTrip) {
  const Result g = run({"generate", kZ5});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(qp_from_text(g.out), mckay_cyclic({5, {1, 2, 2}}));
  // re-reading from stdin and from a file gives the same structure
  const Result again = run({"reduce"}, g.out);
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(qp_from_text(again.out), mckay_cyclic({5, {1, 2, 2}}));
  const auto path = std::filesystem::temp_directory_path() / "qpmut_cli_z5.json";
  std::ofstream(path) << g.out;
  EXPECT_EQ(run({"validate", path.string()}).code, 0);
  const auto out_path = std::filesystem::temp_directory_path() / "qpmut_cli_out.json";
  EXPECT_EQ(run({"generate", kZ5, "-o", out_path.string()}).code, 0);
  std::ifstream f(out_path);
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(f), {}), g.out);
}

TEST(Cli, Z6PipelineInProcess) {
  const Result g = run({"generate", kZ6});
  const Result m = run({"mutate", "--vertex", "0"}, g.out);
  ASSERT_EQ(m.code, 0) << m.err;
  const Result o = run({"obstruct"}, m.out);
  EXPECT_EQ(o.code, 0) << o.err;
  const Json j = parse_json_text(o.out);
  ASSERT_TRUE(j.contains("certificate"));
  EXPECT_EQ(j["certificate"]["degree_sum"], Json::array({3, 0, 0}));
}

TEST(Cli, Z6PipelineThroughShell) {
  int status = -1;
  const std::string bin = QPMUT_BIN;
  const std::string out = shell(bin + " generate " + kZ6 + " | " + bin + " mutate --vertex 0 | " + bin + " obstruct", &status);
  EXPECT_EQ(status, 0);
  EXPECT_NE(out.find("\"degree_sum\""), std::string::npos);
}

TEST(Cli, SearchExitCodes) {
  const Result clean = run({"search", "--depth", "3", kZ5});
  EXPECT_EQ(clean.code, cli::kOk) << clean.err;
  EXPECT_EQ(parse_json_text(clean.out)["status"], "clean");
  EXPECT_EQ(run({"search", "--depth", "1", kZ6}).code, cli::kWitness);
  EXPECT_EQ(run({"search", "--depth", "3", "--node-cap", "1", kZ5}).code, cli::kInconclusive);
}

TEST(Cli, VertexAbsent) {
  const Result r = run({"mutate", "--vertex", "9", kZ5});
  EXPECT_EQ(r.code, cli::kFailure);
  EXPECT_NE(r.err.find("vertex absent"), std::string::npos) << r.err;
}

TEST(Cli, MalformedJson) {
  const Result r = run({"reduce"}, "{\n  \"grading\": [\n");
  EXPECT_EQ(r.code, cli::kFailure);
  EXPECT_NE(r.err.find("line"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("column"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kFailure);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kFailure);
  EXPECT_EQ(run({"mutate", kZ5}).code, cli::kFailure);
  EXPECT_EQ(run({"generate", "mckay:n=5,w=1,1,1"}).code, cli::kFailure);
  EXPECT_EQ(run({"dims", "--format", "xml", kZ5}).code, cli::kFailure);
}

TEST(Cli, Formats) {
  const Result dot = run({"search", "--depth", "1", "--format", "dot", kZ6});
  EXPECT_EQ(dot.out.rfind("digraph mutations", 0), 0u);
  const Result text = run({"dims", "--max-degree", "2", "--format", "text", kZ5});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("30"), std::string::npos);
  const Result hh0 = run({"hh0", "--max-degree", "3", "--length-grading", kZ5});
  EXPECT_EQ(parse_json_text(hh0.out)["totals"], Json::array({5, 0, 0, 3}));
}

TEST(Cli, LengthCapFlagAndEnv) {
  const Result r = run({"generate", "--length-cap", "32", kZ5});
  EXPECT_EQ(parse_json_text(r.out)["length_cap"], 32);
  setenv("QPMUT_LENGTH_CAP", "24", 1);
  const Result e = run({"generate", kZ5});
  unsetenv("QPMUT_LENGTH_CAP");
  EXPECT_EQ(parse_json_text(e.out)["length_cap"], 24);
}

TEST(Cli, ByteStableAcrossRunsAndThreads) {
  const std::string z5 = run({"generate", kZ5}).out;
  const std::vector<std::vector<std::string>> invocations{
      {"generate", kZ5},
      {"mutate", "--vertex", "0", "--report", kZ5},
      {"reduce", "--report", kZ5},
      {"obstruct", kZ6},
      {"validate", "preproj:type=A~2,lambda=1,1,-2"},
  };
  for (const auto& args : invocations) {
    const Result a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << args[0];
  }
  for (const std::string sub : {"search", "dims", "hh0"}) {
    std::vector<std::string> base{sub};
    if (sub == "search") base.insert(base.end(), {"--depth", "3"});
    else base.insert(base.end(), {"--max-degree", "4"});
    std::string first;
    for (const std::string threads : {"1", "2", "4", "8"}) {
      auto args = base;
      args.insert(args.end(), {"--threads", threads, kZ5});
      const Result r = run(args);
      ASSERT_EQ(r.code, 0) << r.err;
      if (first.empty()) first = r.out;
      EXPECT_EQ(r.out, first) << sub << " threads " << threads;
    }
  }
  EXPECT_EQ(run({"reduce"}, z5).out, run({"reduce"}, z5).out);
}
