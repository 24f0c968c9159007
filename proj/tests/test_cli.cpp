#include "capkit/cli.hpp"
#include "capkit/error.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace capkit;
using namespace capkit::cli;
using nlohmann::json;

namespace {

ReportDocument run_args(const std::vector<std::string>& args) { return run(parse_command(args)); }

int exit_status(const std::string& args, const std::string& redirect = ">/dev/null 2>&1") {
  const std::string command = std::string("\"") + CAPKIT_CLI_PATH + "\" " + args + " " + redirect;
  const int raw = std::system(command.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ParseCommand, Examples) {
  const auto c = parse_command({"capability", "cyclic:6"});
  EXPECT_EQ(c.verb, Verb::Capability);
  EXPECT_EQ(c.subjects, std::vector<std::string>{"cyclic:6"});
  EXPECT_TRUE(c.variety.is_abelian_variety());
  EXPECT_EQ(c.engine, Engine::Auto);
  EXPECT_EQ(c.format, Format::Text);

  const auto p = parse_command({"pair", "cyclic:6 x cyclic:6", "--subgroup", "gens:(2,0);(0,2)"});
  EXPECT_EQ(p.verb, Verb::Pair);
  EXPECT_EQ(p.subgroup, "gens:(2,0);(0,2)");

  const auto v = parse_command({"capability", "abelian:[4,4,4]", "--variety", "PN:1,2"});
  EXPECT_EQ(v.variety, VarietyDescriptor::polynilpotent({1, 2}));
}

TEST(ParseCommand, Flags) {
  const auto c = parse_command({"epicenter", "cyclic:4", "cyclic:6", "--engine", "bar", "--max-order", "30", "--force",
                                "--format", "json", "--no-timing"});
  EXPECT_EQ(c.verb, Verb::Epicenter);
  EXPECT_EQ(c.subjects.size(), 2u);
  EXPECT_EQ(c.engine, Engine::Bar);
  EXPECT_EQ(c.max_order, 30u);
  EXPECT_TRUE(c.max_order_given);
  EXPECT_TRUE(c.force);
  EXPECT_EQ(c.format, Format::Json);
  EXPECT_FALSE(c.timing);
  EXPECT_EQ(engine_options(c).homology_cap, 30u);
  EXPECT_EQ(engine_options(parse_command({"epicenter", "cyclic:4"})).homology_cap, kDefaultHomologyCap);
}

TEST(ParseCommand, VerifyDefaults) {
  EXPECT_EQ(parse_command({"verify", "engines"}).max_order, 16u);
  EXPECT_EQ(parse_command({"verify", "classifier"}).max_order, 64u);
  EXPECT_EQ(parse_command({"verify", "products"}).max_order, 24u);
  EXPECT_EQ(parse_command({"verify", "pairs", "--abelian-order", "50"}).abelian_order, 50u);
  EXPECT_EQ(parse_command({"verify", "classifier", "--max-order", "0"}).max_order, 0u);
}

TEST(ParseCommand, Errors) {
  EXPECT_THROW(parse_command({"capabilty", "cyclic:6"}), ParseError);
  EXPECT_THROW(parse_command({"capability", "cyclik:6"}), ParseError);
  EXPECT_THROW(parse_command({"capability", "cyclic:6", "--variety", "N:0"}), ParseError);
  EXPECT_THROW(parse_command({"capability", "cyclic:6", "--variety", "solvable"}), ParseError);
  EXPECT_THROW(parse_command({"capability", "cyclic:6", "--engine", "fast"}), ParseError);
  EXPECT_THROW(parse_command({"capability", "cyclic:6", "--format", "xml"}), ParseError);
  EXPECT_THROW(parse_command({"pair", "cyclic:6"}), ParseError);
  EXPECT_THROW(parse_command({"pair", "cyclic:6", "cyclic:2", "--subgroup", "whole"}), ParseError);
  EXPECT_THROW(parse_command({"pair", "cyclic:6", "--subgroup", "whole", "--variety", "N:2"}), ParseError);
  EXPECT_THROW(parse_command({"verify", "everything"}), ParseError);
  EXPECT_THROW(parse_command({}), ParseError);
  EXPECT_THROW(parse_command({"capability"}), ParseError);
  EXPECT_THROW(parse_command({"--help"}), HelpRequested);
  EXPECT_THROW(parse_command({"capability", "--help"}), HelpRequested);
  try {
    parse_command({"capability", "cyclic:6 x qq:2"});
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 11u);
  }
}

TEST(Run, Examples) {
  const auto c6 = run_args({"capability", "cyclic:6"});
  EXPECT_EQ(c6.exit_code, kExitOk);
  EXPECT_EQ(c6.body["subjects"][0]["verdict"], "not_capable");

  const auto p = run_args({"pair", "cyclic:6", "--subgroup", "gens:(2)"});
  EXPECT_EQ(p.exit_code, kExitOk);
  EXPECT_EQ(p.body["subjects"][0]["verdict"], "not_capable");
  EXPECT_EQ(p.body["subjects"][0]["subgroup_order"], 3);
  EXPECT_EQ(p.body["subjects"][0]["exterior_center"]["invariant_factors"], json::array({3}));

  const auto q = run_args({"pair", "cyclic:6 x cyclic:6", "--subgroup", "gens:(2,0);(0,2)"});
  EXPECT_EQ(q.body["subjects"][0]["verdict"], "capable");

  const auto d4 = run_args({"capability", "dihedral:4", "--variety", "N:2"});
  EXPECT_EQ(d4.exit_code, kExitUndetermined);
  EXPECT_EQ(d4.body["subjects"][0]["verdict"], "undetermined");
}

TEST(Run, ErrorExitCodes) {
  const auto cap = run_args({"capability", "perm:(1 2 3 4 5);(1 2)", "--max-order", "120"});
  EXPECT_EQ(cap.exit_code, kExitCap);
  EXPECT_EQ(cap.body["error"]["kind"], "cap");

  const auto closure = run_args({"capability", "perm:(1 2 3 4 5);(1 2)"});
  EXPECT_EQ(closure.exit_code, kExitCap);

  const auto normal = run_args({"pair", "perm:(1 2 3);(1 2)", "--subgroup", "gens:(2)"});
  EXPECT_EQ(normal.exit_code, kExitParse);
  EXPECT_EQ(normal.body["error"]["kind"], "invalid");

  const auto sub = run_args({"pair", "cyclic:6", "--subgroup", "gens:(1,2)"});
  EXPECT_EQ(sub.exit_code, kExitParse);
  EXPECT_EQ(sub.body["error"]["kind"], "parse");
  EXPECT_TRUE(sub.body["error"].contains("position"));

  const auto forced_bar = run_args({"epicenter", "cyclic:6 x cyclic:6", "--engine", "bar"});
  EXPECT_EQ(forced_bar.exit_code, kExitCap);
  const auto forced_ok =
      run_args({"epicenter", "cyclic:6 x cyclic:5", "--engine", "bar", "--max-order", "30", "--force"});
  EXPECT_EQ(forced_ok.exit_code, kExitOk);
  EXPECT_EQ(forced_ok.body["subjects"][0]["engine"], "homology");
}

TEST(Run, JsonSchema) {
  const auto doc = run_args({"capability", "abelian:[4,2]", "--no-timing"});
  const json& b = doc.body;
  EXPECT_EQ(b["schema"], "capkit/1");
  EXPECT_TRUE(b.contains("command"));
  EXPECT_EQ(b["failures"], 0);
  ASSERT_EQ(b["subjects"].size(), 1u);
  const json& e = b["subjects"][0];
  for (const char* key : {"spec", "order", "engine", "variety", "epicenter", "verdict", "criterion", "ms"})
    EXPECT_TRUE(e.contains(key)) << key;
  EXPECT_EQ(e["spec"], "abelian:[4,2]");
  EXPECT_EQ(e["order"], 8);
  EXPECT_EQ(e["engine"], "abelian");
  EXPECT_EQ(e["variety"], "abelian");
  EXPECT_EQ(e["epicenter"]["invariant_factors"], json::array({2}));
  EXPECT_EQ(e["epicenter"]["generators"].size(), 1u);
  EXPECT_EQ(e["verdict"], "not_capable");
  EXPECT_EQ(e["ms"], 0);
}

TEST(Run, MultiplierAndAnalyze) {
  const auto m = run_args({"multiplier", "abelian:[6,6]", "dihedral:4", "perm:(1 2 3 4);(1 2)"});
  EXPECT_EQ(m.body["subjects"][0]["multiplier"]["invariant_factors"], json::array({6}));
  EXPECT_EQ(m.body["subjects"][1]["multiplier"]["invariant_factors"], json::array({2}));
  EXPECT_EQ(m.body["subjects"][2]["multiplier"]["invariant_factors"], json::array({2}));
  const auto a = run_args({"analyze", "dihedral:4 x cyclic:3"});
  EXPECT_EQ(a.exit_code, kExitOk);
  EXPECT_TRUE(a.body["subjects"][0].contains("details"));
  EXPECT_EQ(a.body["subjects"][0]["verdict"], "not_capable");
}

TEST(Render, JsonIsDeterministicWithoutTiming) {
  const std::vector<std::string> args = {"analyze", "cyclic:6 x cyclic:6", "quaternion:8", "--no-timing",
                                         "--format", "json"};
  const auto first = render_json(run_args(args));
  const auto second = render_json(run_args(args));
  EXPECT_EQ(first, second);
  EXPECT_EQ(json::parse(first)["schema"], "capkit/1");
}

TEST(Render, TextTable) {
  const auto text = render_text(run_args({"capability", "cyclic:6", "abelian:[2,2]"}));
  EXPECT_NE(text.find("verdict"), std::string::npos);
  EXPECT_NE(text.find("not_capable"), std::string::npos);
  EXPECT_NE(text.find("abelian:[2,2]"), std::string::npos);
  const auto err = render_text(run_args({"capability", "perm:(1 2 3 4 5);(1 2)"}));
  EXPECT_EQ(err.rfind("error: ", 0), 0u);
}

TEST(Verify, QuickSuites) {
  const auto classifier = run_args({"verify", "classifier", "--max-order", "0", "--no-timing"});
  EXPECT_EQ(classifier.exit_code, kExitOk);
  EXPECT_EQ(classifier.body["failures"], 0);
  EXPECT_GT(classifier.body["instances"].get<std::size_t>(), 0u);

  const auto engines = run_args({"verify", "engines", "--max-order", "8"});
  EXPECT_EQ(engines.exit_code, kExitOk);
  EXPECT_EQ(engines.body["failures"], 0);

  const auto products = run_args({"verify", "products", "--max-order", "12", "--abelian-order", "20"});
  EXPECT_EQ(products.exit_code, kExitOk);
  bool v4_witness = false;
  for (const auto& w : products.body["witnesses"])
    if (w["spec"] == "(cyclic:2, cyclic:2)") v4_witness = true;
  EXPECT_TRUE(v4_witness);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(exit_status("capability cyclic:6"), 0);
  EXPECT_EQ(exit_status("capability \"cyclic:6 x cyclic:6\" --format json"), 0);
  EXPECT_EQ(exit_status("capability dihedral:4 --variety N:2"), 3);
  EXPECT_EQ(exit_status("capability cyclik:6"), 2);
  EXPECT_EQ(exit_status("frobnicate cyclic:6"), 2);
  EXPECT_EQ(exit_status("capability \"perm:(1 2 3 4 5);(1 2)\" --max-order 120"), 4);
  EXPECT_EQ(exit_status("pair cyclic:6 --subgroup \"gens:(2)\""), 0);
  EXPECT_EQ(exit_status("--help"), 0);
  EXPECT_EQ(exit_status("verify classifier --max-order 0"), 0);
}

TEST(Binary, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "capkit_cli_test_report.json";
  std::filesystem::remove(path);
  EXPECT_EQ(exit_status("epicenter cyclic:4 --format json --no-timing --output \"" + path.string() + "\""), 0);
  const auto body = json::parse(slurp(path));
  EXPECT_EQ(body["subjects"][0]["epicenter"]["invariant_factors"], json::array({4}));
  std::filesystem::remove(path);
}
