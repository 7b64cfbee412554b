#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string sample(const std::string& name) { return std::string(DIGITOP_SAMPLES_DIR) + "/" + name; }

Run cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DIGITOP_CLI + "\" " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(CliValidate, Diamond) {
  const auto r = cli("validate " + sample("diamond.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "OK: 4 points, c_2, connected\n");
}

TEST(CliValidate, Disconnected) {
  const auto r = cli("validate " + sample("disconnected.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("disconnected (2 components)"), std::string::npos) << r.out;
}

TEST(CliValidate, Rejections) {
  const auto dup = cli("validate " + sample("duplicate_point.json"));
  EXPECT_EQ(dup.code, 2);
  EXPECT_NE(dup.out.find("(0,0)"), std::string::npos) << dup.out;
  EXPECT_EQ(cli("validate " + sample("bad_adjacency.json")).code, 2);
  EXPECT_EQ(cli("validate " + sample("no_such_file.json")).code, 2);
  EXPECT_EQ(cli("validate").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
}

TEST(CliCheck, Classifiers) {
  const auto img = "--image " + sample("diamond.json");
  const auto id = cli("check geraghty " + img + " --map " + sample("diamond_identity.json"));
  EXPECT_EQ(id.code, 1) << id.out;
  EXPECT_NE(id.out.find("witness:"), std::string::npos);
  EXPECT_EQ(cli("check geraghty " + img + " --map " + sample("diamond_constant.json")).code, 0);
  EXPECT_EQ(cli("check wus " + img + " --map " + sample("diamond_constant.json")).code, 0);
  const auto neg = cli("check contraction " + img + " --map " + sample("diamond_negation.json"));
  EXPECT_EQ(neg.code, 1);
  EXPECT_NE(neg.out.find("modulus k* = 1"), std::string::npos) << neg.out;
  EXPECT_EQ(cli("check expansive " + img + " --map " + sample("diamond_negation.json")).code, 0);
  EXPECT_EQ(cli("check continuity " + img + " --map " + sample("diamond_negation.json")).code, 0);
  EXPECT_EQ(cli("check geraghty " + img + " --map " + sample("diamond_identity.json") + " --metric l7").code, 2);
  EXPECT_EQ(cli("check sparkly " + img + " --map " + sample("diamond_identity.json")).code, 2);
}

TEST(CliCheck, Continuity) {
  const auto r = cli("check continuity --image " + sample("window6.json") + " --map " + sample("window6_nonconverge.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "continuous (c_1): true\n");
}

TEST(CliCheck, Compatibility) {
  const auto base = "--image " + sample("path3.json") + " --map " + sample("path3_compatible_f.json");
  EXPECT_EQ(cli("check compatible " + base + " --map2 " + sample("path3_compatible_g.json")).code, 0);
  EXPECT_EQ(cli("check compatible-k " + base + " --map2 " + sample("path3_compatible_g.json")).code, 0);
  const auto bad = cli("check compatible-r " + base + " --map2 " + sample("path3_incompatible_g.json"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("coincidence points: (1)"), std::string::npos) << bad.out;
  EXPECT_EQ(cli("check compatible " + base).code, 2);
}

TEST(CliCheck, AlphaPsi) {
  const auto base = "--image " + sample("path2.json") + " --map " + sample("path2_identity.json");
  const auto r = cli("check alpha-psi-expansive " + base + " --weights " + sample("path2_unit_weights.json") + " --fn " +
                     sample("psi_half.json"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_EQ(cli("check alpha-admissible " + base + " --weights " + sample("path2_unit_weights.json")).code, 0);
  EXPECT_EQ(cli("check alpha-psi-expansive " + base).code, 2);
}

TEST(CliAudit, FullRegistry) {
  const auto r = cli("audit run");
  ASSERT_EQ(r.code, 0) << r.out.substr(0, 2000);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("summary").at("mismatched"), 0);
  EXPECT_EQ(j.at("summary").at("total"), 41);
}

TEST(CliAudit, SingleClaimMarkdown) {
  const std::string out = std::string(::testing::TempDir()) + "cli_shukla.md";
  const auto r = cli("audit run --claim shukla-3.1 --format md --out " + out);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("1/1 claims matched"), std::string::npos);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("## shukla-3.1"), std::string::npos);
  EXPECT_NE(ss.str().find("### rows"), std::string::npos);
}

TEST(CliAudit, Errors) {
  EXPECT_EQ(cli("audit run --claim no-such-claim").code, 2);
  EXPECT_EQ(cli("audit run --format xml").code, 2);
  EXPECT_EQ(cli("audit run --registry " + sample("diamond.json")).code, 2);
  EXPECT_EQ(cli("audit run --parallel 0").code, 2);
  EXPECT_EQ(cli("audit").code, 2);
}

TEST(CliAudit, ParallelFlag) {
  const auto r = cli("audit run --claim compat-equivalences --parallel 2");
  EXPECT_EQ(r.code, 0) << r.out.substr(0, 2000);
}

TEST(CliFalsify, Outcomes) {
  const auto found = cli("falsify --schema " + sample("schema_shukla31.json"));
  EXPECT_EQ(found.code, 0) << found.out;
  const auto j = nlohmann::json::parse(found.out);
  EXPECT_EQ(j.at("witness").at("image"), "diamond");
  EXPECT_EQ(cli("falsify --schema " + sample("schema_tautology.json")).code, 1);
  EXPECT_EQ(cli("falsify --schema " + sample("schema_geraghty_unique_fixed_point.json")).code, 1);
  const auto big = cli("falsify --schema " + sample("schema_oversized.json"));
  EXPECT_EQ(big.code, 2);
  EXPECT_NE(big.out.find("budget"), std::string::npos) << big.out;
  EXPECT_EQ(cli("falsify --schema " + sample("diamond.json")).code, 2);
  EXPECT_EQ(cli("falsify --schema " + sample("schema_tautology.json") + " --budget 3").code, 2);
}
