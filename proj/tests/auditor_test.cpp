#include <gtest/gtest.h>

#include "digitop/digitop.hpp"

using namespace digitop;
using nlohmann::json;

TEST(CommonFixedPointRefutation, DiamondRefutes) {
  const auto r = verify_shukla31_refutation();
  EXPECT_EQ(r.verdict, Verdict::Confirmed) << r.detail;
  ASSERT_EQ(r.witness.at("rows").size(), 16u);
  for (const auto& row : r.witness.at("rows")) EXPECT_TRUE(row.at("holds").get<bool>()) << row.dump();
  EXPECT_EQ(r.witness.at("fix_S").size(), 4u);
  EXPECT_TRUE(r.witness.at("fix_T").empty());
  EXPECT_TRUE(r.witness.at("common_fixed_points").empty());
}

TEST(CommonFixedPointRefutation, WorstRowIsTight) {
  // x = y = (1,0): d(Sx,Ty) = 2 and the right side is alpha*0 + 2.
  const auto r = verify_shukla31_refutation();
  bool seen = false;
  for (const auto& row : r.witness.at("rows"))
    if (row.at("x") == json::array({1, 0}) && row.at("y") == json::array({1, 0})) {
      EXPECT_EQ(row.at("lhs").at("sq"), 4);
      EXPECT_EQ(row.at("rhs"), "2");
      seen = true;
    }
  EXPECT_TRUE(seen);
}

TEST(CommonFixedPointRefutation, Variants) {
  const auto d = diamond_image();
  EXPECT_EQ(verify_shukla31_refutation(Rational(49, 100), SelfMap::identity(d)).verdict, Verdict::Failed);
  EXPECT_EQ(verify_shukla31_refutation(Rational(1, 4)).verdict, Verdict::Confirmed);
  EXPECT_EQ(verify_shukla31_refutation(Rational(1, 2)).verdict, Verdict::Failed);
  EXPECT_EQ(verify_shukla31_refutation(Rational(0)).verdict, Verdict::Failed);
}

TEST(ExpansiveRefutation, WitnessAndVariants) {
  const auto r = verify_jk_remark32_refutation();
  EXPECT_EQ(r.verdict, Verdict::Confirmed);
  EXPECT_TRUE(r.witness.at("S_expansive").get<bool>());
  EXPECT_FALSE(r.witness.at("alpha_psi_expansive").get<bool>());
  EXPECT_EQ(verify_jk_remark32_refutation(ClosedFormFn::linear(1)).verdict, Verdict::Failed);
  EXPECT_EQ(verify_jk_remark32_refutation(ClosedFormFn::linear(Rational(1, 2)), 0).verdict, Verdict::Failed);
}

TEST(TranslationRefutation, AffineMaps) {
  const auto r = verify_jk34_35_refutation();
  EXPECT_EQ(r.verdict, Verdict::Confirmed);
  EXPECT_EQ(r.witness.at("fixed_points"), "empty");
  EXPECT_TRUE(r.witness.at("c1_continuous").get<bool>());
  EXPECT_EQ(verify_jk34_35_refutation({1, 0}).verdict, Verdict::Failed);
  EXPECT_EQ(verify_jk34_35_refutation({0, 5}).verdict, Verdict::Failed);
  EXPECT_EQ(verify_jk34_35_refutation({2, 0}).verdict, Verdict::Failed);
  // 1 - x = x has no integer root.
  EXPECT_EQ(verify_jk34_35_refutation({-1, 1}).verdict, Verdict::Confirmed);
}

TEST(NonconvergeExample, Windows) {
  EXPECT_EQ(verify_nonconverge_example(3).verdict, Verdict::Confirmed);
  EXPECT_EQ(verify_nonconverge_example(5).verdict, Verdict::Confirmed);
  EXPECT_EQ(verify_nonconverge_example(5, 1).verdict, Verdict::Failed);
  EXPECT_THROW(verify_nonconverge_example(2), ContractError);
}

TEST(Sweeps, GeraghtyTriviality) {
  const MetricSpace p4(path_image(4), MetricSpec::l1());
  const auto r = verify_geraghty_triviality(p4);
  EXPECT_EQ(r.verdict, Verdict::Confirmed);
  EXPECT_EQ(r.witness.at("maps_checked"), 256);
  EXPECT_EQ(r.witness.at("geraghty_maps"), 4);
  const MetricSpace dis(disconnected_pair_image(), MetricSpec::l1());
  EXPECT_EQ(verify_geraghty_triviality(dis).verdict, Verdict::Skipped);
  const MetricSpace dia(diamond_image(), MetricSpec::l2());
  EXPECT_EQ(verify_geraghty_triviality(dia).verdict, Verdict::Skipped);
}

TEST(Sweeps, DisconnectedCarrierIsSkipped) {
  const MetricSpace dis(disconnected_pair_image(), MetricSpec::l1());
  EXPECT_EQ(verify_gconst(dis).verdict, Verdict::Skipped);
  EXPECT_EQ(verify_krishna_special_case(dis).verdict, Verdict::Skipped);
  EXPECT_EQ(verify_kalj32_triviality(dis).verdict, Verdict::Skipped);
}

TEST(Sweeps, PairVerifiers) {
  const MetricSpace p3(path_image(3), MetricSpec::l1());
  EXPECT_EQ(verify_gconst(p3).verdict, Verdict::Confirmed);
  EXPECT_EQ(verify_gconst(p3, default_budget(), 3).witness, verify_gconst(p3).witness);
  EXPECT_EQ(verify_krishna_special_case(p3).verdict, Verdict::Confirmed);
  EXPECT_THROW(verify_gconst(p3, 27 * 27 - 1), BudgetExceeded);
}

TEST(Sweeps, WusAndKandt) {
  for (const auto& metric : applicable_metrics(*path_image(4))) {
    const MetricSpace s(path_image(4), metric);
    EXPECT_EQ(verify_wus_collapse(s).verdict, Verdict::Confirmed) << to_string(metric);
    EXPECT_EQ(verify_kandt(s).verdict, Verdict::Confirmed) << to_string(metric);
    EXPECT_EQ(verify_kalj32_triviality(s).verdict, Verdict::Confirmed) << to_string(metric);
  }
  const MetricSpace dia(diamond_image(), MetricSpec::l2());
  const auto k = verify_kandt(dia);
  EXPECT_EQ(k.verdict, Verdict::Confirmed);
  EXPECT_LE(k.witness.at("max_steps_observed").get<std::size_t>(), k.witness.at("step_bound").get<std::size_t>());
}

TEST(Sweeps, ContinuityAndSequences) {
  const auto r = verify_continuity_criterion(path_image(4));
  EXPECT_EQ(r.verdict, Verdict::Confirmed);
  EXPECT_EQ(r.witness.at("continuous_maps"), 68);
  EXPECT_EQ(verify_continuity_criterion(diamond_image()).witness.at("continuous_maps"), 84);
  const MetricSpace s(path_image(3), MetricSpec::l2());
  const auto e = verify_eventually_constant(s);
  EXPECT_EQ(e.verdict, Verdict::Confirmed);
  // 4 preambles times (3 + 9 + 27) cycles.
  EXPECT_EQ(e.witness.at("sequences_checked"), 4 * 39);
}

TEST(Sweeps, Compatibility) {
  const MetricSpace s(path_image(3), MetricSpec::l1());
  const auto sweep = sweep_compatibility(s);
  EXPECT_EQ(sweep.pairs, 729u);
  EXPECT_EQ(sweep.compatible, 423u);
  EXPECT_EQ(sweep.equivalence_violations, 0u);
  EXPECT_EQ(sweep.oracle_mismatches, 0u);
  EXPECT_EQ(sweep.jainr32_failures, 0u);
  EXPECT_EQ(sweep.jainr33_failures, 0u);
  const auto par = sweep_compatibility(s, default_budget(), 4);
  EXPECT_EQ(par.compatible, sweep.compatible);
  EXPECT_EQ(par.type_k, sweep.type_k);
  for (auto c : {CompatClaim::Equivalence, CompatClaim::TypeK, CompatClaim::TypeR, CompatClaim::JainR32,
                 CompatClaim::JainR33})
    EXPECT_EQ(compat_verdict(sweep, c, s).verdict, Verdict::Confirmed);
}

TEST(Sweeps, CompatVerdictReportsCounterexample) {
  const MetricSpace s(path_image(2), MetricSpec::l1());
  CompatSweep fake;
  fake.pairs = 16;
  fake.compat_not_k = 1;
  fake.first_equivalence_violation = 5;
  const auto r = compat_verdict(fake, CompatClaim::TypeK, s);
  EXPECT_EQ(r.verdict, Verdict::Failed);
  // Pair id 5 = f index 1, g index 1 in a space of four maps.
  EXPECT_EQ(r.witness.at("counterexample").at("f"), json::parse("[[0],[1]]"));
  EXPECT_EQ(r.witness.at("counterexample").at("g"), json::parse("[[0],[1]]"));
}

TEST(PsiTrivialities, AllInstancesPass) {
  const auto r = verify_psi_trivialities();
  EXPECT_EQ(r.verdict, Verdict::Confirmed);
  ASSERT_EQ(r.witness.at("instances").size(), 8u);
  for (const auto& inst : r.witness.at("instances")) EXPECT_TRUE(inst.at("pass").get<bool>()) << inst.dump();
  EXPECT_EQ(r.witness.at("zero_psi_maps"), 3);
}

TEST(OverCatalog, Aggregation) {
  const AuditContext ctx;
  const auto all_skip = over_catalog(ctx, [](const MetricSpace&) { return VerifierResult{Verdict::Skipped, {}, ""}; });
  EXPECT_EQ(all_skip.verdict, Verdict::Failed);
  const auto r = over_catalog(ctx, [](const MetricSpace& s) { return verify_geraghty_triviality(s); });
  EXPECT_EQ(r.verdict, Verdict::Confirmed);
  std::size_t runs = 0;
  for (const auto& e : builtin_catalog()) runs += applicable_metrics(*e.image).size();
  EXPECT_EQ(r.witness.at("runs").size(), runs);
  const auto single = over_catalog(ctx, [](const MetricSpace& s) { return verify_continuity_criterion(s.image_ptr()); },
                                   false);
  EXPECT_EQ(single.witness.at("runs").size(), builtin_catalog().size());
}

namespace {

json claim(const std::string& id, const std::string& status, json verifier = nullptr) {
  return {{"id", id}, {"source", "test"}, {"summary", "s"}, {"expected_status", status}, {"verifier", verifier}};
}

}  // namespace

TEST(Registry, Validation) {
  EXPECT_NO_THROW(load_registry(json::array({claim("a", "UNPROVEN"), claim("b", "REFUTED", "jk34_35_refutation")})));
  EXPECT_THROW(load_registry(json::array({claim("a", "UNPROVEN"), claim("a", "UNPROVEN")})), ParseError);
  EXPECT_THROW(load_registry(json::array({claim("a", "REFUTED")})), ParseError);
  EXPECT_THROW(load_registry(json::array({claim("a", "UNPROVEN", "gconst")})), ParseError);
  EXPECT_THROW(load_registry(json::array({claim("a", "CORRECT", "no_such_verifier")})), ParseError);
  EXPECT_THROW(load_registry(json::array({claim("a", "MAYBE")})), ParseError);
  EXPECT_THROW(load_registry(json::object()), ParseError);
  auto bad = claim("a", "DUPLICATE");
  bad["secondary_statuses"] = {"SOMETIMES"};
  EXPECT_THROW(load_registry(json::array({bad})), ParseError);
}

TEST(Registry, ShippedRegistryLoads) {
  const auto reg = load_registry_file();
  EXPECT_EQ(reg.size(), 41u);
  std::set<std::string> verifiers;
  for (const auto& c : reg)
    if (c.verifier) verifiers.insert(*c.verifier);
  for (const auto& [name, fn] : verifier_table()) EXPECT_TRUE(verifiers.count(name)) << name << " unused";
  for (const auto& c : reg) EXPECT_EQ(claim_from_json(claim_to_json(c)).id, c.id);
}

TEST(Registry, FilterAndUnknownId) {
  const auto reg = load_registry_file();
  const auto report = run_registry(reg, {"shukla-3.1"});
  ASSERT_EQ(report.claims.size(), 1u);
  EXPECT_EQ(report.claims[0].machine_verdict, Verdict::Confirmed);
  EXPECT_TRUE(report.ok());
  EXPECT_THROW(run_registry(reg, {"no-such-claim"}), ContractError);
}

TEST(Registry, ErrorsBecomeFailures) {
  const auto reg = load_registry(json::array({claim("k", "CORRECT", "kandt")}));
  AuditContext ctx;
  ctx.budget = 10;
  const auto report = run_registry(reg, {}, ctx);
  ASSERT_EQ(report.claims.size(), 1u);
  EXPECT_EQ(report.claims[0].machine_verdict, Verdict::Failed);
  EXPECT_NE(report.claims[0].detail.find("error:"), std::string::npos);
  EXPECT_FALSE(report.ok());
  EXPECT_EQ(report.summary.mismatched, 1u);
}

TEST(Report, JsonRoundTripAndMarkdown) {
  const auto reg = load_registry_file();
  const auto report = run_registry(reg, {"shukla-3.1", "masmali-3.1", "jk-3.4"});
  EXPECT_EQ(report_from_json(report_to_json(report)), report);
  const auto md = report_to_markdown(report);
  EXPECT_NE(md.find("## shukla-3.1"), std::string::npos);
  EXPECT_NE(md.find("### rows"), std::string::npos);
  std::size_t rows = 0;
  const auto start = md.find("### rows");
  for (auto pos = md.find("\n| true |", start); pos != std::string::npos; pos = md.find("\n| true |", pos + 1)) ++rows;
  EXPECT_EQ(rows, 16u);
  EXPECT_EQ(md.find("## masmali-3.1"), std::string::npos);
  EXPECT_THROW(report_from_json(json::object()), ParseError);
}

TEST(Report, DeterministicApartFromTiming) {
  const auto reg = load_registry_file();
  AuditContext par;
  par.parallelism = 3;
  const auto a = strip_timing(report_to_json(run_registry(reg)));
  const auto b = strip_timing(report_to_json(run_registry(reg, {}, par)));
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.dump().find("elapsed_ms") != std::string::npos);
}
