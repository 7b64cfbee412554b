#include <gtest/gtest.h>

#include "digitop/digitop.hpp"

using namespace digitop;
using nlohmann::json;

namespace {

AssertionSchema shukla_schema() {
  return schema_from_json(json::parse(R"({
    "arity": 2,
    "images": ["diamond"],
    "metrics": ["l2"],
    "constants": {"alpha": ["49/100"]},
    "hypotheses": [{"pred": "shukla31", "alpha": "$alpha"}],
    "conclusion": {"pred": "common_fixed_point"}
  })"));
}

}  // namespace

TEST(Falsify, FindsShuklaWitness) {
  const auto r = falsify(shukla_schema());
  ASSERT_FALSE(r.exhausted());
  const auto& w = *r.witness;
  EXPECT_EQ(w.image, "diamond");
  EXPECT_EQ(w.metric, MetricSpec::l2());
  ASSERT_TRUE(w.T);
  EXPECT_EQ(r.checked, w.index + 1);
  EXPECT_EQ(r.candidates, 256u * 256u);
  // The witness really satisfies the hypothesis and violates the conclusion.
  const MetricSpace s(diamond_image(), MetricSpec::l2());
  for (std::size_t x = 0; x < 4; ++x) EXPECT_FALSE(w.S[x] == x && (*w.T)[x] == x);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      EXPECT_LE(s.d(w.S[x], (*w.T)[y]).value(), 0.49 * s.d(x, w.S[x]).value() + s.d(y, (*w.T)[y]).value() + 1e-9);
  const auto j = falsify_result_to_json(r);
  EXPECT_FALSE(j.at("exhausted").get<bool>());
  EXPECT_EQ(j.at("witness").at("constants").at("alpha"), "49/100");
}

TEST(Falsify, ExtraHypothesisNarrowsWitness) {
  auto schema = shukla_schema();
  schema.hypotheses.push_back(detail::predicate_from_json(json::parse(R"({"pred":"bijective","on":"T"})"), 2));
  const auto r = falsify(schema);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(is_bijective(*r.witness->T));
}

TEST(Falsify, TautologyIsExhausted) {
  const auto schema = schema_from_json(json::parse(R"({"conclusion": {"pred": "true"}})"));
  const auto r = falsify(schema);
  EXPECT_TRUE(r.exhausted());
  EXPECT_EQ(r.checked, r.candidates);
  std::uint64_t expected = 0;
  for (const auto& e : builtin_catalog()) {
    std::uint64_t maps = 1;
    for (std::size_t i = 0; i < e.image->size(); ++i) maps *= e.image->size();
    expected += maps * applicable_metrics(*e.image).size();
  }
  EXPECT_EQ(r.candidates, expected);
}

TEST(Falsify, GeraghtyMapsHaveUniqueFixedPoints) {
  const auto schema = schema_from_json(json::parse(R"({
    "hypotheses": [{"pred": "geraghty"}],
    "conclusion": {"pred": "unique_fixed_point"}
  })"));
  EXPECT_TRUE(falsify(schema).exhausted());
}

TEST(Falsify, NegatedConclusionFindsFirstCandidate) {
  const auto schema = schema_from_json(json::parse(R"({"images": ["path2"], "conclusion": {"pred": "true", "negate": true}})"));
  const auto r = falsify(schema);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->index, 0u);
  EXPECT_EQ(r.checked, 1u);
}

TEST(Falsify, ImagesScannedSmallestFirst) {
  const auto schema = schema_from_json(json::parse(R"({
    "images": ["path4", "path2"],
    "metrics": ["l1"],
    "conclusion": {"pred": "constant"}
  })"));
  const auto r = falsify(schema);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->image, "path2");
  EXPECT_EQ(r.witness->index, 1u);  // (0,1) is the first nonconstant table
}

TEST(Falsify, Budget) {
  const auto schema = schema_from_json(json::parse(R"({"arity": 2, "conclusion": {"pred": "true"}})"));
  FalsifyOptions opt;
  opt.budget = 1000;
  EXPECT_THROW(falsify(schema, opt), BudgetExceeded);
  const auto small = schema_from_json(json::parse(R"({"images": ["path2"], "conclusion": {"pred": "true"}})"));
  opt.budget = 15;
  EXPECT_THROW(falsify(small, opt), BudgetExceeded);
  opt.budget = 16;
  EXPECT_TRUE(falsify(small, opt).exhausted());
}

TEST(Falsify, MalformedSchemas) {
  auto bad = [](const char* text) { return schema_from_json(json::parse(text)); };
  EXPECT_THROW(bad(R"([])"), ParseError);
  EXPECT_THROW(bad(R"({"hypotheses": []})"), ParseError);
  EXPECT_THROW(bad(R"({"conclusion": {"pred": "nonsense"}})"), ParseError);
  EXPECT_THROW(bad(R"({"conclusion": {"pred": "commute"}})"), ParseError);
  EXPECT_THROW(bad(R"({"arity": 3, "conclusion": {"pred": "true"}})"), ParseError);
  EXPECT_THROW(bad(R"({"images": ["torus"], "conclusion": {"pred": "true"}})"), ParseError);
  EXPECT_THROW(bad(R"({"metrics": ["l7"], "conclusion": {"pred": "true"}})"), ParseError);
  EXPECT_THROW(bad(R"({"arity": 2, "conclusion": {"pred": "shukla31"}})"), ParseError);
  EXPECT_THROW(bad(R"({"arity": 2, "conclusion": {"pred": "shukla31", "alpha": "$beta"}})"), ParseError);
  EXPECT_THROW(bad(R"({"constants": {"a": []}, "conclusion": {"pred": "true"}})"), ParseError);
  EXPECT_THROW(bad(R"({"conclusion": {"pred": "constant", "on": "T"}})"), ParseError);
  EXPECT_THROW(bad(R"({"conclusion": {"pred": "constant", "on": "U"}})"), ParseError);
}

TEST(Falsify, ParallelMatchesSerial) {
  const auto schema = schema_from_json(json::parse(R"({
    "arity": 2,
    "images": ["path3", "diamond"],
    "hypotheses": [{"pred": "compatible"}, {"pred": "continuous", "on": "T"}],
    "conclusion": {"pred": "commute"}
  })"));
  FalsifyOptions serial, par;
  par.parallelism = 4;
  const auto a = falsify(schema, serial);
  const auto b = falsify(schema, par);
  EXPECT_EQ(falsify_result_to_json(a), falsify_result_to_json(b));
  const auto s = shukla_schema();
  EXPECT_EQ(falsify_result_to_json(falsify(s, serial)), falsify_result_to_json(falsify(s, par)));
}
