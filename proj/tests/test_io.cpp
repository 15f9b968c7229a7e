#include <gtest/gtest.h>

#include <sstream>

#include "bnet/bnet.hpp"
#include "bnet/json_io.hpp"
#include "test_util.hpp"

using namespace bnet;

namespace {

CategoricalDataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  return CategoricalDataset::from_csv(in);
}

}  // namespace

TEST(DatasetCsv, RoundTripsBitForBit) {
  SplitMix64 rng(20);
  for (int cas = 0; cas < 10; ++cas) {
    CategoricalDataset d = testutil::random_dataset(rng, 4, 4, rng.next() % 40);
    std::ostringstream first;
    d.to_csv(first);
    std::istringstream in(first.str());
    const CategoricalDataset back = CategoricalDataset::from_csv(in);
    std::ostringstream second;
    back.to_csv(second);
    EXPECT_EQ(first.str(), second.str());
  }
}

TEST(DatasetCsv, HeaderOnlyIsEmptyDataset) {
  const CategoricalDataset d = parse_csv("a,b\n2,3\n");
  EXPECT_EQ(d.num_records(), 0);
  EXPECT_EQ(d.num_vars(), 2);
  EXPECT_EQ(d.variables()[1].cardinality, 3);
}

TEST(DatasetCsv, MalformedInputsNameTheOffendingField) {
  EXPECT_THROW(parse_csv(""), ParseError);
  EXPECT_THROW(parse_csv("a,b\n"), ParseError);
  EXPECT_THROW(parse_csv("a,b\n2\n"), ParseError);       // card row too short
  EXPECT_THROW(parse_csv("a,b\n2,1\n"), ParseError);     // cardinality < 2
  EXPECT_THROW(parse_csv("a,a\n2,2\n"), ParseError);     // duplicate name
  EXPECT_THROW(parse_csv("a,b\n2,2\n0\n"), ParseError);  // row too short
  EXPECT_THROW(parse_csv("a,b\n2,2\n0,x\n"), ParseError);
  EXPECT_THROW(parse_csv("a,b\n2,2\n0,2\n"), ParseError);  // out of range
  EXPECT_THROW(parse_csv("a,b\n2,2\n0,\n"), ParseError);   // missing value

  try {
    parse_csv("a,b\n2,2\n0,7\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("7"), std::string::npos);
  }
}

TEST(StructureJson, RoundTrip) {
  const std::vector<Variable> vars = testutil::make_vars({2, 3, 2});
  const Dag dag(3, {{0, 1}, {0, 2}, {1, 2}});
  const json j = structure_to_json(vars, dag);
  const Structure back = structure_from_json(j);
  EXPECT_EQ(back.variables, vars);
  EXPECT_TRUE(back.dag == dag);
}

TEST(StructureJson, MalformedRejected) {
  EXPECT_THROW(structure_from_json(json::object()), ParseError);
  EXPECT_THROW(structure_from_json(json::parse(
                   R"({"variables":[{"name":"a"}],"arcs":[]})")),
               ParseError);
  EXPECT_THROW(structure_from_json(json::parse(
                   R"({"variables":[{"name":"a","cardinality":2}],
                       "arcs":[["a","z"]]})")),
               ParseError);
  // a cycle in the file counts as malformed input
  EXPECT_THROW(structure_from_json(json::parse(
                   R"({"variables":[{"name":"a","cardinality":2},
                                    {"name":"b","cardinality":2}],
                       "arcs":[["a","b"],["b","a"]]})")),
               ParseError);
}

TEST(BayesNetJson, RoundTripPresets) {
  for (const char* name : {"structure1-skewed", "structure2-nonskewed"}) {
    const BayesNet net = preset(name);
    const BayesNet back = bayes_net_from_json(bayes_net_to_json(net));
    EXPECT_TRUE(back.dag() == net.dag());
    EXPECT_EQ(back.variables(), net.variables());
    for (int i = 0; i < 4; ++i)
      EXPECT_EQ(back.cpt(i).cells, net.cpt(i).cells);
    // sampling from the round-tripped net is identical
    std::ostringstream a, b;
    forward_sample(net, 50, 1).to_csv(a);
    forward_sample(back, 50, 1).to_csv(b);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(BayesNetJson, MalformedRejected) {
  json j = bayes_net_to_json(preset("structure1-skewed"));
  j.erase("cpts");
  EXPECT_THROW(bayes_net_from_json(j), ParseError);

  json wrong_rows = bayes_net_to_json(preset("structure1-skewed"));
  wrong_rows["cpts"]["x3"] = json::array({json::array({0.5, 0.5})});
  EXPECT_THROW(bayes_net_from_json(wrong_rows), ParseError);

  json bad_sum = bayes_net_to_json(preset("structure1-skewed"));
  bad_sum["cpts"]["x1"][0][0] = 0.9;
  bad_sum["cpts"]["x1"][0][1] = 0.9;
  EXPECT_THROW(bayes_net_from_json(bad_sum), ParseError);
}

TEST(ScoreReportJson, FieldLayout) {
  SplitMix64 rng(21);
  const CategoricalDataset d = testutil::random_dataset(rng, 2, 2, 20);
  const Dag g(2, {{0, 1}});

  const json j = score_report_to_json(score(d, g, ScoreKind::exact_ml, BDeuScheme{2.0}));
  EXPECT_EQ(j["kind"], "exact-ml");
  EXPECT_EQ(j["scheme"], "bdeu");
  EXPECT_DOUBLE_EQ(j["ess"].get<double>(), 2.0);
  ASSERT_EQ(j["families"].size(), 2u);
  EXPECT_EQ(j["families"][1]["variable"], "v1");
  EXPECT_EQ(j["families"][1]["parents"], json::array({"v0"}));
  double total = 0.0;
  for (const auto& f : j["families"]) total += f["value_bits"].get<double>();
  EXPECT_NEAR(total, j["total_bits"].get<double>(), 1e-9);

  const json ja = score_report_to_json(score(d, g, ScoreKind::aic, K2Scheme{}));
  EXPECT_TRUE(ja["scheme"].is_null());
  EXPECT_TRUE(ja["ess"].is_null());
}

TEST(CellsJson, CarriesAlphaStarWhenGiven) {
  std::vector<SweepRow> rows{{1.0, CellResult{100, 3, 7, 2, 10}}};
  std::vector<AlphaStarRow> alpha{{100, 6.0, CellResult{}}};
  const json j = cells_to_json("bdeu", rows, true, &alpha);
  EXPECT_DOUBLE_EQ(j[0]["alpha_star"].get<double>(), 6.0);
  EXPECT_EQ(j[0]["n"], 100);
  const json plain = cells_to_json("bic", rows, false);
  EXPECT_TRUE(plain[0]["ess"].is_null());
  EXPECT_FALSE(plain[0].contains("alpha_star"));
}
