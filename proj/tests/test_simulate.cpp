#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "bnet/bnet.hpp"
#include "test_util.hpp"

using namespace bnet;

TEST(ForwardSample, ReproducibleBitForBit) {
  const BayesNet net = preset("structure1-skewed");
  const CategoricalDataset a = forward_sample(net, 500, 7);
  const CategoricalDataset b = forward_sample(net, 500, 7);
  std::ostringstream sa, sb;
  a.to_csv(sa);
  b.to_csv(sb);
  EXPECT_EQ(sa.str(), sb.str());

  const CategoricalDataset c = forward_sample(net, 500, 8);
  std::ostringstream sc;
  c.to_csv(sc);
  EXPECT_NE(sa.str(), sc.str());
}

TEST(ForwardSample, EmptyAndDeterministic) {
  const BayesNet net = preset("structure2-nonskewed");
  EXPECT_EQ(forward_sample(net, 0, 3).num_records(), 0);

  // one-hot CPTs force a single record pattern
  std::vector<Variable> vars = testutil::make_vars({2, 2});
  RealTable root(1, 2);
  root.at(0, 0) = 1.0;
  root.recompute_rows();
  RealTable child(2, 2);
  child.at(0, 1) = 1.0;  // x1 = 1 when x0 = 0
  child.at(1, 0) = 1.0;
  child.recompute_rows();
  const BayesNet det(vars, Dag(2, {{0, 1}}), {root, child});
  const CategoricalDataset d = forward_sample(det, 50, 99);
  for (std::int64_t t = 0; t < d.num_records(); ++t) {
    EXPECT_EQ(d.value(t, 0), 0);
    EXPECT_EQ(d.value(t, 1), 1);
  }
}

TEST(ForwardSample, MarginalFrequencyWithinBinomialBound) {
  std::vector<Variable> vars = testutil::make_vars({2});
  RealTable cpt(1, 2);
  cpt.at(0, 0) = 0.7;
  cpt.at(0, 1) = 0.3;
  cpt.recompute_rows();
  const BayesNet net(vars, Dag(1), {cpt});
  const CategoricalDataset d = forward_sample(net, 100000, 12345);
  std::int64_t zeros = 0;
  for (std::int64_t t = 0; t < d.num_records(); ++t)
    if (d.value(t, 0) == 0) ++zeros;
  EXPECT_NEAR(static_cast<double>(zeros) / 100000.0, 0.7, 0.01);
}

TEST(JointProbability, UniformAndChain) {
  // all CPTs uniform over three binary variables: every assignment 1/8
  std::vector<Variable> vars = testutil::make_vars({2, 2, 2});
  std::vector<RealTable> cpts;
  for (int i = 0; i < 3; ++i) {
    RealTable t(1, 2);
    t.at(0, 0) = t.at(0, 1) = 0.5;
    t.recompute_rows();
    cpts.push_back(std::move(t));
  }
  const BayesNet uniform(vars, Dag(3), cpts);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        EXPECT_NEAR(uniform.joint_probability(std::vector<int>{a, b, c}), 0.125, 1e-15);

  // chain 0 -> 1 -> 2: probability is the product of the looked-up rows
  RealTable r0(1, 2);
  r0.at(0, 0) = 0.6;
  r0.at(0, 1) = 0.4;
  r0.recompute_rows();
  RealTable r1(2, 2);
  r1.at(0, 0) = 0.8;
  r1.at(0, 1) = 0.2;
  r1.at(1, 0) = 0.3;
  r1.at(1, 1) = 0.7;
  r1.recompute_rows();
  RealTable r2 = r1;
  const BayesNet chain(vars, Dag(3, {{0, 1}, {1, 2}}), {r0, r1, r2});
  EXPECT_NEAR(chain.joint_probability(std::vector<int>{0, 1, 0}), 0.6 * 0.2 * 0.3, 1e-15);
  EXPECT_NEAR(chain.joint_probability(std::vector<int>{1, 0, 1}), 0.4 * 0.3 * 0.2, 1e-15);
}

TEST(JointProbability, NormalizesOverAssignmentSpace) {
  SplitMix64 rng(15);
  for (int cas = 0; cas < 10; ++cas) {
    const BayesNet net = testutil::random_net(rng, {2, 3, 2});
    double total = 0.0;
    std::vector<int> a(3, 0);
    for (;;) {
      total += net.joint_probability(a);
      int pos = 2;
      while (pos >= 0 && ++a[pos] == net.variables()[pos].cardinality) a[pos--] = 0;
      if (pos < 0) break;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ForwardSample, EmpiricalJointCloseInTotalVariation) {
  for (const char* name : {"structure1-skewed", "structure2-nonskewed"}) {
    const BayesNet net = preset(name);
    const CategoricalDataset d = forward_sample(net, 100000, 2468);
    std::map<std::vector<int>, std::int64_t> freq;
    for (std::int64_t t = 0; t < d.num_records(); ++t) {
      std::vector<int> rec(4);
      for (int i = 0; i < 4; ++i) rec[i] = d.value(t, i);
      ++freq[rec];
    }
    double tv = 0.0;
    std::vector<int> a(4, 0);
    for (;;) {
      const double p = net.joint_probability(a);
      const auto it = freq.find(a);
      const double emp =
          it == freq.end() ? 0.0 : static_cast<double>(it->second) / 100000.0;
      tv += std::abs(p - emp);
      int pos = 3;
      while (pos >= 0 && ++a[pos] == 2) a[pos--] = 0;
      if (pos < 0) break;
    }
    EXPECT_LE(0.5 * tv, 0.02) << name;
  }
}

TEST(Preset, ShapesAndSkewness) {
  const BayesNet sk = preset("structure1-skewed");
  const BayesNet ns = preset("structure2-nonskewed");

  for (const BayesNet* net : {&sk, &ns}) {
    EXPECT_EQ(net->num_vars(), 4);
    EXPECT_EQ(net->dag().num_arcs(), 5);
    for (int i = 0; i < 4; ++i) {
      EXPECT_EQ(net->variables()[i].cardinality, 2);
      for (std::int64_t j = 0; j < net->cpt(i).q; ++j) {
        double sum = 0.0;
        for (int k = 0; k < 2; ++k) sum += net->cpt(i).at(j, k);
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
    }
  }
  EXPECT_TRUE(sk.dag() == ns.dag());

  // spread of p(state 0) across parent configurations
  auto spread = [](const BayesNet& net, int i) {
    double lo = 1.0, hi = 0.0;
    for (std::int64_t j = 0; j < net.cpt(i).q; ++j) {
      lo = std::min(lo, net.cpt(i).at(j, 0));
      hi = std::max(hi, net.cpt(i).at(j, 0));
    }
    return hi - lo;
  };
  for (int i = 1; i < 4; ++i) {
    EXPECT_GE(spread(sk, i), 0.6) << "skewed var " << i;
    EXPECT_LE(spread(ns, i), 0.1 + 1e-12) << "non-skewed var " << i;
  }
}

TEST(Preset, UnknownNameRejected) {
  EXPECT_THROW(preset("structure3"), ParseError);
}

TEST(BayesNet, ValidatesCptRows) {
  std::vector<Variable> vars = testutil::make_vars({2});
  RealTable bad(1, 2);
  bad.at(0, 0) = 0.7;
  bad.at(0, 1) = 0.7;
  bad.recompute_rows();
  EXPECT_THROW(BayesNet(vars, Dag(1), {bad}), DimensionError);

  RealTable negative(1, 2);
  negative.at(0, 0) = -0.1;
  negative.at(0, 1) = 1.1;
  negative.recompute_rows();
  EXPECT_THROW(BayesNet(vars, Dag(1), {negative}), DimensionError);

  RealTable wrong_shape(2, 2);
  wrong_shape.at(0, 0) = wrong_shape.at(1, 0) = 1.0;
  wrong_shape.recompute_rows();
  EXPECT_THROW(BayesNet(vars, Dag(1), {wrong_shape}), DimensionError);
}

TEST(SplitMix64Stream, KnownFirstOutputs) {
  // reference outputs for seed 0 of the standard SplitMix64 stream
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}
