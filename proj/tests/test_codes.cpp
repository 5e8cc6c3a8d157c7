#include <gtest/gtest.h>

#include <set>

#include "capsdp/codes.hpp"

namespace capsdp {
namespace {

std::set<Rational> inner_products(const Code& code) {
  std::set<Rational> out;
  for (int i = 0; i < code.size(); ++i)
    for (int j = 0; j < code.size(); ++j) out.insert(code.inner(i, j));
  return out;
}

Code hemisphere183() { return cap_subcode(e8_roots(), root_pole(8), Rational(0)); }

TEST(E8, RootCount) {
  const Code e8 = e8_roots();
  EXPECT_EQ(e8.size(), 240);
  EXPECT_EQ(e8.n(), 8);
  EXPECT_NO_THROW(e8.validate());
}

TEST(E8, InnerProducts) {
  const std::set<Rational> want{Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
  EXPECT_EQ(inner_products(e8_roots()), want);
}

TEST(E8, MinimalAngle) {
  EXPECT_EQ(max_inner_product(e8_roots()), Rational(1, 2));
  EXPECT_NEAR(min_angle(e8_roots()), M_PI / 3, 1e-15);
}

// Each root has 56 neighbours at inner product 1/2 (the kissing configuration).
TEST(E8, NeighbourCount) {
  const Code e8 = e8_roots();
  for (int i : {0, 57, 239}) {
    int count = 0;
    for (int j = 0; j < e8.size(); ++j) count += e8.inner(i, j) == Rational(1, 2);
    EXPECT_EQ(count, 56);
  }
}

TEST(E8, FloatPointsAreUnit) {
  const Code e8 = e8_roots();
  for (int i = 0; i < e8.size(); ++i) EXPECT_NEAR(e8.point(i).norm(), 1.0, 1e-15);
}

TEST(Dn, Counts) {
  EXPECT_EQ(dn_roots(3).size(), 12);
  EXPECT_EQ(dn_roots(4).size(), 24);
  EXPECT_EQ(dn_roots(5).size(), 40);
  for (int n : {3, 4, 5}) {
    EXPECT_NO_THROW(dn_roots(n).validate());
    EXPECT_NEAR(min_angle(dn_roots(n)), M_PI / 3, 1e-15);
    for (const Rational& r : inner_products(dn_roots(n)))
      EXPECT_TRUE(r == -1 || r == Rational(-1, 2) || r == 0 || r == Rational(1, 2) || r == 1);
  }
  EXPECT_THROW(dn_roots(2), std::invalid_argument);
}

TEST(CapSubcode, Hemisphere) {
  const Code c = hemisphere183();
  EXPECT_EQ(c.size(), 183);
  EXPECT_TRUE(c.has_pole());
  EXPECT_NO_THROW(c.validate());
  for (int i = 0; i < c.size(); ++i) EXPECT_GE(c.pole_inner(i), 0);
}

TEST(CapSubcode, Extremes) {
  const Code all = cap_subcode(e8_roots(), root_pole(8), Rational(-1));
  EXPECT_EQ(all.size(), 240);
  const Code pole_only = cap_subcode(e8_roots(), root_pole(8), Rational(1));
  ASSERT_EQ(pole_only.size(), 1);
  EXPECT_EQ(pole_only.coords(0), root_pole(8));
}

TEST(CapSubcode, DnHemispheres) {
  // e = (1,1,0,...)/sqrt(2) drops the roots whose first two coordinates sum
  // to a negative number: 7 of 12 and 15 of 24 remain.
  EXPECT_EQ(cap_subcode(dn_roots(3), root_pole(3), Rational(0)).size(), 7);
  EXPECT_EQ(cap_subcode(dn_roots(4), root_pole(4), Rational(0)).size(), 15);
}

TEST(DistanceDistribution, Singleton) {
  Code c(3, Rational(1));
  c.add({Rational(1), Rational(0), Rational(0)});
  c.set_pole({Rational(1), Rational(0), Rational(0)});
  const DistanceDistribution d = distance_distribution(c);
  ASSERT_EQ(d.entries.size(), 1u);
  EXPECT_EQ(d.entries[0].first, (DistanceKey{Rational(1), Rational(1), Rational(1)}));
  EXPECT_EQ(d.entries[0].second, 1);
  EXPECT_EQ(d.diagonal_sum(), 1);
  EXPECT_EQ(d.total_sum(), 1);
}

TEST(DistanceDistribution, OrthogonalPair) {
  Code c(3, Rational(1));
  c.add({Rational(1), Rational(0), Rational(0)});
  c.add({Rational(0), Rational(1), Rational(0)});
  c.set_pole({Rational(1), Rational(0), Rational(0)});
  const DistanceDistribution d = distance_distribution(c);
  // Ordered pairs: (e,e) -> (1,1,1), (c',c') -> (0,0,1), (e,c') and (c',e) -> (0,1,0).
  ASSERT_EQ(d.entries.size(), 3u);
  std::map<std::string, Rational> by_key;
  for (const auto& [k, y] : d.entries) by_key[to_string(k.u) + "," + to_string(k.v) + "," + to_string(k.t)] = y;
  EXPECT_EQ(by_key.at("1,1,1"), Rational(1, 2));
  EXPECT_EQ(by_key.at("0,0,1"), Rational(1, 2));
  EXPECT_EQ(by_key.at("0,1,0"), 1);
  EXPECT_EQ(d.diagonal_sum(), 1);
  EXPECT_EQ(d.total_sum(), 2);
}

TEST(DistanceDistribution, HemisphereSums) {
  const DistanceDistribution d = distance_distribution(hemisphere183());
  EXPECT_EQ(d.cardinality, 183);
  EXPECT_EQ(d.diagonal_sum(), 1);
  EXPECT_EQ(d.total_sum(), 183);
  for (const auto& [k, y] : d.entries) {
    EXPECT_LE(k.u, k.v);
    EXPECT_GE(k.u, 0);
    EXPECT_GT(y, 0);
    if (k.t != 1) EXPECT_LE(k.t, Rational(1, 2));
    if (k.t == 1) EXPECT_EQ(k.u, k.v);
  }
}

TEST(DistanceDistribution, PrimalFeasibility) {
  std::vector<DistanceDistribution> dists{
      distance_distribution(hemisphere183()),
      distance_distribution(cap_subcode(dn_roots(4), root_pole(4), Rational(0))),
      distance_distribution(cap_subcode(dn_roots(5), root_pole(5), Rational(1, 2)))};
  const int dims[] = {8, 4, 5};
  for (std::size_t i = 0; i < dists.size(); ++i)
    for (int d = 1; d <= 6; ++d) EXPECT_GE(primal_min_eigenvalue(dists[i], dims[i], d), -1e-9) << i << " " << d;
}

TEST(MinAngle, Examples) {
  Code pair(2, Rational(1));
  pair.add({Rational(1), Rational(0)});
  pair.add({Rational(-1), Rational(0)});
  EXPECT_DOUBLE_EQ(min_angle(pair), M_PI);
  Code single(2, Rational(1));
  single.add({Rational(1), Rational(0)});
  EXPECT_THROW(min_angle(single), std::invalid_argument);
}

TEST(Code, ValidateErrors) {
  Code c(2, Rational(1));
  c.add({Rational(1), Rational(1)});
  EXPECT_THROW(c.validate(), std::domain_error);
  Code dup(2, Rational(1));
  dup.add({Rational(1), Rational(0)});
  dup.add({Rational(1), Rational(0)});
  EXPECT_THROW(dup.validate(), std::domain_error);
  Code bad_pole(2, Rational(1));
  bad_pole.add({Rational(1), Rational(0)});
  bad_pole.set_pole({Rational(2), Rational(0)});
  EXPECT_THROW(bad_pole.validate(), std::domain_error);
  EXPECT_THROW(c.add({Rational(1)}), std::invalid_argument);
  EXPECT_THROW(Code(2, Rational(0)), std::invalid_argument);
}

TEST(Code, FromDoubles) {
  const double s = std::sqrt(0.5);
  const Code c = Code::from_doubles({Eigen::Vector2d(s, s), Eigen::Vector2d(s, -s)});
  EXPECT_FALSE(c.exact());
  EXPECT_NO_THROW(c.validate());
  EXPECT_NEAR(min_angle(c), M_PI / 2, 1e-12);
}

TEST(Code, TextOutput) {
  const Code e8 = e8_roots();
  const std::string text = to_text(e8);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 240);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::istringstream ls(line);
  double x, norm2 = 0;
  int count = 0;
  while (ls >> x) {
    norm2 += x * x;
    ++count;
  }
  EXPECT_EQ(count, 8);
  EXPECT_NEAR(norm2, 1.0, 1e-15);
}

TEST(Code, JsonOutput) {
  const nlohmann::json j = to_json(hemisphere183());
  EXPECT_EQ(j["size"], 183);
  EXPECT_EQ(j["scale2"], "2");
  EXPECT_EQ(j["max_inner_product"], "1/2");
  EXPECT_EQ(j["pole"].size(), 8u);
  const nlohmann::json d = to_json(distance_distribution(hemisphere183()));
  EXPECT_EQ(d["total_sum"], "183");
  EXPECT_EQ(d["diagonal_sum"], "1");
}

}  // namespace
}  // namespace capsdp
