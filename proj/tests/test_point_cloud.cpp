#include <gtest/gtest.h>

#include <cmath>

#include "sepnet/csv.hpp"
#include "sepnet/errors.hpp"
#include "sepnet/point_cloud.hpp"
#include "sepnet/targets.hpp"
#include "test_util.hpp"

using namespace sepnet;
using namespace sepnet::testing;

TEST(PointCloud, Basics) {
  const PointCloud c = cloud_of({{0, 0}, {3, 4}, {1, 1}});
  EXPECT_EQ(c.dim(), 2);
  EXPECT_EQ(c.size(), 3);
  EXPECT_EQ(distance_to_cloud(Vector{{0.0, 4.0}}, c), 3.0);
  const std::vector<int> idx{2, 0};
  const PointCloud s = c.subset(idx);
  EXPECT_EQ(s.point(0), (Vector{{1.0, 1.0}}));
  EXPECT_EQ(c.concat(s).size(), 5);
  EXPECT_EQ(cloud_distance(c, cloud_of({{3, 5}})), 1.0);
  EXPECT_EQ(cloud_distance(c, s), 0.0);
  Matrix bad(1, 1);
  bad(0, 0) = INFINITY;
  EXPECT_THROW(PointCloud{bad}, DomainError);
  EXPECT_THROW(distance_to_cloud(Vector::Zero(2), PointCloud()), DomainError);
}

TEST(PointCloud, Deduplicate) {
  LabeledCloud k{cloud_of({{0}, {1}, {0}}), Vector{{2.0, 3.0, 2.0}}};
  const LabeledCloud d = deduplicate(k);
  EXPECT_EQ(d.size(), 2);
  EXPECT_EQ(d.values, (Vector{{2.0, 3.0}}));
  k.values(2) = 5.0;
  EXPECT_THROW(deduplicate(k), PreconditionError);
  EXPECT_THROW(validate(LabeledCloud{cloud_of({{0}}), Vector{{1.0, 2.0}}}), PreconditionError);
}

TEST(Csv, ParseWithValues) {
  const CsvCloud c = parse_csv("x,y,value\n0,1,2.5\n\n-1, 2e-3 ,7\n");
  EXPECT_EQ(c.points.dim(), 2);
  EXPECT_EQ(c.points.size(), 2);
  ASSERT_TRUE(c.values.has_value());
  EXPECT_EQ((*c.values)(1), 7.0);
  EXPECT_EQ(c.points.coords()(1, 1), 2e-3);
}

TEST(Csv, ParseWithoutValues) {
  const CsvCloud c = parse_csv("a,b,c\r\n1,2,3\r\n");
  EXPECT_EQ(c.points.dim(), 3);
  EXPECT_FALSE(c.values.has_value());
}

TEST(Csv, Errors) {
  EXPECT_THROW(parse_csv(""), ParseError);
  EXPECT_THROW(parse_csv("x,value\n"), ParseError);
  EXPECT_THROW(parse_csv("x,y\n1\n"), ParseError);
  EXPECT_THROW(parse_csv("x,y\n1,abc\n"), ParseError);
  EXPECT_THROW(parse_csv("x,y\n1,nan\n"), ParseError);
  EXPECT_THROW(parse_csv("value\n1\n"), ParseError);
  try {
    parse_csv("x\n1\n2\nz\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(Csv, FormatRoundTrip) {
  const PointCloud p = cloud_of({{0.1, 1.0 / 3.0}, {-2.0, 1e-300}});
  const Vector v{{M_PI, -0.0}};
  const CsvCloud back = parse_csv(format_csv(p, &v));
  EXPECT_EQ(back.header, (std::vector<std::string>{"x1", "x2", "value"}));
  EXPECT_EQ(back.points.coords(), p.coords());
  EXPECT_EQ(*back.values, v);
}

TEST(Targets, Catalog) {
  EXPECT_EQ(find_target("linear").fn(Vector{{1.0, 2.0}}), 3.0);
  EXPECT_NEAR(find_target("sinprod").fn(Vector{{0.5, 0.25}}), std::sin(1.5) * std::cos(0.5), 1e-15);
  EXPECT_EQ(find_target("runge").fn(Vector{{0.2}}), 0.5);
  EXPECT_EQ(find_target("step-smooth").fn(Vector{{0.5, 9.0}}), 0.5);
  EXPECT_THROW(find_target("cosine"), ConfigError);
  for (const Target& t : target_catalog()) EXPECT_FALSE(t.formula.empty());
}

TEST(Targets, GridSpec) {
  const auto axes = parse_grid("0:1:101");
  ASSERT_EQ(axes.size(), 1u);
  EXPECT_EQ(axes[0].count, 101);
  const PointCloud g = grid_points(parse_grid("0:1:3,-1:1:2"));
  EXPECT_EQ(g.size(), 6);
  EXPECT_EQ(g.point(0), (Vector{{0.0, -1.0}}));
  EXPECT_EQ(g.point(1), (Vector{{0.0, 1.0}}));  // last coordinate fastest
  EXPECT_EQ(g.point(5), (Vector{{1.0, 1.0}}));
  EXPECT_EQ(grid_points(parse_grid("0:1:101")).point(100)(0), 1.0);
  EXPECT_EQ(grid_points(parse_grid("2:2:1")).point(0)(0), 2.0);
  for (const char* bad : {"", "0:1", "0:1:0", "1:0:5", "a:1:2", "0:1:2,", "0:1:2:3", "0:1:2.5", "1:1:3"}) {
    EXPECT_THROW(parse_grid(bad), ParseError) << bad;
  }
}
