#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "hyopf/polygon.hpp"
#include "hyopf/validation.hpp"

namespace hyopf {
namespace {

using testing::GridBuilder;

Grid two_bus_ac() {
  GridBuilder g;
  g.bus();
  g.bus(BusKind::ac, {0.5, 0.1});
  g.line(1, 2, {0.01, 0.1});
  g.gen(1, 0, 2, -1, 1, testing::linear_cost(10));
  return g.build();
}

// Union-find acyclicity check over the buses selected by `keep`.
bool acyclic(const Grid& grid, bool dc_only) {
  std::vector<int> parent(grid.buses.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& br : grid.branches) {
    if (dc_only && !grid.is_dc(br.src)) continue;
    const int a = find(br.src - 1), b = find(br.dst - 1);
    if (a == b) return false;
    parent[a] = b;
  }
  if (!dc_only) {
    for (const auto& cv : grid.converters) {
      const int a = find(cv.src - 1), b = find(cv.dst - 1);
      if (a == b) return false;
      parent[a] = b;
    }
  }
  return true;
}

TEST(Validate, ConsistentTwoBusGridHasNoViolations) {
  const auto report = validate(two_bus_ac());
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.dc_radial);
  EXPECT_TRUE(report.hybrid_architecture);
}

TEST(Validate, ReactiveDcBranchIsRejected) {
  GridBuilder g;
  g.bus(BusKind::dc);
  g.bus(BusKind::dc);
  g.cable(1, 2, 0.05);
  g.branch(1).y_series = {20.0, 0.1};
  const auto report = validate(g.build());
  ASSERT_TRUE(report.has_rule("branch.dc_series_real"));
  bool found = false;
  for (const auto& v : report.violations) {
    found = found || v.message == "DC branch series admittance must be real";
  }
  EXPECT_TRUE(found);
}

TEST(Validate, DcRingIsNotRadial) {
  GridBuilder g;
  for (int i = 0; i < 3; ++i) g.bus(BusKind::dc);
  g.cable(1, 2, 0.01);
  g.cable(2, 3, 0.01);
  g.cable(3, 1, 0.01);
  const auto grid = g.build();
  const auto report = validate(grid);
  EXPECT_FALSE(report.dc_radial);
  EXPECT_EQ(report.dc_radial, acyclic(grid, true));
  ASSERT_TRUE(report.has_rule("topology.dc_radial"));
  bool found = false;
  for (const auto& v : report.violations) found = found || v.message == "radial DC subgrid required";
  EXPECT_TRUE(found);
}

TEST(Validate, CatchesStructuralErrors) {
  GridBuilder g;
  g.bus();
  g.bus(BusKind::dc, {0.1, 0.2}, 1.1, 1.0, {0.0, 0.1});
  g.line(1, 1, {0.0, 0.1});
  g.line(1, 2, {0.0, 0.1});
  g.converter(2, 2, 1.0);
  g.gen(3, 0, 1, 0, 1, testing::linear_cost(1));
  g.gen(1, 0, 1, 0, 1, testing::linear_cost(1));
  auto grid = g.build();
  grid.branches[0].rho_src = 0.0;
  grid.injectors[1].cost_p = PwlCost{{{0, 0}, {1, 2}, {2, 3}}};
  const auto report = validate(grid);
  for (const char* rule : {"branch.self_loop", "branch.mixed_kind", "converter.self_loop",
                           "injector.endpoint", "bus.voltage_bounds", "bus.dc_shunt",
                           "bus.dc_reactive_load", "branch.zero_ratio", "injector.cost_convexity"}) {
    EXPECT_TRUE(report.has_rule(rule)) << rule;
  }
}

TEST(Validate, PolygonsMustBeBoundedAndSmall) {
  GridBuilder g;
  g.bus();
  g.gen(1, 0, 1, 0, 1, {});
  auto grid = g.build();
  grid.injectors[0].capability = {{1, 0, 1}, {0, 1, 1}};
  EXPECT_TRUE(validate(grid).has_rule("polygon.unbounded"));
  grid.injectors[0].capability = {{1, 0, -1}, {-1, 0, -1}, {0, 1, 1}, {0, -1, 1}};
  EXPECT_TRUE(validate(grid).has_rule("polygon.empty"));
  grid.injectors[0].capability = Polygon(9, HalfSpace{1, 0, 1});
  EXPECT_TRUE(validate(grid).has_rule("polygon.too_many_half_spaces"));
}

TEST(Validate, IsIdempotentAndHybridImpliesRadial) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto grid = testing::random_grid(rng);
    const auto a = validate(grid);
    const auto b = validate(grid);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(a.ok()) << (a.ok() ? "" : a.violations.front().message);
    EXPECT_EQ(a.dc_radial, acyclic(grid, true));
    if (a.hybrid_architecture) EXPECT_TRUE(a.dc_radial);
  }
}

TEST(Subgrids, ConverterDoesNotJoinSubgrids) {
  GridBuilder g;
  g.bus();
  g.bus();
  g.converter(1, 2, 1.0);
  EXPECT_EQ(subgrids(g.build()).size(), 2u);
}

TEST(Subgrids, SingleBusIsOneSubgrid) {
  GridBuilder g;
  g.bus();
  const auto parts = subgrids(g.build());
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], std::vector<int>{1});
}

TEST(Subgrids, TwoComponents) {
  GridBuilder g;
  for (int i = 0; i < 4; ++i) g.bus();
  g.line(1, 2, {0, 0.1});
  g.line(3, 4, {0, 0.1});
  const auto parts = subgrids(g.build());
  EXPECT_EQ(parts, (std::vector<std::vector<int>>{{1, 2}, {3, 4}}));
}

TEST(Subgrids, NeverMixKindsAndCoverEveryBus) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto grid = testing::random_grid(rng);
    std::vector<int> seen(grid.buses.size(), 0);
    for (const auto& part : subgrids(grid)) {
      for (int b : part) {
        ++seen[static_cast<std::size_t>(b - 1)];
        EXPECT_EQ(grid.is_dc(b), grid.is_dc(part.front()));
      }
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}

TEST(Incidence, SingleBranch) {
  GridBuilder g;
  g.bus();
  g.bus();
  g.bus();
  g.line(1, 2, {0, 0.1});
  const auto inc = incidence(g.build());
  EXPECT_EQ(inc[0].branches_out, std::vector<int>{1});
  EXPECT_EQ(inc[1].branches_in, std::vector<int>{1});
  const auto& empty = inc[2];
  EXPECT_TRUE(empty.branches_out.empty() && empty.branches_in.empty() &&
              empty.converters_out.empty() && empty.converters_in.empty() &&
              empty.injectors.empty());
}

TEST(Incidence, ConvertersIntoOneBus) {
  GridBuilder g;
  for (int i = 0; i < 3; ++i) g.bus();
  g.converter(1, 2, 1.0);
  g.converter(3, 2, 1.0);
  const auto inc = incidence(g.build());
  EXPECT_EQ(inc[1].converters_in, (std::vector<int>{1, 2}));
}

TEST(Incidence, PartitionProperty) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto grid = testing::random_grid(rng);
    std::size_t out = 0, in = 0, cout = 0, cin = 0, inj = 0;
    for (const auto& b : incidence(grid)) {
      out += b.branches_out.size();
      in += b.branches_in.size();
      cout += b.converters_out.size();
      cin += b.converters_in.size();
      inj += b.injectors.size();
    }
    EXPECT_EQ(out, grid.branches.size());
    EXPECT_EQ(in, grid.branches.size());
    EXPECT_EQ(cout, grid.converters.size());
    EXPECT_EQ(cin, grid.converters.size());
    EXPECT_EQ(inj, grid.injectors.size());
  }
}

TEST(Polygon, ExtentOfBox) {
  const auto ext = polygon_extent(box_polygon(-1, 2, -3, 4));
  EXPECT_TRUE(ext.bounded);
  EXPECT_FALSE(ext.empty);
  EXPECT_DOUBLE_EQ(ext.p_min, -1);
  EXPECT_DOUBLE_EQ(ext.p_max, 2);
  EXPECT_DOUBLE_EQ(ext.q_min, -3);
  EXPECT_DOUBLE_EQ(ext.q_max, 4);
  EXPECT_TRUE(polygon_contains(box_polygon(-1, 2, -3, 4), 0, 0));
  EXPECT_FALSE(polygon_contains(box_polygon(-1, 2, -3, 4), 3, 0));
}

TEST(PwlCost, EvaluationAndConvexity) {
  const PwlCost cost{{{0, 0}, {1, 1}, {2, 3}}};
  EXPECT_DOUBLE_EQ(cost(1.5), 2.0);
  EXPECT_DOUBLE_EQ(cost(3.0), 5.0);
  EXPECT_TRUE(cost.is_convex());
  EXPECT_FALSE((PwlCost{{{0, 0}, {1, 2}, {2, 3}}}).is_convex());
  EXPECT_DOUBLE_EQ((PwlCost{{{0, 4}}})(7.0), 4.0);
  EXPECT_DOUBLE_EQ(PwlCost{}(7.0), 0.0);
}

}  // namespace
}  // namespace hyopf
