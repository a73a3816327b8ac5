#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "hyopf/grid_document.hpp"
#include "hyopf/matpower.hpp"
#include "hyopf/network_matrices.hpp"
#include "hyopf/validation.hpp"
#include "oracle.hpp"

namespace hyopf {
namespace {

const Complex I{0.0, 1.0};

const char* kTwoBus = R"(function mpc = two
mpc.version = '2';
mpc.baseMVA = 100;
mpc.bus = [
  1 3 0 0 0 0 1 1 0 230 1 1.1 0.9;
  2 1 50 10 0 0 1 1 0 230 1 1.1 0.9;
];
mpc.gen = [
  1 0 0 50 -50 1 100 1 100 0;
];
mpc.branch = [
  1 2 0.01 0.1 0.02 0 0 0 0 0 1 -360 360;
];
mpc.gencost = [
  2 0 0 3 0.01 10 0;
];
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

TEST(ParseMatpower, MinimalCase) {
  const auto mpc = parse_matpower(kTwoBus);
  EXPECT_EQ(mpc.bus.rows(), 2);
  EXPECT_EQ(mpc.branch.rows(), 1);
  EXPECT_EQ(mpc.gen.rows(), 1);
  EXPECT_EQ(mpc.gencost.rows(), 1);
  EXPECT_DOUBLE_EQ(mpc.base_mva, 100.0);
  EXPECT_DOUBLE_EQ(mpc.branch(0, 3), 0.1);
  EXPECT_TRUE(mpc.warnings.empty());
}

TEST(ParseMatpower, ArityErrorNamesTheRow) {
  const auto text = replace(kTwoBus, "1 2 0.01 0.1 0.02 0 0 0 0 0 1 -360 360;",
                            "1 2 0.01 0.1 0.02 0 0 0 0 0 1 -360 360;\n  2 1 0.01 0.1 0.02 0 0 0 0 0 1 -360;");
  try {
    parse_matpower(text);
    FAIL() << "no arity error";
  } catch (const MatpowerError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("branch row 2"), std::string::npos) << what;
    EXPECT_NE(what.find("found 12"), std::string::npos) << what;
  }
}

TEST(ParseMatpower, CommentsDoNotChangeTheParse) {
  const auto plain = parse_matpower(kTwoBus);
  auto text = replace(kTwoBus, "mpc.bus = [\n", "mpc.bus = [\n  % first row follows\n");
  text = replace(text, "1 1.1 0.9;\n  2", "1 1.1 0.9; % trailing\n%  9 9 9\n  2");
  text = replace(text, "mpc.gen = [", "% mpc.gen = [ 7 ];\nmpc.gen = [");
  const auto commented = parse_matpower(text);
  EXPECT_EQ(commented.bus, plain.bus);
  EXPECT_EQ(commented.gen, plain.gen);
  EXPECT_EQ(commented.branch, plain.branch);
  EXPECT_EQ(commented.gencost, plain.gencost);
}

TEST(ParseMatpower, Errors) {
  EXPECT_THROW(parse_matpower(replace(kTwoBus, "mpc.baseMVA = 100;", "")), MatpowerError);
  EXPECT_THROW(parse_matpower(replace(kTwoBus, "mpc.gen = [", "mpc.generators = [")), MatpowerError);
  try {
    parse_matpower(replace(kTwoBus, "0.01 0.1 0.02", "0.01 x 0.02"));
    FAIL() << "no cell error";
  } catch (const MatpowerError& e) {
    EXPECT_NE(std::string(e.what()).find("non-numeric cell 'x'"), std::string::npos);
  }
}

TEST(ParseMatpower, UnsupportedSectionsWarn) {
  const auto mpc = parse_matpower(read_text_file(testing::data_path("cases/case3_tap.m")));
  ASSERT_EQ(mpc.warnings.size(), 1u);
  EXPECT_NE(mpc.warnings[0].find("dcline"), std::string::npos);
}

MatpowerCase one_branch(double r, double x, double b, double ratio, double shift) {
  auto mpc = parse_matpower(kTwoBus);
  mpc.branch(0, 2) = r;
  mpc.branch(0, 3) = x;
  mpc.branch(0, 4) = b;
  mpc.branch(0, 8) = ratio;
  mpc.branch(0, 9) = shift;
  return mpc;
}

TEST(ToGrid, BranchConversion) {
  const auto grid = to_grid(one_branch(0.0, 0.1, 0.2, 0.0, 0.0));
  ASSERT_EQ(grid.branches.size(), 1u);
  const auto& br = grid.branches[0];
  EXPECT_NEAR(std::abs(br.y_series - (-10.0 * I)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(br.y_src - 0.1 * I), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(br.y_dst - 0.1 * I), 0.0, 1e-15);
  EXPECT_EQ(br.rho_src, Complex(1.0));
  EXPECT_EQ(br.rho_dst, Complex(1.0));
  EXPECT_DOUBLE_EQ(br.i_max_src, kUnlimitedAmpacity);
  EXPECT_DOUBLE_EQ(br.angle_max, kMaxAngle);
  EXPECT_DOUBLE_EQ(grid.buses[1].load.real(), 0.5);
}

TEST(ToGrid, TapAndShift) {
  const auto grid = to_grid(one_branch(0.01, 0.1, 0.0, 1.05, 30.0));
  const Complex want = std::polar(1.0 / 1.05, -std::numbers::pi / 6.0);
  EXPECT_NEAR(std::abs(grid.branches[0].rho_src - want), 0.0, 1e-15);
  EXPECT_EQ(grid.branches[0].rho_dst, Complex(1.0));
}

TEST(ToGrid, UnitTapMatchesPiModel) {
  const auto mpc = one_branch(0.02, 0.1, 0.04, 1.0, 0.0);
  const Eigen::Matrix2cd block = branch_two_port(to_grid(mpc).branches[0]);
  const Complex ys = 1.0 / Complex(0.02, 0.1);
  const Complex ysh = 0.02 * I;
  Eigen::Matrix2cd pi;
  pi << ys + ysh, -ys, -ys, ys + ysh;
  EXPECT_LE((block - pi).norm(), 1e-12);
}

TEST(ToGrid, RatingsAnglesAndErrors) {
  auto mpc = one_branch(0.01, 0.1, 0.0, 0.0, 0.0);
  mpc.branch(0, 5) = 150.0;
  mpc.branch(0, 11) = -30.0;
  mpc.branch(0, 12) = 120.0;
  const auto grid = to_grid(mpc);
  EXPECT_DOUBLE_EQ(grid.branches[0].i_max_src, 1.5);
  EXPECT_DOUBLE_EQ(grid.branches[0].i_max_dst, 1.5);
  EXPECT_NEAR(grid.branches[0].angle_min, -std::numbers::pi / 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(grid.branches[0].angle_max, kMaxAngle);

  auto flat = mpc;
  flat.bus(1, 11) = flat.bus(1, 12);
  EXPECT_THROW(to_grid(flat), ParameterError);
  auto off = mpc;
  off.branch(0, 10) = 0.0;
  EXPECT_TRUE(to_grid(off).branches.empty());
}

TEST(LinearizePolynomial, SquareOnThreeSamples) {
  const auto cost = linearize_polynomial({1.0, 0.0, 0.0}, 0.0, 2.0, 3);
  ASSERT_EQ(cost.points.size(), 3u);
  EXPECT_EQ(cost.points[0], (Breakpoint{0.0, 0.0}));
  EXPECT_EQ(cost.points[1], (Breakpoint{1.0, 1.0}));
  EXPECT_EQ(cost.points[2], (Breakpoint{2.0, 4.0}));
  EXPECT_TRUE(cost.is_convex());
}

TEST(LinearizePolynomial, ConvexPolynomialsGiveNondecreasingSlopes) {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double lo = -u(rng), hi = lo + 0.1 + 3.0 * u(rng);
    const auto cost = linearize_polynomial({u(rng), 40.0 * u(rng) - 20.0, u(rng)}, lo, hi, 10);
    ASSERT_EQ(cost.points.size(), 10u);
    EXPECT_DOUBLE_EQ(cost.points.front().x, lo);
    EXPECT_DOUBLE_EQ(cost.points.back().x, hi);
    for (std::size_t k = 2; k < cost.points.size(); ++k) {
      const auto& a = cost.points[k - 2];
      const auto& b = cost.points[k - 1];
      const auto& c = cost.points[k];
      EXPECT_LE((b.y - a.y) / (b.x - a.x), (c.y - b.y) / (c.x - b.x) + 1e-9);
    }
  }
  EXPECT_EQ(linearize_polynomial({1.0, 2.0}, 1.0, 1.0, 10).points.size(), 1u);
  EXPECT_THROW(linearize_polynomial({1.0}, 2.0, 1.0, 10), ParameterError);
}

TEST(ImportCase3Tap, StructureAndCosts) {
  const auto mpc = parse_matpower(read_text_file(testing::data_path("cases/case3_tap.m")));
  const auto grid = to_grid(mpc);
  ASSERT_EQ(grid.buses.size(), 3u);
  EXPECT_EQ(grid.branches.size(), 3u);
  ASSERT_EQ(grid.injectors.size(), 2u);
  EXPECT_EQ(grid.buses[1].annotations.at("matpower_bus"), "5");
  EXPECT_EQ(grid.buses[2].annotations.at("matpower_bus"), "9");
  EXPECT_TRUE(validate(grid).ok());
  // 0.01 p^2 + 20 p + 5 on [0, 200] MW, abscissae in p.u.
  const auto& cost = grid.injectors[0].cost_p;
  ASSERT_EQ(cost.points.size(), 10u);
  EXPECT_EQ(cost.slopes().size(), 9u);
  EXPECT_TRUE(cost.is_convex());
  EXPECT_DOUBLE_EQ(cost.points.back().x, 2.0);
  EXPECT_DOUBLE_EQ(cost.points.back().y, 0.01 * 200 * 200 + 20 * 200 + 5);
}

// Flows of the mapped model against MATPOWER's branch formulas at a solved
// power-flow state.
TEST(ImportCase3Tap, BranchFlowsMatchAnIndependentPowerFlow) {
  const auto mpc = parse_matpower(read_text_file(testing::data_path("cases/case3_tap.m")));
  const auto grid = to_grid(mpc);
  const Eigen::MatrixXcd y = testing::matpower_ybus(mpc);
  const auto pf = testing::newton_power_flow(
      y, {testing::PfBus::slack, testing::PfBus::pv, testing::PfBus::pq},
      Eigen::Vector3d(0.0, 0.1, -0.9), Eigen::Vector3d(0.0, 0.0, -0.3),
      Eigen::Vector3d(1.02, 1.01, 1.0));
  ASSERT_TRUE(pf.converged);

  EXPECT_LE((Eigen::MatrixXcd(bus_admittance(grid).bus) - y).norm(), 1e-12);
  Eigen::VectorXcd s_from, s_to;
  testing::matpower_branch_flows(mpc, pf.v, s_from, s_to);
  ASSERT_EQ(s_from.size(), static_cast<Eigen::Index>(grid.branches.size()));
  for (std::size_t k = 0; k < grid.branches.size(); ++k) {
    const auto& br = grid.branches[k];
    const Complex vs = pf.v(br.src - 1), vd = pf.v(br.dst - 1);
    const Eigen::Vector2cd i = branch_two_port(br) * Eigen::Vector2cd(vs, vd);
    const auto e = static_cast<Eigen::Index>(k);
    EXPECT_NEAR(std::abs(vs * std::conj(i(0)) - s_from(e)), 0.0, 1e-9 * std::max(1.0, std::abs(s_from(e))));
    EXPECT_NEAR(std::abs(vd * std::conj(i(1)) - s_to(e)), 0.0, 1e-9 * std::max(1.0, std::abs(s_to(e))));
  }
}

TEST(GridDocument, RoundTripOnRandomGrids) {
  std::mt19937_64 rng(113);
  for (int t = 0; t < 100; ++t) {
    auto grid = testing::random_grid(rng);
    if (t % 3 == 0) grid.annotations["name"] = "\"grid " + std::to_string(t) + "\"";
    const auto text = write_document(grid);
    const auto back = read_document(text);
    EXPECT_EQ(back, grid) << t;
    EXPECT_EQ(write_document(back), text);
  }
}

TEST(GridDocument, BundledCasesRoundTrip) {
  for (const char* name : {"case2_ac", "case3_ac", "mtdc3", "back_to_back"}) {
    const auto grid = testing::load_case(name);
    EXPECT_EQ(read_document(write_document(grid)), grid) << name;
  }
}

TEST(GridDocument, MissingBasePowerNamesTheField) {
  auto doc = nlohmann::json::parse(write_document(testing::load_case("case2_ac")));
  doc.erase("base_mva");
  try {
    read_document(doc.dump());
    FAIL() << "no schema error";
  } catch (const DocumentError& e) {
    EXPECT_NE(std::string(e.what()).find("base_mva"), std::string::npos) << e.what();
  }
}

TEST(GridDocument, SchemaErrors) {
  const auto good = nlohmann::json::parse(write_document(testing::load_case("case2_ac")));
  auto version = good;
  version["version"] = "2";
  EXPECT_THROW(read_document(version.dump()), DocumentError);
  auto no_version = good;
  no_version.erase("version");
  EXPECT_THROW(read_document(no_version.dump()), DocumentError);
  auto kind = good;
  kind["buses"][0]["kind"] = "hvdc";
  try {
    read_document(kind.dump());
    FAIL() << "no schema error";
  } catch (const DocumentError& e) {
    EXPECT_NE(std::string(e.what()).find("buses[0].kind"), std::string::npos) << e.what();
  }
  auto no_y = good;
  no_y["branches"][0].erase("y_series");
  EXPECT_THROW(read_document(no_y.dump()), DocumentError);
  EXPECT_THROW(read_document("{ not json"), DocumentError);
}

TEST(GridDocument, ExtraFieldsArePreserved) {
  auto doc = nlohmann::json::parse(write_document(testing::load_case("case2_ac")));
  doc["buses"][1]["description"] = "feeder end";
  doc["branches"][0]["owner"] = {{"company", "x"}, {"share", 0.25}};
  doc["survey"] = {1, 2, 3};
  const auto grid = read_document(doc.dump());
  EXPECT_EQ(grid.buses[1].annotations.at("description"), "\"feeder end\"");
  const auto again = nlohmann::json::parse(write_document(grid));
  EXPECT_EQ(again["buses"][1]["description"], doc["buses"][1]["description"]);
  EXPECT_EQ(again["branches"][0]["owner"], doc["branches"][0]["owner"]);
  EXPECT_EQ(again["survey"], doc["survey"]);
  EXPECT_EQ(read_document(again.dump()), grid);
}

}  // namespace
}  // namespace hyopf
