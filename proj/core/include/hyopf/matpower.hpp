#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyopf/grid.hpp"

namespace hyopf {

class MatpowerError : public Error {
 public:
  using Error::Error;
};

/// Raw tables of a MATPOWER case in MATPOWER units (MW, MVAr, degrees).
struct MatpowerCase {
  double base_mva = 100.0;
  Eigen::MatrixXd bus;
  Eigen::MatrixXd gen;
  Eigen::MatrixXd branch;
  Eigen::MatrixXd gencost;  // may be empty
  /// Sections that were skipped (dcline, user extensions, ...).
  std::vector<std::string> warnings;
};

inline constexpr int kBusColumns = 13;
inline constexpr int kGenColumns = 10;
inline constexpr int kBranchColumns = 13;

/// Parses the `mpc.<name> = ...;` assignments of a case file. `%` starts a
/// comment. Throws MatpowerError for missing tables, short rows (naming the
/// table and row) and non-numeric cells.
MatpowerCase parse_matpower(const std::string& text);

/// Per-unit grid from a parsed case. Isolated buses (type 4) and out-of-service
/// branches and generators are dropped; bus numbers are renumbered by order of
/// appearance and the original number is kept in the `matpower_bus`
/// annotation. Polynomial costs are sampled at `samples` equidistant points.
Grid to_grid(const MatpowerCase& mpc, int samples = 10);

/// Samples the polynomial `coeffs` (highest order first) at `samples`
/// equidistant points of `[lo, hi]`. A degenerate interval yields one point.
PwlCost linearize_polynomial(const std::vector<double>& coeffs, double lo, double hi,
                             int samples);

/// Large ampacity used when the rating is 0 (unlimited).
inline constexpr double kUnlimitedAmpacity = 100.0;
/// Angle bounds are clamped into [-kMaxAngle, kMaxAngle] radians.
inline constexpr double kMaxAngle = 1.5;

}  // namespace hyopf
