#pragma once

#include <string>
#include <vector>

#include "hyopf/grid.hpp"

namespace hyopf {

struct Violation {
  std::string rule;    // stable identifier, e.g. "branch.dc_series_real"
  std::string entity;  // e.g. "branch 3"
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  /// Every DC subgrid is a tree.
  bool dc_radial = true;
  /// The whole bus/branch graph is a forest.
  bool hybrid_architecture = true;
  /// Connected components over buses and branches, as sorted bus ids.
  std::vector<std::vector<int>> subgrids;

  bool ok() const { return violations.empty(); }
  bool has_rule(const std::string& rule) const;

  bool operator==(const ValidationReport&) const = default;
};

/// Thrown by builders handed a grid that does not validate.
class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Checks every structural and electrical rule of the grid model. Problems are
/// collected, never thrown.
ValidationReport validate(const Grid& grid);

/// Connected components of the bus/branch graph (converters do not connect
/// subgrids). Components are ordered by their lowest bus id.
std::vector<std::vector<int>> subgrids(const Grid& grid);

/// Devices attached to one bus, as 1-based ids.
struct BusIncidence {
  std::vector<int> branches_out;
  std::vector<int> branches_in;
  std::vector<int> converters_out;
  std::vector<int> converters_in;
  std::vector<int> injectors;
};

/// Per-bus incidence, indexed by bus position (id - 1).
std::vector<BusIncidence> incidence(const Grid& grid);

}  // namespace hyopf
