#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyopf/grid.hpp"
#include "hyopf/network_matrices.hpp"

namespace hyopf {

/// Per-bus converter coupling: the bus draws `p^T f + i q^T f` from its converters.
/// Slots of converter l (0-based) are 4l..4l+3 = (p_src, p_dst, q_src, q_dst).
struct ConverterCoupling {
  Eigen::VectorXd p;
  Eigen::VectorXd q;
};

std::vector<ConverterCoupling> converter_vectors(const Grid& grid);

/// Row `coeffs^T (p_src, p_dst, q_src, q_dst) <= offset` of one converter.
struct CapabilityRow {
  Eigen::Vector4d coeffs = Eigen::Vector4d::Zero();
  double offset = 0.0;
};

/// Capability rows of a converter in its own 4 slots: the polygon rows mapped
/// through P = -Re(S), Q = q on each side, then -p_src <= 0 and -p_dst <= 0,
/// then q = 0 as two rows for each DC side.
std::vector<CapabilityRow> capability_rows(const Converter& converter, bool src_dc, bool dst_dc);

/// Epigraph segment `t >= slope * x + intercept`.
struct Segment {
  double slope = 0.0;
  double intercept = 0.0;

  bool operator==(const Segment&) const = default;
};

/// Segments whose pointwise maximum is the cost. Empty cost gives no segments
/// (no epigraph variable), a single breakpoint a constant segment.
std::vector<Segment> cost_epigraph(const PwlCost& cost);

enum class ConstraintKind {
  converter_capability,
  voltage_lower,
  voltage_upper,
  ampacity_src,
  ampacity_dst,
  drop_lower,
  drop_upper,
  angle_real,
  angle_lower,
  angle_upper,
};

const char* to_string(ConstraintKind kind);

/// One of the M inequalities `v^H C v + c^T f <= b`.
struct Inequality {
  ConstraintKind kind;
  int entity;  // converter, bus or branch id
  HermitianForm form;
};

/// Balance of bus n: `v^H P v + p^T f = sum of P_j`, likewise for Q.
struct BalanceRow {
  HermitianForm p;
  HermitianForm q;
  std::vector<std::size_t> injectors;  // 0-based indices into QcqpProblem::injectors
};

enum class InjectorOrigin { injector, fixed_load, static_loss };

struct InjectorModel {
  InjectorOrigin origin = InjectorOrigin::injector;
  int source_id = 0;  // id of the injector, load bus or converter it came from
  int bus = 0;
  Polygon capability;  // DC buses carry the extra Q = 0 rows
  std::vector<Segment> cost_p;
  std::vector<Segment> cost_q;

  /// Pointwise cost of an injection.
  double cost(Complex s) const;
};

/// Converter mode fixed after a complementarity violation: `p_side = 0`.
struct ModeFix {
  std::size_t converter = 0;  // 0-based
  Side zero_side = Side::dst;
};

struct Dimensions {
  std::size_t buses = 0;
  std::size_t branches = 0;
  std::size_t ac_branches = 0;
  std::size_t converters = 0;
  std::size_t injectors = 0;  // including folded loads and static losses
  std::size_t capability_rows = 0;  // F
  std::size_t inequalities = 0;  // M
};

struct QcqpProblem {
  Grid grid;
  Dimensions dims;
  AdmittanceSet admittance;
  SparsityPattern pattern;
  std::vector<BalanceRow> balance;
  std::vector<Inequality> inequalities;
  std::vector<InjectorModel> injectors;
  LossCoefficients loss;
  double tau = 0.0;
  std::vector<ModeFix> mode_fixes;

  std::size_t converter_slots() const { return 4 * dims.converters; }
  /// `sum_j C_j(s_j) + tau * f_loss(v v^H, f)`.
  double objective(const Eigen::VectorXcd& v, const Eigen::VectorXd& f,
                   const Eigen::VectorXcd& s) const;
  /// Largest violation over balance equalities, inequalities, injector
  /// capabilities and mode fixes. Zero for a feasible point.
  double max_violation(const Eigen::VectorXcd& v, const Eigen::VectorXd& f,
                       const Eigen::VectorXcd& s) const;
};

/// Builds the OPF of a grid. Throws ValidationError for grids that fail `validate`.
QcqpProblem assemble(const Grid& grid, double tau);

/// Equivalent problem with the loss price moved into the active power costs.
QcqpProblem shift_marginal_cost(const QcqpProblem& problem, double tau);

}  // namespace hyopf
