#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "hyopf/grid.hpp"

namespace hyopf {

using SparseComplex = Eigen::SparseMatrix<Complex>;
using SparseReal = Eigen::SparseMatrix<double>;

/// Bus admittance and branch current maps: i = Y v, i_src = Y_src v,
/// i_dst = Y_dst v.
struct AdmittanceSet {
  SparseComplex bus;  // N x N
  SparseComplex src;  // |E| x N
  SparseComplex dst;  // |E| x N
};

/// Entry of a Hermitian matrix; both (i, j) and (j, i) are listed.
struct HermitianEntry {
  int row;
  int col;
  Complex value;
};

enum class Sense { equal, less_equal };

/// Constraint or balance function `v^H M v + c^T f  (= | <=)  offset`.
///
/// The Hermitian part is stored either as a sparse matrix or, for rank-1
/// forms such as ampacity limits, as the factor row `a` with `M = a^H a`.
struct HermitianForm {
  SparseComplex matrix;
  std::optional<Eigen::SparseVector<Complex>> factor;
  Eigen::SparseVector<double> converter;  // length 4|C|
  double offset = 0.0;
  Sense sense = Sense::less_equal;

  Eigen::Index dimension() const;
  /// `v^H M v`, real for Hermitian M.
  double quadratic_value(const Eigen::VectorXcd& v) const;
  /// `v^H M v + c^T f`. An empty `f` is treated as zero.
  double value(const Eigen::VectorXcd& v, const Eigen::VectorXd& f) const;
  /// Nonzero entries of M (materializing a factored form).
  std::vector<HermitianEntry> entries() const;
  /// Dense copy of M, for tests and small problems.
  Eigen::MatrixXcd dense() const;
};

/// Index pairs (i, j), 0-based, where the OPF matrices may be nonzero:
/// all pairs of endpoints of some branch, including the diagonal pairs.
struct SparsityPattern {
  std::set<std::pair<int, int>> entries;

  bool contains(int i, int j) const { return entries.count({i, j}) != 0; }
  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  /// Off-diagonal pairs with i < j.
  std::vector<std::pair<int, int>> upper_pairs() const;

  bool operator==(const SparsityPattern&) const = default;
};

/// Two-port admittance block `[[Yss, Ysd], [Yds, Ydd]]` mapping
/// (V_src, V_dst) to the branch currents (I_src, I_dst).
Eigen::Matrix2cd branch_two_port(const Branch& branch);

AdmittanceSet bus_admittance(const Grid& grid);

/// Active and reactive flow from bus `n` into the network:
/// `v^H P_n v + i v^H Q_n v = V_n conj(I_n)`.
std::pair<HermitianForm, HermitianForm> balance_matrices(const AdmittanceSet& admittance,
                                                         std::size_t n);

/// `|I_src,k|^2 <= i_max_src^2` and `|I_dst,k|^2 <= i_max_dst^2`, stored factored.
std::pair<HermitianForm, HermitianForm> ampacity_matrices(const AdmittanceSet& admittance,
                                                          std::size_t k, double i_max_src,
                                                          double i_max_dst);

/// Voltage drop limits on an AC branch as (lower, upper) forms `<= 0`.
std::pair<HermitianForm, HermitianForm> drop_matrices(std::size_t bus_count, std::size_t src,
                                                      std::size_t dst, double nu_lb,
                                                      double nu_ub);

/// Angle difference forms. `real_part` encodes Re(V_src conj V_dst) >= 0;
/// `lower`/`upper` are only present when bounds are given (AC branches).
struct AngleForms {
  HermitianForm real_part;
  std::optional<HermitianForm> lower;
  std::optional<HermitianForm> upper;
};

AngleForms angle_matrices(std::size_t bus_count, std::size_t src, std::size_t dst,
                          std::optional<std::pair<double, double>> bounds);

/// `v_min^2 <= |V_n|^2 <= v_max^2` as (lower, upper) forms.
std::pair<HermitianForm, HermitianForm> voltage_matrices(std::size_t bus_count, std::size_t n,
                                                         double v_min, double v_max);

struct LossCoefficients {
  HermitianForm matrix;  // L = (Y + Y^H) / 2
  Eigen::VectorXd converter;  // l, length 4|C|

  /// Total losses `trace(L v v^H) + l^T f`.
  double value(const Eigen::VectorXcd& v, const Eigen::VectorXd& f) const;
};

LossCoefficients loss_coefficients(const Grid& grid, const AdmittanceSet& admittance);

SparsityPattern sparsity_pattern(const Grid& grid);

}  // namespace hyopf
