#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace hyopf {

/// Cone `K` of a conic program, as consecutive slices of the slack vector:
/// the nonnegative orthant first, then second-order cones
/// `{(t, u) : ||u|| <= t}` of the listed sizes, then PSD cones of the listed
/// orders. A PSD slice of order m holds svec(X): the lower triangle of X in
/// column-major order with off-diagonal entries scaled by sqrt(2).
struct ConeDims {
  std::size_t nonneg = 0;
  std::vector<std::size_t> soc;
  std::vector<std::size_t> psd;

  /// Total number of slack entries.
  std::size_t size() const;
  /// Barrier degree: nonneg + #soc + sum of PSD orders.
  std::size_t degree() const;
};

inline constexpr std::size_t svec_size(std::size_t order) { return order * (order + 1) / 2; }

/// `min c^T x + offset  s.t.  A x = b,  G x + s = h,  s in K`.
struct ConicProblem {
  Eigen::VectorXd c;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::SparseMatrix<double> G;
  Eigen::VectorXd h;
  ConeDims cones;
  double offset = 0.0;

  std::size_t variables() const { return static_cast<std::size_t>(c.size()); }
  /// Throws DimensionError when the data does not fit together.
  void check() const;
};

/// Index of entry (i, j), i >= j, of an order-m matrix inside its svec.
std::size_t svec_index(std::size_t order, std::size_t i, std::size_t j);
Eigen::VectorXd svec(const Eigen::MatrixXd& m);
Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, std::size_t order);

}  // namespace hyopf
