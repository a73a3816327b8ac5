#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace hyopf::detail {

/// Sparse LDL^T factorization of a quasi-definite matrix with a fill-reducing
/// ordering computed once. Pivots whose sign disagrees with the expected sign
/// (or whose magnitude falls below `eps`) are replaced by `sign * delta`.
class QuasiDefiniteLdl {
 public:
  /// `upper` holds the upper triangle (diagonal included) of the matrix in the
  /// original ordering; its pattern must stay fixed across `factor` calls.
  void analyze(const Eigen::SparseMatrix<double>& upper);
  /// Returns the number of regularized pivots, or -1 on a non-finite pivot.
  int factor(const Eigen::SparseMatrix<double>& upper, const Eigen::VectorXd& signs, double eps,
             double delta);
  /// Solves in place.
  void solve(Eigen::VectorXd& b) const;

  Eigen::Index size() const { return n_; }

 private:
  void permute_upper(const Eigen::SparseMatrix<double>& upper);

  Eigen::Index n_ = 0;
  std::vector<int> perm_;  // perm_[new] = old
  std::vector<int> iperm_;
  // Permuted upper triangle in CSC form.
  std::vector<int> ap_;
  std::vector<int> ai_;
  std::vector<double> ax_;
  std::vector<int> map_;  // position of each input nonzero in ax_
  std::vector<int> etree_;
  std::vector<int> lnz_;
  std::vector<int> lp_;
  std::vector<int> li_;
  std::vector<double> lx_;
  std::vector<double> d_;
  std::vector<double> dinv_;
};

}  // namespace hyopf::detail
