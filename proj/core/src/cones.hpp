#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hyopf/conic_problem.hpp"

namespace hyopf::detail {

/// Nesterov-Todd scaling W of a primal-dual pair (s, z) with W z = W^-T s = lambda.
struct Scaling {
  Eigen::VectorXd nonneg;  // W = diag(sqrt(s / z))
  std::vector<Eigen::MatrixXd> soc;      // symmetric W per cone
  std::vector<Eigen::MatrixXd> soc_inv;
  std::vector<Eigen::MatrixXd> psd_r;    // W(Z) = r^T Z r
  std::vector<Eigen::MatrixXd> psd_rinv;
  std::vector<Eigen::VectorXd> psd_lambda;
  Eigen::VectorXd lambda;
};

Scaling nt_scaling(const ConeDims& cones, const Eigen::VectorXd& s, const Eigen::VectorXd& z);

/// Applies W, W^T, W^-1 or W^-T.
Eigen::VectorXd apply_scaling(const ConeDims& cones, const Scaling& w, const Eigen::VectorXd& v,
                              bool transpose, bool inverse);

/// Dense blocks of W^T W in cone order: nonneg diagonal, then one block per
/// SOC, then one block per PSD cone (svec coordinates).
struct HessianBlocks {
  Eigen::VectorXd nonneg;
  std::vector<Eigen::MatrixXd> blocks;
};
HessianBlocks scaling_hessian(const ConeDims& cones, const Scaling& w);

Eigen::VectorXd identity(const ConeDims& cones);
/// Jordan product x o y.
Eigen::VectorXd jordan(const ConeDims& cones, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
/// Solves lambda o x = y for x, lambda being the scaled point of `w`.
Eigen::VectorXd jordan_div(const ConeDims& cones, const Scaling& w, const Eigen::VectorXd& y);
/// Smallest "eigenvalue" over all cones; positive iff v is interior.
double interior_margin(const ConeDims& cones, const Eigen::VectorXd& v);
/// Largest alpha with v + alpha * dv in the cone (infinity if unbounded).
double max_step(const ConeDims& cones, const Eigen::VectorXd& v, const Eigen::VectorXd& dv);

}  // namespace hyopf::detail
