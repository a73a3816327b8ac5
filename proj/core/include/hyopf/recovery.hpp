#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "hyopf/conic_solver.hpp"
#include "hyopf/grid.hpp"
#include "hyopf/network_matrices.hpp"
#include "hyopf/opf_builder.hpp"
#include "hyopf/relaxation.hpp"

namespace hyopf {

/// Rank-1 completion by spanning-tree traversal: |v_n| = sqrt(V_nn) and, per
/// subgrid from its lowest bus with angle 0, theta_j = theta_i - arg(V_ij).
/// Throws ParameterError for a diagonal entry below -1e-9.
Eigen::VectorXcd traversal_completion(const PartialMatrix& V, const Grid& grid);

/// `||P_J(v v^H - V)||_F^2` over the ordered pairs of J.
double completion_objective(const PartialMatrix& V, const SparsityPattern& pattern,
                            const Eigen::VectorXcd& v);

/// Wirtinger gradient `2 P_J(v v^H - V) v` of `completion_objective`.
Eigen::VectorXcd wirtinger_gradient(const PartialMatrix& V, const SparsityPattern& pattern,
                                    const Eigen::VectorXcd& v);

struct RefineOptions {
  int max_iterations = 500;
  double gradient_tol = 1e-8;
  double relative_decrease_tol = 1e-12;
  double armijo = 1e-4;
  double backtrack = 0.5;
};

struct RefineResult {
  Eigen::VectorXcd v;
  double initial_objective = 0.0;
  double objective = 0.0;
  int iterations = 0;  // accepted steps
};

/// Gradient descent with Armijo backtracking on `completion_objective`,
/// run separately on each subgrid. Returns the best iterate.
RefineResult least_squares_refine(const PartialMatrix& V, const Grid& grid,
                                  const Eigen::VectorXcd& v0, const RefineOptions& options = {});

struct ReconstructionError {
  double kappa = 0.0;
  /// No branches: the diagonal was used and the denominator set to 1.
  bool degenerate = false;
};

ReconstructionError reconstruction_error(const PartialMatrix& V, const SparsityPattern& pattern,
                                         const Eigen::VectorXcd& v);

/// Per-bus `v^H (P_n + i Q_n) v + (p_n + i q_n)^T f - sum_j s_j`.
Eigen::VectorXcd power_balance_error(const Eigen::VectorXcd& v, const Eigen::VectorXd& f,
                                     const Eigen::VectorXcd& s, const QcqpProblem& problem);

struct DcRestoration {
  Eigen::VectorXcd v;
  /// max over DC branches of |Im(conj(V_src) V_dst)| before restoration.
  double lemma_residual = 0.0;
  /// Set when the residual exceeds 1e-6.
  std::optional<std::string> diagnostic;
};

/// Replaces DC bus voltages by their magnitudes.
DcRestoration restore_dc_state(const Eigen::VectorXcd& v, const Grid& grid);

/// Loss error per converter:
/// eta_fwd (p_src - [Re S_src]+) + eta_bwd (p_dst - [Re S_dst]+).
Eigen::VectorXd converter_loss_error(const Eigen::VectorXd& f, const Grid& grid);

/// Side to fix for a converter whose loss error is too large: p_dst = 0 when
/// the net flow runs from src to dst, p_src = 0 otherwise.
ModeFix choose_mode_fix(const Eigen::VectorXd& f, const Grid& grid, std::size_t converter);

struct Lmps {
  bool available = false;
  std::string reason;
  Eigen::VectorXd p;  // currency per p.u. and hour
  Eigen::VectorXd q;
};

/// Balance duals of an optimal, exact solution. Withheld (with a reason) when
/// the solver is not optimal or `kappa` exceeds `threshold`.
Lmps extract_lmps(const SolverSolution& solution, const Relaxation& relaxation, double kappa,
                  double threshold = 1e-8);

}  // namespace hyopf
