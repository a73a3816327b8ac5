#pragma once

#include <string>

#include <Eigen/Dense>

#include "hyopf/conic_problem.hpp"

namespace hyopf {

enum class SolverStatus { optimal, infeasible, unbounded, iteration_limit, numerical_failure };

const char* to_string(SolverStatus status);

struct SolverConfig {
  double feasibility_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iterations = 100;
  double step_fraction = 0.99;
  double regularization = 1e-9;

  /// Defaults, with both tolerances taken from HYOPF_SOLVER_TOL when set.
  static SolverConfig from_env();
  /// Throws ParameterError for nonpositive tolerances or a step fraction outside (0, 1).
  void check() const;
};

/// Scaled residuals used by the termination test:
///   primal = max(||A x - b|| / max(1, ||b||), ||G x + s - h|| / max(1, ||h||))
///   dual   = ||c - A^T y + G^T z|| / max(1, ||c||)
///   gap    = |s^T z| / max(1, |c^T x|)
struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

/// Solution of a conic program. `y` is signed as the sensitivity of the optimal
/// value to `b` (`y = d p* / d b`), `z` is the nonnegative cone multiplier of
/// `G x + s = h`. For infeasible or unbounded problems the vectors hold the
/// normalized certificate.
struct SolverSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  Eigen::VectorXd s;
  SolverStatus status = SolverStatus::numerical_failure;
  int iterations = 0;
  Residuals residuals;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  std::string message;
};

/// Primal-dual interior-point method with Nesterov-Todd scaling and a
/// Mehrotra predictor-corrector. Deterministic and single-threaded.
SolverSolution solve(const ConicProblem& problem, const SolverConfig& config = {});

/// Recomputes the termination residuals of `solution` on `problem`.
Residuals kkt_residuals(const ConicProblem& problem, const SolverSolution& solution);

}  // namespace hyopf
