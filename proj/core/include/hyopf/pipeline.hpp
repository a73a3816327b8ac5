#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyopf/conic_solver.hpp"
#include "hyopf/opf_builder.hpp"
#include "hyopf/recovery.hpp"
#include "hyopf/relaxation.hpp"
#include "hyopf/validation.hpp"

namespace hyopf {

struct PipelineOptions {
  RelaxationKind relaxation = RelaxationKind::socr;
  double tau = 0.0;
  SolverConfig solver;
  /// Converter loss error above which the mode is fixed and the OPF re-solved.
  double mode_tol = 1e-6;
  bool mode_fix = true;
  double exactness_threshold = 1e-8;
  /// Withhold LMPs unless kappa_hat is below the exactness threshold.
  bool lmp_gate = true;
  std::size_t sdr_limit = kDenseSdrLimit;
  RefineOptions refine;
};

/// Wall time in seconds.
struct Timings {
  double verification = 0.0;
  double modeling = 0.0;
  double solve = 0.0;
  double recovery = 0.0;

  double total() const { return verification + modeling + solve + recovery; }
};

struct OpfResult {
  ValidationReport validation;
  QcqpProblem problem;  // final problem, including mode fixes
  Relaxation relaxation;
  SolverSolution solution;

  // Recovered state; empty unless the solver reported optimal.
  PartialMatrix V;
  Eigen::VectorXcd v_hat;
  Eigen::VectorXcd v_bar;  // DC voltages real and nonnegative
  Eigen::VectorXd f;
  Eigen::VectorXcd s;
  double kappa = 0.0;
  bool kappa_degenerate = false;
  Eigen::VectorXcd epsilon;
  double max_epsilon = 0.0;
  Eigen::VectorXd theta;
  double max_theta = 0.0;
  double lemma_residual = 0.0;

  /// Loss error of the first solve; equals max_theta without a re-solve.
  double first_max_theta = 0.0;
  bool resolved = false;
  bool loss_error_persistent = false;

  Lmps lmps;
  std::vector<std::string> diagnostics;
  Timings timings;

  bool optimal() const { return solution.status == SolverStatus::optimal; }
  double objective() const { return solution.primal_objective; }
};

/// Validate, assemble, relax, solve and recover. Throws ValidationError for an
/// invalid grid and Error for guard violations such as the dense SDR limit.
OpfResult run_opf(const Grid& grid, const PipelineOptions& options = {});

/// Like run_opf on an already assembled problem (no validation step).
OpfResult run_opf(const QcqpProblem& problem, const PipelineOptions& options = {});

}  // namespace hyopf
