#include "hyopf/pipeline.hpp"

#include <chrono>
#include <limits>
#include <sstream>

namespace hyopf {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Relaxation relax(const QcqpProblem& problem, const PipelineOptions& options) {
  return options.relaxation == RelaxationKind::socr ? build_socr(problem)
                                                    : build_sdr(problem, options.sdr_limit);
}

void recover(OpfResult& r, const PipelineOptions& options) {
  const auto& problem = r.problem;
  const auto& x = r.solution.x;
  r.V = extract_partial(r.relaxation, problem.pattern, x);
  r.f = extract_converter(r.relaxation, problem, x);
  r.s = extract_injection(r.relaxation, problem, x);
  const auto v0 = traversal_completion(r.V, problem.grid);
  r.v_hat = least_squares_refine(r.V, problem.grid, v0, options.refine).v;
  const auto err = reconstruction_error(r.V, problem.pattern, r.v_hat);
  r.kappa = err.kappa;
  r.kappa_degenerate = err.degenerate;
  r.epsilon = power_balance_error(r.v_hat, r.f, r.s, problem);
  r.max_epsilon = r.epsilon.size() ? r.epsilon.cwiseAbs().maxCoeff() : 0.0;
  auto dc = restore_dc_state(r.v_hat, problem.grid);
  r.v_bar = std::move(dc.v);
  r.lemma_residual = dc.lemma_residual;
  if (dc.diagnostic) r.diagnostics.push_back(*dc.diagnostic);
  r.theta = converter_loss_error(r.f, problem.grid);
  r.max_theta = r.theta.size() ? r.theta.maxCoeff() : 0.0;
}

void solve_stage(OpfResult& r, const PipelineOptions& options) {
  auto start = Clock::now();
  r.relaxation = relax(r.problem, options);
  r.timings.modeling += seconds_since(start);

  start = Clock::now();
  r.solution = solve(r.relaxation.conic, options.solver);
  r.timings.solve += seconds_since(start);

  start = Clock::now();
  if (r.optimal()) recover(r, options);
  r.timings.recovery += seconds_since(start);
}

OpfResult run_assembled(OpfResult r, const PipelineOptions& options) {
  solve_stage(r, options);
  if (!r.optimal()) {
    r.diagnostics.push_back(std::string("solver status ") + to_string(r.solution.status) +
                            ": " + r.solution.message);
    r.lmps.reason = std::string("solver status is ") + to_string(r.solution.status);
    return r;
  }
  r.first_max_theta = r.max_theta;
  if (options.mode_fix && r.max_theta > options.mode_tol) {
    for (Eigen::Index l = 0; l < r.theta.size(); ++l) {
      if (r.theta(l) > options.mode_tol) {
        r.problem.mode_fixes.push_back(
            choose_mode_fix(r.f, r.problem.grid, static_cast<std::size_t>(l)));
      }
    }
    r.resolved = true;
    r.diagnostics.clear();
    std::ostringstream fixed;
    fixed << "converter loss error " << r.first_max_theta << " on the first solve; fixed mode of";
    for (const auto& fix : r.problem.mode_fixes) {
      fixed << " converter " << fix.converter + 1 << " (p_" << to_string(fix.zero_side) << " = 0)";
    }
    r.diagnostics.push_back(fixed.str());
    solve_stage(r, options);
    if (!r.optimal()) {
      r.diagnostics.push_back(std::string("solver status after mode fix ") +
                              to_string(r.solution.status) + ": " + r.solution.message);
      r.lmps.reason = std::string("solver status is ") + to_string(r.solution.status);
      return r;
    }
    if (r.max_theta > options.mode_tol) {
      r.loss_error_persistent = true;
      std::ostringstream msg;
      msg << "converter loss error " << r.max_theta << " persists after the mode fix";
      r.diagnostics.push_back(msg.str());
    }
  }
  const auto start = Clock::now();
  r.lmps = extract_lmps(r.solution, r.relaxation, r.kappa,
                        options.lmp_gate ? options.exactness_threshold
                                         : std::numeric_limits<double>::infinity());
  r.timings.recovery += seconds_since(start);
  return r;
}

}  // namespace

OpfResult run_opf(const Grid& grid, const PipelineOptions& options) {
  OpfResult r;
  auto start = Clock::now();
  r.validation = validate(grid);
  r.timings.verification = seconds_since(start);
  if (!r.validation.ok()) throw ValidationError(r.validation);

  start = Clock::now();
  r.problem = assemble(grid, options.tau);
  r.timings.modeling = seconds_since(start);
  return run_assembled(std::move(r), options);
}

OpfResult run_opf(const QcqpProblem& problem, const PipelineOptions& options) {
  OpfResult r;
  r.validation = validate(problem.grid);
  r.problem = problem;
  return run_assembled(std::move(r), options);
}

}  // namespace hyopf
