#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyopf/pipeline.hpp"

namespace hyopf {

inline constexpr const char* kReportSchema = "hyopf-report-1";

/// Percent gap `100 (1 - p_relax / p_ref)`. Throws ParameterError for p_ref = 0.
double optimality_gap(double p_ref, double p_relax);

struct RunReport {
  std::string case_name;
  double objective = 0.0;  // currency per hour
  std::string relaxation;
  double tau = 0.0;
  std::string status;
  int iterations = 0;
  Residuals residuals;
  double kappa_hat = 0.0;
  bool kappa_degenerate = false;
  double max_epsilon = 0.0;  // p.u.
  double max_theta = 0.0;    // p.u.
  double first_max_theta = 0.0;
  bool mode_fix_applied = false;
  bool loss_error_persistent = false;
  double lemma_residual = 0.0;
  bool dc_radial = false;
  bool hybrid_architecture = false;
  Timings timings;  // seconds
  std::optional<double> reference;
  std::optional<double> gap;  // percent
  std::vector<Complex> voltages;  // restored, p.u.
  std::vector<Complex> injections;
  std::optional<std::vector<double>> lmp_p;  // currency per p.u. and hour
  std::optional<std::vector<double>> lmp_q;
  std::string lmp_reason;
  std::vector<std::string> diagnostics;
};

RunReport make_report(const OpfResult& result, const std::string& case_name,
                      std::optional<double> reference = std::nullopt);

std::string to_json(const RunReport& report);
/// Throws DocumentError naming the field for malformed input.
RunReport report_from_json(const std::string& text);

/// Fixed-width summary table.
std::string format_table(const RunReport& report);

}  // namespace hyopf
