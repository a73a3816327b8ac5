#include "hyopf/report.hpp"

#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hyopf/grid_document.hpp"

namespace hyopf {
namespace {

using ordered = nlohmann::ordered_json;
using json = nlohmann::json;

ordered complex_list(const std::vector<Complex>& zs) {
  ordered out = ordered::array();
  for (const auto& z : zs) out.push_back(ordered::array({z.real(), z.imag()}));
  return out;
}

std::vector<Complex> to_vector(const Eigen::VectorXcd& v) {
  return {v.data(), v.data() + v.size()};
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

template <typename T>
T get(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw DocumentError(std::string("report.") + key + ": missing field");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DocumentError(std::string("report.") + key + ": unexpected type");
  }
}

template <typename T>
std::optional<T> get_optional(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return get<T>(doc, key);
}

std::vector<Complex> get_complex_list(const json& doc, const char* key) {
  std::vector<Complex> out;
  for (const auto& pair : get<std::vector<std::vector<double>>>(doc, key)) {
    if (pair.size() != 2) throw DocumentError(std::string("report.") + key + ": expected [re, im]");
    out.emplace_back(pair[0], pair[1]);
  }
  return out;
}

}  // namespace

double optimality_gap(double p_ref, double p_relax) {
  if (p_ref == 0.0) throw ParameterError("optimality_gap: reference objective is zero");
  return 100.0 * (1.0 - p_relax / p_ref);
}

RunReport make_report(const OpfResult& result, const std::string& case_name,
                      std::optional<double> reference) {
  RunReport r;
  r.case_name = case_name;
  r.objective = result.objective();
  r.relaxation = to_string(result.relaxation.kind);
  r.tau = result.problem.tau;
  r.status = to_string(result.solution.status);
  r.iterations = result.solution.iterations;
  r.residuals = result.solution.residuals;
  r.kappa_hat = result.kappa;
  r.kappa_degenerate = result.kappa_degenerate;
  r.max_epsilon = result.max_epsilon;
  r.max_theta = result.max_theta;
  r.first_max_theta = result.first_max_theta;
  r.mode_fix_applied = result.resolved;
  r.loss_error_persistent = result.loss_error_persistent;
  r.lemma_residual = result.lemma_residual;
  r.dc_radial = result.validation.dc_radial;
  r.hybrid_architecture = result.validation.hybrid_architecture;
  r.timings = result.timings;
  if (reference) {
    r.reference = reference;
    r.gap = optimality_gap(*reference, r.objective);
  }
  r.voltages = to_vector(result.v_bar);
  r.injections = to_vector(result.s);
  if (result.lmps.available) {
    r.lmp_p = to_vector(result.lmps.p);
    r.lmp_q = to_vector(result.lmps.q);
  } else {
    r.lmp_reason = result.lmps.reason;
  }
  r.diagnostics = result.diagnostics;
  return r;
}

std::string to_json(const RunReport& r) {
  ordered doc;
  doc["schema"] = kReportSchema;
  doc["case"] = r.case_name;
  doc["objective"] = r.objective;
  doc["relaxation"] = r.relaxation;
  doc["loss_price"] = r.tau;
  doc["status"] = r.status;
  doc["iterations"] = r.iterations;
  doc["residuals"] = {{"primal", r.residuals.primal},
                      {"dual", r.residuals.dual},
                      {"gap", r.residuals.gap}};
  doc["kappa_hat"] = r.kappa_hat;
  doc["kappa_degenerate"] = r.kappa_degenerate;
  doc["max_balance_error"] = r.max_epsilon;
  doc["max_loss_error"] = r.max_theta;
  doc["first_max_loss_error"] = r.first_max_theta;
  doc["mode_fix_applied"] = r.mode_fix_applied;
  doc["loss_error_persistent"] = r.loss_error_persistent;
  doc["dc_circulation"] = r.lemma_residual;
  doc["dc_radial"] = r.dc_radial;
  doc["hybrid_architecture"] = r.hybrid_architecture;
  doc["time"] = {{"verification", r.timings.verification},
                 {"modeling", r.timings.modeling},
                 {"solve", r.timings.solve},
                 {"recovery", r.timings.recovery}};
  doc["reference"] = r.reference ? ordered(*r.reference) : ordered();
  doc["gap_percent"] = r.gap ? ordered(*r.gap) : ordered();
  doc["voltages"] = complex_list(r.voltages);
  doc["injections"] = complex_list(r.injections);
  doc["lmp_p"] = r.lmp_p ? ordered(*r.lmp_p) : ordered();
  doc["lmp_q"] = r.lmp_q ? ordered(*r.lmp_q) : ordered();
  doc["lmp_reason"] = r.lmp_reason;
  doc["diagnostics"] = r.diagnostics;
  return doc.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError(std::string("report: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DocumentError("report: expected an object");
  if (get<std::string>(doc, "schema") != kReportSchema) {
    throw DocumentError(std::string("report.schema: expected \"") + kReportSchema + "\"");
  }
  RunReport r;
  r.case_name = get<std::string>(doc, "case");
  r.objective = get<double>(doc, "objective");
  r.relaxation = get<std::string>(doc, "relaxation");
  r.tau = get<double>(doc, "loss_price");
  r.status = get<std::string>(doc, "status");
  r.iterations = get<int>(doc, "iterations");
  const auto res = get<json>(doc, "residuals");
  r.residuals = {get<double>(res, "primal"), get<double>(res, "dual"), get<double>(res, "gap")};
  r.kappa_hat = get<double>(doc, "kappa_hat");
  r.kappa_degenerate = get<bool>(doc, "kappa_degenerate");
  r.max_epsilon = get<double>(doc, "max_balance_error");
  r.max_theta = get<double>(doc, "max_loss_error");
  r.first_max_theta = get<double>(doc, "first_max_loss_error");
  r.mode_fix_applied = get<bool>(doc, "mode_fix_applied");
  r.loss_error_persistent = get<bool>(doc, "loss_error_persistent");
  r.lemma_residual = get<double>(doc, "dc_circulation");
  r.dc_radial = get<bool>(doc, "dc_radial");
  r.hybrid_architecture = get<bool>(doc, "hybrid_architecture");
  const auto time = get<json>(doc, "time");
  r.timings = {get<double>(time, "verification"), get<double>(time, "modeling"),
               get<double>(time, "solve"), get<double>(time, "recovery")};
  r.reference = get_optional<double>(doc, "reference");
  r.gap = get_optional<double>(doc, "gap_percent");
  r.voltages = get_complex_list(doc, "voltages");
  r.injections = get_complex_list(doc, "injections");
  r.lmp_p = get_optional<std::vector<double>>(doc, "lmp_p");
  r.lmp_q = get_optional<std::vector<double>>(doc, "lmp_q");
  r.lmp_reason = get<std::string>(doc, "lmp_reason");
  r.diagnostics = get<std::vector<std::string>>(doc, "diagnostics");
  return r;
}

std::string format_table(const RunReport& r) {
  std::ostringstream out;
  auto row = [&](const std::string& name, const std::string& value) {
    out << std::left << std::setw(24) << name << value << "\n";
  };
  auto sci = [](double x) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(3) << x;
    return s.str();
  };
  auto fixed = [](double x, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << x;
    return s.str();
  };
  row("case", r.case_name);
  row("status", r.status + " (" + std::to_string(r.iterations) + " iterations)");
  row("relaxation", r.relaxation);
  row("loss price", fixed(r.tau, 4));
  row("objective [/h]", fixed(r.objective, 6));
  if (r.gap) {
    row("reference [/h]", fixed(*r.reference, 6));
    row("optimality gap [%]", fixed(*r.gap, 4));
  }
  row("kappa_hat", sci(r.kappa_hat) + (r.kappa_degenerate ? " (degenerate)" : ""));
  row("max |eps_n| [p.u.]", sci(r.max_epsilon));
  row("max theta_l [p.u.]", sci(r.max_theta));
  if (r.mode_fix_applied) row("first max theta_l", sci(r.first_max_theta));
  row("dc radial", r.dc_radial ? "yes" : "no");
  row("hybrid architecture", r.hybrid_architecture ? "yes" : "no");
  row("residuals p/d/gap",
      sci(r.residuals.primal) + " " + sci(r.residuals.dual) + " " + sci(r.residuals.gap));
  row("time verify [s]", fixed(r.timings.verification, 4));
  row("time modeling [s]", fixed(r.timings.modeling, 4));
  row("time solve [s]", fixed(r.timings.solve, 4));
  row("time recovery [s]", fixed(r.timings.recovery, 4));
  if (!r.voltages.empty()) {
    out << "\n" << std::left << std::setw(6) << "bus" << std::right << std::setw(12) << "|V|"
        << std::setw(12) << "angle" << std::setw(14) << "lmp_p" << std::setw(14) << "lmp_q"
        << "\n";
    for (std::size_t n = 0; n < r.voltages.size(); ++n) {
      out << std::left << std::setw(6) << n + 1 << std::right << std::setw(12)
          << fixed(std::abs(r.voltages[n]), 6) << std::setw(12) << fixed(std::arg(r.voltages[n]), 6);
      if (r.lmp_p && r.lmp_q) {
        out << std::setw(14) << fixed((*r.lmp_p)[n], 4) << std::setw(14) << fixed((*r.lmp_q)[n], 4);
      } else {
        out << std::setw(14) << "-" << std::setw(14) << "-";
      }
      out << "\n";
    }
  }
  if (!r.lmp_p) out << "\nLMPs withheld: " << r.lmp_reason << "\n";
  for (const auto& d : r.diagnostics) out << "note: " << d << "\n";
  return out.str();
}

}  // namespace hyopf
