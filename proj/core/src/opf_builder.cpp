#include "hyopf/opf_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyopf/polygon.hpp"
#include "hyopf/validation.hpp"

namespace hyopf {
namespace {

double segment_max(const std::vector<Segment>& segments, double x) {
  if (segments.empty()) {
    return 0.0;
  }
  double out = -std::numeric_limits<double>::infinity();
  for (const auto& seg : segments) {
    out = std::max(out, seg.slope * x + seg.intercept);
  }
  return out;
}

Inequality make_inequality(ConstraintKind kind, int entity, HermitianForm form,
                           Eigen::Index slots) {
  form.converter.resize(slots);
  return {kind, entity, std::move(form)};
}

}  // namespace

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::converter_capability: return "converter_capability";
    case ConstraintKind::voltage_lower: return "voltage_lower";
    case ConstraintKind::voltage_upper: return "voltage_upper";
    case ConstraintKind::ampacity_src: return "ampacity_src";
    case ConstraintKind::ampacity_dst: return "ampacity_dst";
    case ConstraintKind::drop_lower: return "drop_lower";
    case ConstraintKind::drop_upper: return "drop_upper";
    case ConstraintKind::angle_real: return "angle_real";
    case ConstraintKind::angle_lower: return "angle_lower";
    case ConstraintKind::angle_upper: return "angle_upper";
  }
  return "unknown";
}

std::vector<ConverterCoupling> converter_vectors(const Grid& grid) {
  const auto slots = static_cast<Eigen::Index>(4 * grid.converters.size());
  std::vector<ConverterCoupling> out(grid.buses.size(),
                                     {Eigen::VectorXd::Zero(slots), Eigen::VectorXd::Zero(slots)});
  for (std::size_t l = 0; l < grid.converters.size(); ++l) {
    const auto& cv = grid.converters[l];
    const auto base = static_cast<Eigen::Index>(4 * l);
    auto& src = out[static_cast<std::size_t>(cv.src - 1)];
    auto& dst = out[static_cast<std::size_t>(cv.dst - 1)];
    src.p(base) += 1.0;
    src.p(base + 1) -= 1.0 - cv.loss_bwd;
    src.q(base + 2) -= 1.0;
    dst.p(base + 1) += 1.0;
    dst.p(base) -= 1.0 - cv.loss_fwd;
    dst.q(base + 3) -= 1.0;
  }
  return out;
}

std::vector<CapabilityRow> capability_rows(const Converter& converter, bool src_dc, bool dst_dc) {
  for (const auto* poly : {&converter.cap_src, &converter.cap_dst}) {
    if (!poly->empty() && polygon_extent(*poly).empty) {
      throw ParameterError("converter " + std::to_string(converter.id) +
                           ": empty capability polygon");
    }
  }
  std::vector<CapabilityRow> rows;
  // Terminal power into the bus: P_src = -(p_src - (1 - eta_bwd) p_dst), Q_src = q_src.
  for (const auto& hs : converter.cap_src) {
    CapabilityRow row;
    row.coeffs << -hs.p, hs.p * (1.0 - converter.loss_bwd), hs.q, 0.0;
    row.offset = hs.offset;
    rows.push_back(row);
  }
  for (const auto& hs : converter.cap_dst) {
    CapabilityRow row;
    row.coeffs << hs.p * (1.0 - converter.loss_fwd), -hs.p, 0.0, hs.q;
    row.offset = hs.offset;
    rows.push_back(row);
  }
  CapabilityRow nonneg_src;
  nonneg_src.coeffs(0) = -1.0;
  CapabilityRow nonneg_dst;
  nonneg_dst.coeffs(1) = -1.0;
  rows.push_back(nonneg_src);
  rows.push_back(nonneg_dst);
  for (int side = 0; side < 2; ++side) {
    if ((side == 0 && src_dc) || (side == 1 && dst_dc)) {
      CapabilityRow up;
      up.coeffs(2 + side) = 1.0;
      CapabilityRow down;
      down.coeffs(2 + side) = -1.0;
      rows.push_back(up);
      rows.push_back(down);
    }
  }
  return rows;
}

std::vector<Segment> cost_epigraph(const PwlCost& cost) {
  if (!cost.is_convex()) {
    throw ParameterError("cost breakpoints are not convex");
  }
  std::vector<Segment> out;
  if (cost.points.size() == 1) {
    out.push_back({0.0, cost.points.front().y});
    return out;
  }
  for (std::size_t i = 0; i + 1 < cost.points.size(); ++i) {
    const auto& a = cost.points[i];
    const auto& b = cost.points[i + 1];
    const double slope = (b.y - a.y) / (b.x - a.x);
    out.push_back({slope, a.y - slope * a.x});
  }
  return out;
}

double InjectorModel::cost(Complex s) const {
  return segment_max(cost_p, s.real()) + segment_max(cost_q, s.imag());
}

double QcqpProblem::objective(const Eigen::VectorXcd& v, const Eigen::VectorXd& f,
                              const Eigen::VectorXcd& s) const {
  double out = 0.0;
  for (std::size_t j = 0; j < injectors.size(); ++j) {
    out += injectors[j].cost(s(static_cast<Eigen::Index>(j)));
  }
  if (tau != 0.0) {
    out += tau * loss.value(v, f);
  }
  return out;
}

double QcqpProblem::max_violation(const Eigen::VectorXcd& v, const Eigen::VectorXd& f,
                                  const Eigen::VectorXcd& s) const {
  double worst = 0.0;
  for (const auto& row : balance) {
    Complex injected{0.0, 0.0};
    for (auto j : row.injectors) {
      injected += s(static_cast<Eigen::Index>(j));
    }
    worst = std::max(worst, std::abs(row.p.value(v, f) - injected.real()));
    worst = std::max(worst, std::abs(row.q.value(v, f) - injected.imag()));
  }
  for (const auto& ineq : inequalities) {
    worst = std::max(worst, ineq.form.value(v, f) - ineq.form.offset);
  }
  for (std::size_t j = 0; j < injectors.size(); ++j) {
    const Complex sj = s(static_cast<Eigen::Index>(j));
    for (const auto& hs : injectors[j].capability) {
      worst = std::max(worst, hs.p * sj.real() + hs.q * sj.imag() - hs.offset);
    }
  }
  for (const auto& fix : mode_fixes) {
    const auto slot = static_cast<Eigen::Index>(4 * fix.converter + (fix.zero_side == Side::src ? 0 : 1));
    worst = std::max(worst, std::abs(f(slot)));
  }
  return worst;
}

QcqpProblem assemble(const Grid& grid, double tau) {
  if (!(tau >= 0.0)) {
    throw ParameterError("loss price must be nonnegative");
  }
  auto report = validate(grid);
  if (!report.ok()) {
    throw ValidationError(std::move(report));
  }

  QcqpProblem out;
  out.grid = grid;
  out.tau = tau;
  const std::size_t n = grid.buses.size();
  const auto slots = static_cast<Eigen::Index>(4 * grid.converters.size());
  out.dims.buses = n;
  out.dims.branches = grid.branches.size();
  out.dims.ac_branches = grid.ac_branch_count();
  out.dims.converters = grid.converters.size();
  out.admittance = bus_admittance(grid);
  out.pattern = sparsity_pattern(grid);
  out.loss = loss_coefficients(grid, out.admittance);

  // Injectors: the grid's own, then fixed loads, then converter static losses.
  for (const auto& inj : grid.injectors) {
    InjectorModel model;
    model.source_id = inj.id;
    model.bus = inj.bus;
    model.capability = inj.capability;
    model.cost_p = cost_epigraph(inj.cost_p);
    model.cost_q = cost_epigraph(inj.cost_q);
    out.injectors.push_back(std::move(model));
  }
  for (const auto& bus : grid.buses) {
    if (bus.load != Complex{}) {
      InjectorModel model;
      model.origin = InjectorOrigin::fixed_load;
      model.source_id = bus.id;
      model.bus = bus.id;
      model.capability =
          box_polygon(-bus.load.real(), -bus.load.real(), -bus.load.imag(), -bus.load.imag());
      out.injectors.push_back(std::move(model));
    }
  }
  for (const auto& cv : grid.converters) {
    if (cv.static_loss > 0.0) {
      InjectorModel model;
      model.origin = InjectorOrigin::static_loss;
      model.source_id = cv.id;
      model.bus = cv.static_loss_side == Side::src ? cv.src : cv.dst;
      model.capability = box_polygon(-cv.static_loss, -cv.static_loss, 0.0, 0.0);
      out.injectors.push_back(std::move(model));
    }
  }
  for (auto& model : out.injectors) {
    if (grid.is_dc(model.bus)) {
      model.capability.push_back({0.0, 1.0, 0.0});
      model.capability.push_back({0.0, -1.0, 0.0});
    }
  }
  out.dims.injectors = out.injectors.size();

  const auto coupling = converter_vectors(grid);
  out.balance.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [p, q] = balance_matrices(out.admittance, i);
    p.converter = coupling[i].p.sparseView();
    q.converter = coupling[i].q.sparseView();
    out.balance[i].p = std::move(p);
    out.balance[i].q = std::move(q);
  }
  for (std::size_t j = 0; j < out.injectors.size(); ++j) {
    out.balance[static_cast<std::size_t>(out.injectors[j].bus - 1)].injectors.push_back(j);
  }

  for (std::size_t l = 0; l < grid.converters.size(); ++l) {
    const auto& cv = grid.converters[l];
    for (const auto& row : capability_rows(cv, grid.is_dc(cv.src), grid.is_dc(cv.dst))) {
      HermitianForm form;
      form.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      form.converter.resize(slots);
      for (int c = 0; c < 4; ++c) {
        if (row.coeffs(c) != 0.0) {
          form.converter.coeffRef(static_cast<Eigen::Index>(4 * l) + c) = row.coeffs(c);
        }
      }
      form.offset = row.offset;
      out.inequalities.push_back({ConstraintKind::converter_capability, cv.id, std::move(form)});
    }
  }
  out.dims.capability_rows = out.inequalities.size();

  for (std::size_t i = 0; i < n; ++i) {
    const auto& bus = grid.buses[i];
    auto [lower, upper] = voltage_matrices(n, i, bus.v_min, bus.v_max);
    out.inequalities.push_back(
        make_inequality(ConstraintKind::voltage_lower, bus.id, std::move(lower), slots));
    out.inequalities.push_back(
        make_inequality(ConstraintKind::voltage_upper, bus.id, std::move(upper), slots));
  }
  for (std::size_t k = 0; k < grid.branches.size(); ++k) {
    const auto& br = grid.branches[k];
    auto [src, dst] = ampacity_matrices(out.admittance, k, br.i_max_src, br.i_max_dst);
    out.inequalities.push_back(
        make_inequality(ConstraintKind::ampacity_src, br.id, std::move(src), slots));
    out.inequalities.push_back(
        make_inequality(ConstraintKind::ampacity_dst, br.id, std::move(dst), slots));
  }
  for (const auto& br : grid.branches) {
    if (!grid.is_ac_branch(br)) {
      continue;
    }
    auto [lower, upper] = drop_matrices(n, static_cast<std::size_t>(br.src - 1),
                                        static_cast<std::size_t>(br.dst - 1), br.drop_min,
                                        br.drop_max);
    out.inequalities.push_back(
        make_inequality(ConstraintKind::drop_lower, br.id, std::move(lower), slots));
    out.inequalities.push_back(
        make_inequality(ConstraintKind::drop_upper, br.id, std::move(upper), slots));
  }
  for (const auto& br : grid.branches) {
    const bool ac = grid.is_ac_branch(br);
    std::optional<std::pair<double, double>> bounds;
    if (ac) {
      bounds = std::make_pair(br.angle_min, br.angle_max);
    }
    auto forms = angle_matrices(n, static_cast<std::size_t>(br.src - 1),
                                static_cast<std::size_t>(br.dst - 1), bounds);
    out.inequalities.push_back(
        make_inequality(ConstraintKind::angle_real, br.id, std::move(forms.real_part), slots));
    if (ac) {
      out.inequalities.push_back(
          make_inequality(ConstraintKind::angle_lower, br.id, std::move(*forms.lower), slots));
      out.inequalities.push_back(
          make_inequality(ConstraintKind::angle_upper, br.id, std::move(*forms.upper), slots));
    }
  }
  out.dims.inequalities = out.inequalities.size();
  return out;
}

QcqpProblem shift_marginal_cost(const QcqpProblem& problem, double tau) {
  if (!(tau >= 0.0)) {
    throw ParameterError("loss price must be nonnegative");
  }
  QcqpProblem out = problem;
  out.tau = 0.0;
  if (tau == 0.0) {
    return out;
  }
  for (auto& inj : out.injectors) {
    if (inj.cost_p.empty()) {
      inj.cost_p.push_back({tau, 0.0});
      continue;
    }
    for (auto& seg : inj.cost_p) {
      seg.slope += tau;
    }
  }
  return out;
}

}  // namespace hyopf
