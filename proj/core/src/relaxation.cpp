#include "hyopf/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hyopf {
namespace {

using Triplet = Eigen::Triplet<double>;

class RowWriter {
 public:
  RowWriter(const VariableLayout& layout, std::vector<Triplet>& out) : layout_(layout), out_(out) {}

  void add(std::size_t row, std::size_t col, double value) {
    if (value != 0.0) {
      out_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
    }
  }

  // Adds scale * trace(M V) for the Hermitian part of `form`, using
  // trace(M V) = sum_n M_nn V_nn + sum_{i<j} 2 (Re M_ij Re V_ij + Im M_ij Im V_ij).
  void add_trace(std::size_t row, const HermitianForm& form, double scale) {
    for (const auto& e : form.entries()) {
      if (e.row == e.col) {
        add(row, layout_.diagonal + static_cast<std::size_t>(e.row), scale * e.value.real());
        continue;
      }
      const int i = std::min(e.row, e.col);
      const int j = std::max(e.row, e.col);
      const auto it = layout_.off_diagonal.find({i, j});
      if (it == layout_.off_diagonal.end()) {
        throw DimensionError("matrix entry (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") outside the sparsity pattern");
      }
      // Entry (i, j) pairs with V_ji = conj(V_ij); entry (j, i) with V_ij.
      const double im_sign = e.row < e.col ? 1.0 : -1.0;
      add(row, it->second, scale * e.value.real());
      add(row, it->second + 1, scale * im_sign * e.value.imag());
    }
  }

  void add_converter(std::size_t row, const Eigen::SparseVector<double>& c, double scale) {
    for (Eigen::SparseVector<double>::InnerIterator it(c); it; ++it) {
      add(row, layout_.converter + static_cast<std::size_t>(it.index()), scale * it.value());
    }
  }

 private:
  const VariableLayout& layout_;
  std::vector<Triplet>& out_;
};

Relaxation build(const QcqpProblem& problem, RelaxationKind kind) {
  Relaxation out;
  out.kind = kind;
  const std::size_t n = problem.dims.buses;
  out.buses = n;
  auto& layout = out.layout;
  std::size_t next = 0;
  layout.diagonal = next;
  next += n;
  std::vector<std::pair<int, int>> pairs;
  if (kind == RelaxationKind::socr) {
    pairs = problem.pattern.upper_pairs();
  } else {
    for (int j = 0; j < static_cast<int>(n); ++j) {
      for (int i = 0; i < j; ++i) {
        pairs.emplace_back(i, j);
      }
    }
    std::sort(pairs.begin(), pairs.end());
  }
  for (const auto& p : pairs) {
    layout.off_diagonal[p] = next;
    next += 2;
  }
  layout.converter = next;
  next += problem.converter_slots();
  layout.injector = next;
  next += 2 * problem.injectors.size();
  for (const auto& inj : problem.injectors) {
    layout.epigraph_p.push_back(inj.cost_p.empty() ? -1 : static_cast<long>(next));
    next += inj.cost_p.empty() ? 0 : 1;
    layout.epigraph_q.push_back(inj.cost_q.empty() ? -1 : static_cast<long>(next));
    next += inj.cost_q.empty() ? 0 : 1;
  }
  layout.size = next;

  auto& conic = out.conic;
  conic.c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.size));
  for (std::size_t j = 0; j < problem.injectors.size(); ++j) {
    if (layout.epigraph_p[j] >= 0) conic.c(layout.epigraph_p[j]) = 1.0;
    if (layout.epigraph_q[j] >= 0) conic.c(layout.epigraph_q[j]) = 1.0;
  }
  if (problem.tau != 0.0) {
    std::vector<Triplet> obj;
    RowWriter writer(layout, obj);
    writer.add_trace(0, problem.loss.matrix, problem.tau);
    for (Eigen::Index k = 0; k < problem.loss.converter.size(); ++k) {
      writer.add(0, layout.converter + static_cast<std::size_t>(k),
                 problem.tau * problem.loss.converter(k));
    }
    for (const auto& t : obj) {
      conic.c(t.col()) += t.value();
    }
  }

  // Equalities: sum of injections - network flow - converter draw = 0.
  std::vector<Triplet> a;
  RowWriter eq(layout, a);
  auto& rows = out.rows;
  rows.balance_p = 0;
  rows.balance_q = n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& bal = problem.balance[i];
    eq.add_trace(rows.balance_p + i, bal.p, -1.0);
    eq.add_converter(rows.balance_p + i, bal.p.converter, -1.0);
    eq.add_trace(rows.balance_q + i, bal.q, -1.0);
    eq.add_converter(rows.balance_q + i, bal.q.converter, -1.0);
    for (auto j : bal.injectors) {
      eq.add(rows.balance_p + i, layout.injector + 2 * j, 1.0);
      eq.add(rows.balance_q + i, layout.injector + 2 * j + 1, 1.0);
    }
  }
  std::size_t a_rows = 2 * n;
  for (const auto& fix : problem.mode_fixes) {
    rows.mode_fix.push_back(a_rows);
    eq.add(a_rows, layout.converter + 4 * fix.converter + (fix.zero_side == Side::src ? 0 : 1),
           1.0);
    ++a_rows;
  }
  conic.A.resize(static_cast<Eigen::Index>(a_rows), static_cast<Eigen::Index>(layout.size));
  conic.A.setFromTriplets(a.begin(), a.end());
  conic.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a_rows));

  // Inequalities.
  std::vector<Triplet> g;
  std::vector<double> h;
  RowWriter ineq(layout, g);
  rows.inequality = 0;
  for (const auto& c : problem.inequalities) {
    const std::size_t row = h.size();
    ineq.add_trace(row, c.form, 1.0);
    ineq.add_converter(row, c.form.converter, 1.0);
    h.push_back(c.form.offset);
  }
  for (std::size_t j = 0; j < problem.injectors.size(); ++j) {
    rows.injector_capability.push_back(h.size());
    for (const auto& hs : problem.injectors[j].capability) {
      const std::size_t row = h.size();
      ineq.add(row, layout.injector + 2 * j, hs.p);
      ineq.add(row, layout.injector + 2 * j + 1, hs.q);
      h.push_back(hs.offset);
    }
  }
  for (std::size_t j = 0; j < problem.injectors.size(); ++j) {
    const auto& inj = problem.injectors[j];
    // slope * x - t <= -intercept
    rows.epigraph_p.push_back(h.size());
    for (const auto& seg : inj.cost_p) {
      const std::size_t row = h.size();
      ineq.add(row, layout.injector + 2 * j, seg.slope);
      ineq.add(row, static_cast<std::size_t>(layout.epigraph_p[j]), -1.0);
      h.push_back(-seg.intercept);
    }
    rows.epigraph_q.push_back(h.size());
    for (const auto& seg : inj.cost_q) {
      const std::size_t row = h.size();
      ineq.add(row, layout.injector + 2 * j + 1, seg.slope);
      ineq.add(row, static_cast<std::size_t>(layout.epigraph_q[j]), -1.0);
      h.push_back(-seg.intercept);
    }
  }
  conic.cones.nonneg = h.size();

  if (kind == RelaxationKind::socr) {
    // s = (V_ii + V_jj, 2 Re V_ij, 2 Im V_ij, V_ii - V_jj) in the SOC, G = -map.
    for (const auto& [pair, slot] : layout.off_diagonal) {
      const std::size_t row = h.size();
      const std::size_t di = layout.diagonal + static_cast<std::size_t>(pair.first);
      const std::size_t dj = layout.diagonal + static_cast<std::size_t>(pair.second);
      ineq.add(row, di, -1.0);
      ineq.add(row, dj, -1.0);
      ineq.add(row + 1, slot, -2.0);
      ineq.add(row + 2, slot + 1, -2.0);
      ineq.add(row + 3, di, -1.0);
      ineq.add(row + 3, dj, 1.0);
      h.insert(h.end(), 4, 0.0);
      conic.cones.soc.push_back(4);
    }
  } else {
    // s = svec(embed(V)) with embed(V) = [[Re V, -Im V], [Im V, Re V]], G = -map.
    const std::size_t order = 2 * n;
    const std::size_t base = h.size();
    const double r2 = std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t d = layout.diagonal + i;
      ineq.add(base + svec_index(order, i, i), d, -1.0);
      ineq.add(base + svec_index(order, n + i, n + i), d, -1.0);
    }
    for (const auto& [pair, slot] : layout.off_diagonal) {
      const auto i = static_cast<std::size_t>(pair.first);
      const auto j = static_cast<std::size_t>(pair.second);
      ineq.add(base + svec_index(order, j, i), slot, -r2);
      ineq.add(base + svec_index(order, n + j, n + i), slot, -r2);
      ineq.add(base + svec_index(order, n + i, j), slot + 1, -r2);
      ineq.add(base + svec_index(order, n + j, i), slot + 1, r2);
    }
    h.insert(h.end(), svec_size(order), 0.0);
    conic.cones.psd.push_back(order);
  }
  conic.G.resize(static_cast<Eigen::Index>(h.size()), static_cast<Eigen::Index>(layout.size));
  conic.G.setFromTriplets(g.begin(), g.end());
  conic.h = Eigen::Map<const Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
  conic.check();
  return out;
}

}  // namespace

const char* to_string(RelaxationKind kind) { return kind == RelaxationKind::socr ? "socr" : "sdr"; }

Complex PartialMatrix::operator()(int i, int j) const {
  if (i == j) {
    return diagonal(i);
  }
  const auto it = upper.find({std::min(i, j), std::max(i, j)});
  if (it == upper.end()) {
    return {0.0, 0.0};
  }
  return i < j ? it->second : std::conj(it->second);
}

PartialMatrix PartialMatrix::from_vector(const Eigen::VectorXcd& v,
                                         const SparsityPattern& pattern) {
  PartialMatrix out;
  out.diagonal = v.cwiseAbs2();
  for (const auto& [i, j] : pattern.upper_pairs()) {
    out.upper[{i, j}] = v(i) * std::conj(v(j));
  }
  return out;
}

Relaxation build_socr(const QcqpProblem& problem) { return build(problem, RelaxationKind::socr); }

Relaxation build_sdr(const QcqpProblem& problem, std::size_t limit) {
  if (problem.dims.buses > limit) {
    throw Error("dense SDR size limit exceeded: " + std::to_string(problem.dims.buses) +
                " buses > " + std::to_string(limit));
  }
  return build(problem, RelaxationKind::sdr);
}

Eigen::Vector4d psd2x2_to_soc(double a, double b, Complex c) {
  return {a + b, 2.0 * c.real(), 2.0 * c.imag(), a - b};
}

bool in_soc(const Eigen::Ref<const Eigen::VectorXd>& u, double tol) {
  return u.tail(u.size() - 1).norm() <= u(0) + tol;
}

Eigen::MatrixXd hermitian_embed(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("hermitian_embed: matrix is not square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
    throw ParameterError("hermitian_embed: matrix is not Hermitian");
  }
  const auto n = m.rows();
  Eigen::MatrixXd out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  out.bottomRightCorner(n, n) = m.real();
  return out;
}

Eigen::VectorXd lift_point(const Relaxation& relaxation, const QcqpProblem& problem,
                           const Eigen::VectorXcd& v, const Eigen::VectorXd& f,
                           const Eigen::VectorXcd& s) {
  const auto& layout = relaxation.layout;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.size));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    x(static_cast<Eigen::Index>(layout.diagonal) + i) = std::norm(v(i));
  }
  for (const auto& [pair, slot] : layout.off_diagonal) {
    const Complex vij = v(pair.first) * std::conj(v(pair.second));
    x(static_cast<Eigen::Index>(slot)) = vij.real();
    x(static_cast<Eigen::Index>(slot) + 1) = vij.imag();
  }
  if (f.size() > 0) {
    x.segment(static_cast<Eigen::Index>(layout.converter), f.size()) = f;
  }
  for (std::size_t j = 0; j < problem.injectors.size(); ++j) {
    const Complex sj = s(static_cast<Eigen::Index>(j));
    x(static_cast<Eigen::Index>(layout.injector + 2 * j)) = sj.real();
    x(static_cast<Eigen::Index>(layout.injector + 2 * j + 1)) = sj.imag();
    const auto& inj = problem.injectors[j];
    auto top = [](const std::vector<Segment>& segs, double value) {
      double out = -std::numeric_limits<double>::infinity();
      for (const auto& seg : segs) out = std::max(out, seg.slope * value + seg.intercept);
      return out;
    };
    if (layout.epigraph_p[j] >= 0) x(layout.epigraph_p[j]) = top(inj.cost_p, sj.real());
    if (layout.epigraph_q[j] >= 0) x(layout.epigraph_q[j]) = top(inj.cost_q, sj.imag());
  }
  return x;
}

PartialMatrix extract_partial(const Relaxation& relaxation, const SparsityPattern& pattern,
                              const Eigen::VectorXd& x) {
  const auto& layout = relaxation.layout;
  PartialMatrix out;
  out.diagonal = x.segment(static_cast<Eigen::Index>(layout.diagonal),
                           static_cast<Eigen::Index>(relaxation.buses));
  for (const auto& p : pattern.upper_pairs()) {
    const auto it = layout.off_diagonal.find(p);
    if (it == layout.off_diagonal.end()) {
      throw DimensionError("extract_partial: pattern pair missing from the relaxation");
    }
    const auto slot = static_cast<Eigen::Index>(it->second);
    out.upper[p] = {x(slot), x(slot + 1)};
  }
  return out;
}

Eigen::VectorXd extract_converter(const Relaxation& relaxation, const QcqpProblem& problem,
                                  const Eigen::VectorXd& x) {
  return x.segment(static_cast<Eigen::Index>(relaxation.layout.converter),
                   static_cast<Eigen::Index>(problem.converter_slots()));
}

Eigen::VectorXcd extract_injection(const Relaxation& relaxation, const QcqpProblem& problem,
                                   const Eigen::VectorXd& x) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(problem.injectors.size()));
  for (std::size_t j = 0; j < problem.injectors.size(); ++j) {
    const auto base = static_cast<Eigen::Index>(relaxation.layout.injector + 2 * j);
    out(static_cast<Eigen::Index>(j)) = {x(base), x(base + 1)};
  }
  return out;
}

}  // namespace hyopf
