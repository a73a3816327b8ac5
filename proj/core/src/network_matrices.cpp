#include "hyopf/network_matrices.hpp"

#include <cmath>

namespace hyopf {
namespace {

using Triplet = Eigen::Triplet<Complex>;

HermitianForm form_from(std::size_t n, const std::vector<Triplet>& triplets, double offset,
                        Sense sense = Sense::less_equal) {
  HermitianForm form;
  form.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  form.matrix.setFromTriplets(triplets.begin(), triplets.end());
  form.matrix.prune(Complex{0.0, 0.0});
  form.offset = offset;
  form.sense = sense;
  return form;
}

}  // namespace

Eigen::Index HermitianForm::dimension() const {
  if (factor) {
    return factor->size();
  }
  return matrix.rows();
}

double HermitianForm::quadratic_value(const Eigen::VectorXcd& v) const {
  if (factor) {
    Complex current{0.0, 0.0};
    for (Eigen::SparseVector<Complex>::InnerIterator it(*factor); it; ++it) {
      current += it.value() * v(it.index());
    }
    return std::norm(current);
  }
  Complex acc{0.0, 0.0};
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (SparseComplex::InnerIterator it(matrix, col); it; ++it) {
      acc += std::conj(v(it.row())) * it.value() * v(col);
    }
  }
  return acc.real();
}

double HermitianForm::value(const Eigen::VectorXcd& v, const Eigen::VectorXd& f) const {
  double out = quadratic_value(v);
  if (f.size() > 0) {
    for (Eigen::SparseVector<double>::InnerIterator it(converter); it; ++it) {
      out += it.value() * f(it.index());
    }
  }
  return out;
}

std::vector<HermitianEntry> HermitianForm::entries() const {
  std::vector<HermitianEntry> out;
  if (factor) {
    for (Eigen::SparseVector<Complex>::InnerIterator a(*factor); a; ++a) {
      for (Eigen::SparseVector<Complex>::InnerIterator b(*factor); b; ++b) {
        out.push_back({static_cast<int>(a.index()), static_cast<int>(b.index()),
                       std::conj(a.value()) * b.value()});
      }
    }
    return out;
  }
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (SparseComplex::InnerIterator it(matrix, col); it; ++it) {
      out.push_back({static_cast<int>(it.row()), col, it.value()});
    }
  }
  return out;
}

Eigen::MatrixXcd HermitianForm::dense() const {
  const auto n = dimension();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : entries()) {
    out(e.row, e.col) += e.value;
  }
  return out;
}

std::vector<std::pair<int, int>> SparsityPattern::upper_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [i, j] : entries) {
    if (i < j) {
      out.emplace_back(i, j);
    }
  }
  return out;
}

Eigen::Matrix2cd branch_two_port(const Branch& branch) {
  if (branch.rho_src == Complex{} || branch.rho_dst == Complex{}) {
    throw ParameterError("branch " + std::to_string(branch.id) + ": zero voltage ratio");
  }
  const Complex ybar = branch.y_series;
  const Complex rs = branch.rho_src;
  const Complex rd = branch.rho_dst;
  Eigen::Matrix2cd block;
  block(0, 0) = std::norm(rs) * (ybar + branch.y_src);
  block(0, 1) = -std::conj(rs) * rd * ybar;
  block(1, 0) = -std::conj(rd) * rs * ybar;
  block(1, 1) = std::norm(rd) * (ybar + branch.y_dst);
  return block;
}

AdmittanceSet bus_admittance(const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.buses.size());
  const auto e = static_cast<Eigen::Index>(grid.branches.size());
  std::vector<Triplet> bus;
  std::vector<Triplet> src;
  std::vector<Triplet> dst;
  for (Eigen::Index k = 0; k < e; ++k) {
    const auto& br = grid.branches[static_cast<std::size_t>(k)];
    const auto block = branch_two_port(br);
    const int s = br.src - 1;
    const int d = br.dst - 1;
    src.emplace_back(k, s, block(0, 0));
    src.emplace_back(k, d, block(0, 1));
    dst.emplace_back(k, s, block(1, 0));
    dst.emplace_back(k, d, block(1, 1));
    bus.emplace_back(s, s, block(0, 0));
    bus.emplace_back(s, d, block(0, 1));
    bus.emplace_back(d, s, block(1, 0));
    bus.emplace_back(d, d, block(1, 1));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& b = grid.buses[static_cast<std::size_t>(i)];
    if (b.shunt != Complex{}) {
      bus.emplace_back(i, i, b.shunt);
    }
  }
  AdmittanceSet out;
  out.bus.resize(n, n);
  out.bus.setFromTriplets(bus.begin(), bus.end());
  out.src.resize(e, n);
  out.src.setFromTriplets(src.begin(), src.end());
  out.dst.resize(e, n);
  out.dst.setFromTriplets(dst.begin(), dst.end());
  return out;
}

std::pair<HermitianForm, HermitianForm> balance_matrices(const AdmittanceSet& admittance,
                                                         std::size_t n) {
  const auto size = static_cast<std::size_t>(admittance.bus.rows());
  if (n >= size) {
    throw DimensionError("balance_matrices: bus index " + std::to_string(n) + " out of range");
  }
  // A = Y^H e_n e_n^T has column n equal to conj(row n of Y).
  const SparseComplex row = admittance.bus.row(static_cast<Eigen::Index>(n));
  const Complex half_inv_i = 1.0 / Complex{0.0, 2.0};
  std::vector<Triplet> p;
  std::vector<Triplet> q;
  for (int col = 0; col < row.outerSize(); ++col) {
    for (SparseComplex::InnerIterator it(row, col); it; ++it) {
      const int i = col;
      const Complex a = std::conj(it.value());  // A(i, n)
      // P = (A + A^H) / 2, Q = (A - A^H) / (2i)
      p.emplace_back(i, static_cast<int>(n), 0.5 * a);
      p.emplace_back(static_cast<int>(n), i, 0.5 * std::conj(a));
      q.emplace_back(i, static_cast<int>(n), a * half_inv_i);
      q.emplace_back(static_cast<int>(n), i, -std::conj(a) * half_inv_i);
    }
  }
  return {form_from(size, p, 0.0, Sense::equal), form_from(size, q, 0.0, Sense::equal)};
}

std::pair<HermitianForm, HermitianForm> ampacity_matrices(const AdmittanceSet& admittance,
                                                          std::size_t k, double i_max_src,
                                                          double i_max_dst) {
  if (!(i_max_src > 0.0 && i_max_dst > 0.0)) {
    throw ParameterError("ampacity limits must be positive");
  }
  auto make = [&](const SparseComplex& map, double limit) {
    HermitianForm form;
    Eigen::SparseVector<Complex> a(map.cols());
    const SparseComplex row = map.row(static_cast<Eigen::Index>(k));
    for (int col = 0; col < row.outerSize(); ++col) {
      for (SparseComplex::InnerIterator it(row, col); it; ++it) {
        a.coeffRef(col) += it.value();
      }
    }
    form.factor = std::move(a);
    form.offset = limit * limit;
    form.sense = Sense::less_equal;
    return form;
  };
  return {make(admittance.src, i_max_src), make(admittance.dst, i_max_dst)};
}

std::pair<HermitianForm, HermitianForm> drop_matrices(std::size_t bus_count, std::size_t src,
                                                      std::size_t dst, double nu_lb,
                                                      double nu_ub) {
  if (!(nu_lb >= -1.0 && nu_lb < nu_ub)) {
    throw ParameterError("voltage drop bounds must satisfy -1 <= lb < ub");
  }
  const int s = static_cast<int>(src);
  const int d = static_cast<int>(dst);
  const double lo = (1.0 + nu_lb) * (1.0 + nu_lb);
  const double hi = (1.0 + nu_ub) * (1.0 + nu_ub);
  // lower: (1 + nu_lb)^2 |V_src|^2 - |V_dst|^2 <= 0
  // upper: |V_dst|^2 - (1 + nu_ub)^2 |V_src|^2 <= 0
  std::vector<Triplet> lower{{s, s, lo}, {d, d, -1.0}};
  std::vector<Triplet> upper{{d, d, 1.0}, {s, s, -hi}};
  return {form_from(bus_count, lower, 0.0), form_from(bus_count, upper, 0.0)};
}

AngleForms angle_matrices(std::size_t bus_count, std::size_t src, std::size_t dst,
                          std::optional<std::pair<double, double>> bounds) {
  const int s = static_cast<int>(src);
  const int d = static_cast<int>(dst);
  // With K = e_src e_dst^T: v^H K v = conj(V_src) V_dst, so
  //   (K + K^H) / 2  -> Re(V_src conj V_dst)
  //   (K - K^H) / 2i -> -Im(V_src conj V_dst)
  AngleForms out;
  out.real_part = form_from(bus_count, {{s, d, -1.0}, {d, s, -1.0}}, 0.0);
  if (bounds) {
    const auto [lb, ub] = *bounds;
    constexpr double half_pi = 1.5707963267948966;
    if (!(lb > -half_pi && lb < ub && ub < half_pi)) {
      throw ParameterError("angle bounds must satisfy -pi/2 < lb < ub < pi/2");
    }
    const Complex half_i{0.0, 0.5};
    // Im(V_s conj V_d) - tan(ub) Re(V_s conj V_d) <= 0
    const double tu = std::tan(ub);
    out.upper = form_from(bus_count, {{s, d, half_i - 0.5 * tu}, {d, s, -half_i - 0.5 * tu}},
                          0.0);
    // tan(lb) Re(V_s conj V_d) - Im(V_s conj V_d) <= 0
    const double tl = std::tan(lb);
    out.lower = form_from(bus_count, {{s, d, 0.5 * tl - half_i}, {d, s, 0.5 * tl + half_i}},
                          0.0);
  }
  return out;
}

std::pair<HermitianForm, HermitianForm> voltage_matrices(std::size_t bus_count, std::size_t n,
                                                         double v_min, double v_max) {
  const int i = static_cast<int>(n);
  return {form_from(bus_count, {{i, i, -1.0}}, -v_min * v_min),
          form_from(bus_count, {{i, i, 1.0}}, v_max * v_max)};
}

double LossCoefficients::value(const Eigen::VectorXcd& v, const Eigen::VectorXd& f) const {
  double out = matrix.quadratic_value(v);
  if (f.size() > 0) {
    out += converter.dot(f);
  }
  return out;
}

LossCoefficients loss_coefficients(const Grid& grid, const AdmittanceSet& admittance) {
  LossCoefficients out;
  const SparseComplex adjoint = admittance.bus.adjoint();
  out.matrix.matrix = 0.5 * (admittance.bus + adjoint);
  out.matrix.matrix.prune(Complex{0.0, 0.0});
  out.matrix.sense = Sense::equal;
  out.converter = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(4 * grid.converters.size()));
  for (std::size_t l = 0; l < grid.converters.size(); ++l) {
    out.converter(static_cast<Eigen::Index>(4 * l)) = grid.converters[l].loss_fwd;
    out.converter(static_cast<Eigen::Index>(4 * l + 1)) = grid.converters[l].loss_bwd;
  }
  return out;
}

SparsityPattern sparsity_pattern(const Grid& grid) {
  SparsityPattern out;
  for (const auto& br : grid.branches) {
    const int s = br.src - 1;
    const int d = br.dst - 1;
    out.entries.insert({s, s});
    out.entries.insert({d, d});
    out.entries.insert({s, d});
    out.entries.insert({d, s});
  }
  return out;
}

}  // namespace hyopf
