#include "hyopf/conic_problem.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hyopf/grid.hpp"

namespace hyopf {

std::size_t ConeDims::size() const {
  std::size_t out = nonneg + std::accumulate(soc.begin(), soc.end(), std::size_t{0});
  for (auto order : psd) {
    out += svec_size(order);
  }
  return out;
}

std::size_t ConeDims::degree() const {
  return nonneg + soc.size() + std::accumulate(psd.begin(), psd.end(), std::size_t{0});
}

void ConicProblem::check() const {
  const auto n = c.size();
  if (A.cols() != n || G.cols() != n) {
    throw DimensionError("conic problem: A and G need " + std::to_string(n) + " columns");
  }
  if (A.rows() != b.size()) {
    throw DimensionError("conic problem: A and b row counts differ");
  }
  if (G.rows() != h.size()) {
    throw DimensionError("conic problem: G and h row counts differ");
  }
  if (static_cast<std::size_t>(h.size()) != cones.size()) {
    throw DimensionError("conic problem: cone sizes do not add up to the rows of G");
  }
  for (auto k : cones.soc) {
    if (k < 1) throw DimensionError("conic problem: empty second-order cone");
  }
  for (auto k : cones.psd) {
    if (k < 1) throw DimensionError("conic problem: empty PSD cone");
  }
}

std::size_t svec_index(std::size_t order, std::size_t i, std::size_t j) {
  return j * order - j * (j - 1) / 2 + (i - j);
}

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
  const auto order = static_cast<std::size_t>(m.rows());
  Eigen::VectorXd out(static_cast<Eigen::Index>(svec_size(order)));
  const double r2 = std::sqrt(2.0);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    out(k++) = m(j, j);
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      out(k++) = r2 * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return out;
}

Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, std::size_t order) {
  const auto n = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd out(n, n);
  const double r2 = std::sqrt(2.0);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j, j) = v(k++);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      out(i, j) = v(k) / r2;
      out(j, i) = out(i, j);
      ++k;
    }
  }
  return out;
}

}  // namespace hyopf
