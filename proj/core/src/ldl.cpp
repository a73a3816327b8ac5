#include "ldl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/OrderingMethods>

#include "hyopf/grid.hpp"

namespace hyopf::detail {

void QuasiDefiniteLdl::analyze(const Eigen::SparseMatrix<double>& upper) {
  n_ = upper.rows();
  const auto n = static_cast<int>(n_);
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> pinv;
  Eigen::AMDOrdering<int> amd;
  amd(upper, pinv);
  perm_.assign(pinv.indices().data(), pinv.indices().data() + n);
  iperm_.assign(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < n; ++k) {
    iperm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(k)])] = k;
  }

  // Pattern of the permuted upper triangle.
  struct Entry {
    int row;
    int col;
    int source;
  };
  std::vector<Entry> entries;
  int source = 0;
  for (int col = 0; col < upper.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(upper, col); it; ++it, ++source) {
      const int a = iperm_[static_cast<std::size_t>(it.row())];
      const int b = iperm_[static_cast<std::size_t>(col)];
      entries.push_back({std::min(a, b), std::max(a, b), source});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return x.col != y.col ? x.col < y.col : x.row < y.row;
  });
  ap_.assign(static_cast<std::size_t>(n) + 1, 0);
  ai_.resize(entries.size());
  ax_.assign(entries.size(), 0.0);
  map_.assign(entries.size(), 0);
  for (std::size_t p = 0; p < entries.size(); ++p) {
    ++ap_[static_cast<std::size_t>(entries[p].col) + 1];
    ai_[p] = entries[p].row;
    map_[static_cast<std::size_t>(entries[p].source)] = static_cast<int>(p);
  }
  std::partial_sum(ap_.begin(), ap_.end(), ap_.begin());

  // Elimination tree and column counts.
  etree_.assign(static_cast<std::size_t>(n), -1);
  lnz_.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> work(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < n; ++j) {
    work[static_cast<std::size_t>(j)] = j;
    for (int p = ap_[static_cast<std::size_t>(j)]; p < ap_[static_cast<std::size_t>(j) + 1]; ++p) {
      int i = ai_[static_cast<std::size_t>(p)];
      while (work[static_cast<std::size_t>(i)] != j) {
        if (etree_[static_cast<std::size_t>(i)] == -1) {
          etree_[static_cast<std::size_t>(i)] = j;
        }
        ++lnz_[static_cast<std::size_t>(i)];
        work[static_cast<std::size_t>(i)] = j;
        i = etree_[static_cast<std::size_t>(i)];
      }
    }
  }
  lp_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    lp_[static_cast<std::size_t>(i) + 1] = lp_[static_cast<std::size_t>(i)] + lnz_[static_cast<std::size_t>(i)];
  }
  li_.assign(static_cast<std::size_t>(lp_.back()), 0);
  lx_.assign(static_cast<std::size_t>(lp_.back()), 0.0);
  d_.assign(static_cast<std::size_t>(n), 0.0);
  dinv_.assign(static_cast<std::size_t>(n), 0.0);
}

int QuasiDefiniteLdl::factor(const Eigen::SparseMatrix<double>& upper, const Eigen::VectorXd& signs,
                             double eps, double delta) {
  const auto n = static_cast<std::size_t>(n_);
  if (static_cast<std::size_t>(upper.nonZeros()) != map_.size()) {
    throw Error("ldl: matrix pattern changed after analysis");
  }
  int source = 0;
  for (int col = 0; col < upper.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(upper, col); it; ++it, ++source) {
      ax_[static_cast<std::size_t>(map_[static_cast<std::size_t>(source)])] = it.value();
    }
  }

  std::vector<double> y(n, 0.0);
  std::vector<char> marked(n, 0);
  std::vector<int> y_idx(n, 0);
  std::vector<int> buffer(n, 0);
  std::vector<int> next_space(lp_.begin(), lp_.end() - 1);
  int regularized = 0;

  for (std::size_t k = 0; k < n; ++k) {
    int nnz_y = 0;
    d_[k] = 0.0;
    for (int p = ap_[k]; p < ap_[k + 1]; ++p) {
      const auto b = static_cast<std::size_t>(ai_[static_cast<std::size_t>(p)]);
      if (b == k) {
        d_[k] = ax_[static_cast<std::size_t>(p)];
        continue;
      }
      y[b] = ax_[static_cast<std::size_t>(p)];
      if (marked[b]) {
        continue;
      }
      marked[b] = 1;
      int nnz_e = 0;
      buffer[static_cast<std::size_t>(nnz_e++)] = static_cast<int>(b);
      int next = etree_[b];
      while (next != -1 && static_cast<std::size_t>(next) < k) {
        if (marked[static_cast<std::size_t>(next)]) {
          break;
        }
        marked[static_cast<std::size_t>(next)] = 1;
        buffer[static_cast<std::size_t>(nnz_e++)] = next;
        next = etree_[static_cast<std::size_t>(next)];
      }
      while (nnz_e > 0) {
        y_idx[static_cast<std::size_t>(nnz_y++)] = buffer[static_cast<std::size_t>(--nnz_e)];
      }
    }
    for (int i = nnz_y - 1; i >= 0; --i) {
      const auto c = static_cast<std::size_t>(y_idx[static_cast<std::size_t>(i)]);
      const int end = next_space[c];
      const double yc = y[c];
      for (int j = lp_[c]; j < end; ++j) {
        y[static_cast<std::size_t>(li_[static_cast<std::size_t>(j)])] -= lx_[static_cast<std::size_t>(j)] * yc;
      }
      li_[static_cast<std::size_t>(end)] = static_cast<int>(k);
      lx_[static_cast<std::size_t>(end)] = yc * dinv_[c];
      d_[k] -= yc * lx_[static_cast<std::size_t>(end)];
      ++next_space[c];
      y[c] = 0.0;
      marked[c] = 0;
    }
    const double sign = signs(perm_[k]);
    if (!std::isfinite(d_[k])) {
      return -1;
    }
    if (sign * d_[k] <= eps) {
      d_[k] = sign * delta;
      ++regularized;
    }
    dinv_[k] = 1.0 / d_[k];
  }
  return regularized;
}

void QuasiDefiniteLdl::solve(Eigen::VectorXd& b) const {
  const auto n = static_cast<std::size_t>(n_);
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = b(perm_[k]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = lp_[i]; j < lp_[i + 1]; ++j) {
      x[static_cast<std::size_t>(li_[static_cast<std::size_t>(j)])] -= lx_[static_cast<std::size_t>(j)] * x[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    x[i] *= dinv_[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (int j = lp_[i]; j < lp_[i + 1]; ++j) {
      x[i] -= lx_[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(li_[static_cast<std::size_t>(j)])];
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    b(perm_[k]) = x[k];
  }
}

}  // namespace hyopf::detail
