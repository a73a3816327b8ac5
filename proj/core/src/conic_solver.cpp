#include "hyopf/conic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cones.hpp"
#include "hyopf/grid.hpp"
#include "ldl.hpp"

namespace hyopf {
namespace {

using detail::Scaling;
using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double scale_of(const Eigen::VectorXd& v) { return std::max(1.0, v.norm()); }

// Removes empty rows and columns and turns opposite nonnegative row pairs
// a x <= h, -a x <= -h into equalities.
struct Presolve {
  ConicProblem reduced;
  std::vector<int> columns;      // reduced column -> original column
  std::vector<int> a_rows;       // reduced equality row -> original A row, or -1 for pairs
  std::vector<std::pair<int, int>> pairs;  // G row pair per extra equality
  std::vector<int> g_rows;       // reduced G row -> original G row
  std::optional<SolverStatus> trivial;
  std::string message;
};

using RowKey = std::vector<std::pair<int, double>>;

RowKey row_key(const RowMajor& m, int row, double sign) {
  RowKey key;
  for (RowMajor::InnerIterator it(m, row); it; ++it) {
    if (it.value() != 0.0) {
      key.emplace_back(static_cast<int>(it.col()), sign * it.value());
    }
  }
  return key;
}

Presolve presolve(const ConicProblem& p) {
  Presolve out;
  const RowMajor a = p.A;
  const RowMajor g = p.G;
  const auto n = static_cast<int>(p.c.size());

  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (const auto* m : {&p.A, &p.G}) {
    for (int col = 0; col < m->outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(*m, col); it; ++it) {
        if (it.value() != 0.0) used[static_cast<std::size_t>(col)] = 1;
      }
    }
  }
  std::vector<int> new_col(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < n; ++j) {
    if (used[static_cast<std::size_t>(j)]) {
      new_col[static_cast<std::size_t>(j)] = static_cast<int>(out.columns.size());
      out.columns.push_back(j);
    } else if (p.c(j) != 0.0) {
      out.trivial = SolverStatus::unbounded;
      out.message = "variable " + std::to_string(j) + " is unconstrained with nonzero cost";
      return out;
    }
  }

  std::vector<Triplet> at;
  std::vector<double> b;
  for (int i = 0; i < a.rows(); ++i) {
    const auto key = row_key(a, i, 1.0);
    if (key.empty()) {
      if (p.b(i) != 0.0) {
        out.trivial = SolverStatus::infeasible;
        out.message = "empty equality row " + std::to_string(i) + " with nonzero right-hand side";
        return out;
      }
      continue;
    }
    const int row = static_cast<int>(b.size());
    for (const auto& [col, v] : key) at.emplace_back(row, new_col[static_cast<std::size_t>(col)], v);
    b.push_back(p.b(i));
    out.a_rows.push_back(i);
  }

  // Nonnegative rows: drop empty ones, pair opposite ones.
  const auto nonneg = static_cast<int>(p.cones.nonneg);
  std::vector<char> drop(static_cast<std::size_t>(nonneg), 0);
  std::map<RowKey, std::vector<int>> open;
  for (int i = 0; i < nonneg; ++i) {
    auto key = row_key(g, i, 1.0);
    if (key.empty()) {
      if (p.h(i) < 0.0) {
        out.trivial = SolverStatus::infeasible;
        out.message = "empty inequality row " + std::to_string(i) + " with negative right-hand side";
        return out;
      }
      drop[static_cast<std::size_t>(i)] = 1;
      continue;
    }
    auto it = open.find(row_key(g, i, -1.0));
    if (it != open.end()) {
      auto& rows = it->second;
      const auto match = std::find_if(rows.begin(), rows.end(), [&](int r) { return p.h(r) == -p.h(i); });
      if (match != rows.end()) {
        const int first = *match;
        rows.erase(match);
        drop[static_cast<std::size_t>(first)] = 1;
        drop[static_cast<std::size_t>(i)] = 1;
        const int row = static_cast<int>(b.size());
        for (const auto& [col, v] : row_key(g, first, 1.0)) {
          at.emplace_back(row, new_col[static_cast<std::size_t>(col)], v);
        }
        b.push_back(p.h(first));
        out.a_rows.push_back(-1);
        out.pairs.emplace_back(first, i);
        continue;
      }
    }
    open[std::move(key)].push_back(i);
  }

  std::vector<Triplet> gt;
  std::vector<double> h;
  for (int i = 0; i < g.rows(); ++i) {
    if (i < nonneg && drop[static_cast<std::size_t>(i)]) continue;
    const int row = static_cast<int>(h.size());
    for (RowMajor::InnerIterator it(g, i); it; ++it) {
      if (it.value() != 0.0) gt.emplace_back(row, new_col[static_cast<std::size_t>(it.col())], it.value());
    }
    h.push_back(p.h(i));
    out.g_rows.push_back(i);
  }

  auto& r = out.reduced;
  const auto nr = static_cast<Eigen::Index>(out.columns.size());
  r.c.resize(nr);
  for (Eigen::Index j = 0; j < nr; ++j) r.c(j) = p.c(out.columns[static_cast<std::size_t>(j)]);
  r.A.resize(static_cast<Eigen::Index>(b.size()), nr);
  r.A.setFromTriplets(at.begin(), at.end());
  r.b = Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  r.G.resize(static_cast<Eigen::Index>(h.size()), nr);
  r.G.setFromTriplets(gt.begin(), gt.end());
  r.h = Eigen::Map<Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
  r.cones = p.cones;
  r.cones.nonneg = static_cast<std::size_t>(
      std::count_if(out.g_rows.begin(), out.g_rows.end(), [&](int i) { return i < nonneg; }));
  r.offset = p.offset;
  return out;
}

// Interior-point iterations on a presolved problem; y is the internal
// multiplier with c + A^T y + G^T z = 0.
class Engine {
 public:
  Engine(const ConicProblem& p, const SolverConfig& config)
      : p_(p), config_(config), n_(p.c.size()), m_eq_(p.b.size()), m_(p.h.size()) {
    at_ = p_.A.transpose();
    gt_ = p_.G.transpose();
    signs_.resize(n_ + m_eq_ + m_);
    signs_.head(n_).setOnes();
    signs_.tail(m_eq_ + m_).setConstant(-1.0);
    delta_ = config.regularization;
  }

  struct Result {
    Eigen::VectorXd x, y, z, s;
    SolverStatus status = SolverStatus::numerical_failure;
    int iterations = 0;
    std::string message;
  };

  Result run() {
    Result res;
    x_ = Eigen::VectorXd::Zero(n_);
    y_ = Eigen::VectorXd::Zero(m_eq_);
    z_ = Eigen::VectorXd::Zero(m_);
    s_ = Eigen::VectorXd::Zero(m_);
    const auto e = detail::identity(p_.cones);

    // Starting point from two least-squares problems with W = I.
    hessian_.nonneg = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(p_.cones.nonneg));
    hessian_.blocks.clear();
    for (auto k : p_.cones.soc) {
      hessian_.blocks.push_back(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
    }
    for (auto k : p_.cones.psd) {
      const auto sz = static_cast<Eigen::Index>(svec_size(k));
      hessian_.blocks.push_back(Eigen::MatrixXd::Identity(sz, sz));
    }
    if (!factorize(true)) {
      res.message = "factorization failed at the starting point";
      return res;
    }
    Eigen::VectorXd dx, dy, dz;
    kkt_solve(Eigen::VectorXd::Zero(n_), p_.b, p_.h, dx, dy, dz);
    x_ = dx;
    Eigen::VectorXd s_hat = -dz;
    kkt_solve(-p_.c, Eigen::VectorXd::Zero(m_eq_), Eigen::VectorXd::Zero(m_), dx, dy, dz);
    y_ = dy;
    Eigen::VectorXd z_hat = dz;
    if (m_ > 0) {
      const double ms = detail::interior_margin(p_.cones, s_hat);
      s_ = ms > 0.0 ? s_hat : Eigen::VectorXd(s_hat + (1.0 - ms) * e);
      const double mz = detail::interior_margin(p_.cones, z_hat);
      z_ = mz > 0.0 ? z_hat : Eigen::VectorXd(z_hat + (1.0 - mz) * e);
    }

    const double bscale = scale_of(p_.b);
    const double hscale = scale_of(p_.h);
    const double cscale = scale_of(p_.c);
    const double degree = std::max<double>(1.0, static_cast<double>(p_.cones.degree()));

    for (int it = 0;; ++it) {
      res.iterations = it;
      const Eigen::VectorXd rx = p_.c + at_ * y_ + gt_ * z_;
      const Eigen::VectorXd ry = p_.A * x_ - p_.b;
      const Eigen::VectorXd rz = p_.G * x_ + s_ - p_.h;
      const double gap = s_.dot(z_);
      const double pcost = p_.c.dot(x_);
      const double pres = std::max(ry.norm() / bscale, rz.norm() / hscale);
      const double dres = rx.norm() / cscale;
      const double rgap = std::abs(gap) / std::max(1.0, std::abs(pcost));
      // Large multipliers turn small residuals into objective errors, so after
      // the residual test passes the iteration continues for a few steps until
      // the primal and dual objectives agree, keeping the best iterate.
      const double dcost = -(p_.b.dot(y_) + p_.h.dot(z_));
      const double ogap = std::abs(pcost - dcost) / std::max(1.0, std::abs(pcost));
      if (pres <= config_.feasibility_tol && dres <= config_.feasibility_tol && rgap <= config_.gap_tol) {
        if (ogap <= config_.gap_tol) {
          res.status = SolverStatus::optimal;
          break;
        }
        if (!best_ || ogap < best_->ogap) best_ = Snapshot{x_, y_, z_, s_, it, ogap};
        if (it - first_accept(it) >= kPolishSteps) return restore_best(res);
      }
      const double dual_value = dcost;
      if (dual_value > 0.0 && (at_ * y_ + gt_ * z_).norm() / dual_value <= config_.feasibility_tol) {
        res.status = SolverStatus::infeasible;
        y_ /= dual_value;
        z_ /= dual_value;
        res.message = "primal infeasibility certificate found";
        break;
      }
      if (pcost < 0.0 &&
          std::max((p_.A * x_).norm(), (p_.G * x_ + s_).norm()) / -pcost <= config_.feasibility_tol) {
        res.status = SolverStatus::unbounded;
        x_ /= -pcost;
        s_ /= -pcost;
        res.message = "dual infeasibility certificate found";
        break;
      }
      if (it >= config_.max_iterations) {
        if (best_) return restore_best(res);
        res.status = SolverStatus::iteration_limit;
        res.message = "iteration limit reached";
        break;
      }

      Scaling w;
      try {
        w = detail::nt_scaling(p_.cones, s_, z_);
      } catch (const Error& err) {
        res.message = err.what();
        return fail(res);
      }
      hessian_ = detail::scaling_hessian(p_.cones, w);
      if (!factorize(false)) {
        res.message = "Newton system factorization failed";
        return fail(res);
      }

      const double mu = gap / degree;
      const Eigen::VectorXd& lambda = w.lambda;

      // Predictor: u = lambda \ (-lambda o lambda) = -lambda.
      Eigen::VectorXd u = -lambda;
      Eigen::VectorXd dxa, dya, dza, dsa;
      newton(w, rx, ry, rz, u, dxa, dya, dza, dsa);
      const double alpha_aff = std::min(1.0, std::min(detail::max_step(p_.cones, s_, dsa),
                                                      detail::max_step(p_.cones, z_, dza)));
      const double sigma = std::pow(std::max(0.0, 1.0 - alpha_aff), 3.0);

      // Corrector with the second-order term and centering.
      const Eigen::VectorXd ds_scaled = detail::apply_scaling(p_.cones, w, dsa, true, true);
      const Eigen::VectorXd dz_scaled = detail::apply_scaling(p_.cones, w, dza, false, false);
      Eigen::VectorXd target = -detail::jordan(p_.cones, lambda, lambda) -
                               detail::jordan(p_.cones, ds_scaled, dz_scaled) + sigma * mu * e;
      u = detail::jordan_div(p_.cones, w, target);
      Eigen::VectorXd dxc, dyc, dzc, dsc;
      newton(w, rx, ry, rz, u, dxc, dyc, dzc, dsc);
      if (!dxc.allFinite() || !dzc.allFinite() || !dsc.allFinite() || !dyc.allFinite()) {
        res.message = "non-finite Newton direction";
        return fail(res);
      }
      double alpha = std::min(detail::max_step(p_.cones, s_, dsc), detail::max_step(p_.cones, z_, dzc));
      alpha = std::min(1.0, config_.step_fraction * alpha);
      if (!(alpha > 1e-14)) {
        res.message = "step length collapsed";
        return fail(res);
      }
      x_ += alpha * dxc;
      y_ += alpha * dyc;
      z_ += alpha * dzc;
      s_ += alpha * dsc;
    }
    return finish(res, res.status);
  }

 private:
  static constexpr int kPolishSteps = 10;

  struct Snapshot {
    Eigen::VectorXd x, y, z, s;
    int iteration = 0;
    double ogap = 0.0;
  };

  int first_accept(int it) {
    if (first_accept_ < 0) first_accept_ = it;
    return first_accept_;
  }

  Result restore_best(Result& res) {
    x_ = best_->x;
    y_ = best_->y;
    z_ = best_->z;
    s_ = best_->s;
    res.iterations = best_->iteration;
    res.message = "objective gap " + std::to_string(best_->ogap) + " above tolerance";
    return finish(res, SolverStatus::optimal);
  }

  Result fail(Result& res) {
    if (best_) return restore_best(res);
    return finish(res, SolverStatus::numerical_failure);
  }

  Result finish(Result& res, SolverStatus status) {
    res.status = status;
    res.x = x_;
    res.y = y_;
    res.z = z_;
    res.s = s_;
    return res;
  }

  // Upper triangle of [[dI, A^T, G^T], [., -dI, 0], [., ., -H - dI]].
  Eigen::SparseMatrix<double> assemble(double delta) const {
    std::vector<Triplet> t;
    const auto n = static_cast<int>(n_);
    const auto me = static_cast<int>(m_eq_);
    for (int j = 0; j < n; ++j) t.emplace_back(j, j, delta);
    for (int col = 0; col < p_.A.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(p_.A, col); it; ++it) {
        t.emplace_back(col, n + static_cast<int>(it.row()), it.value());
      }
    }
    for (int col = 0; col < p_.G.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(p_.G, col); it; ++it) {
        t.emplace_back(col, n + me + static_cast<int>(it.row()), it.value());
      }
    }
    for (int i = 0; i < me; ++i) t.emplace_back(n + i, n + i, -delta);
    const int zb = n + me;
    for (Eigen::Index i = 0; i < hessian_.nonneg.size(); ++i) {
      t.emplace_back(zb + static_cast<int>(i), zb + static_cast<int>(i), -hessian_.nonneg(i) - delta);
    }
    int offset = zb + static_cast<int>(p_.cones.nonneg);
    for (const auto& blk : hessian_.blocks) {
      for (Eigen::Index j = 0; j < blk.cols(); ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
          t.emplace_back(offset + static_cast<int>(i), offset + static_cast<int>(j),
                         -blk(i, j) - (i == j ? delta : 0.0));
        }
      }
      offset += static_cast<int>(blk.rows());
    }
    const auto dim = static_cast<Eigen::Index>(n_ + m_eq_ + m_);
    Eigen::SparseMatrix<double> k(dim, dim);
    k.setFromTriplets(t.begin(), t.end());
    return k;
  }

  // Pivots that need dynamic regularization make refinement unreliable, so
  // the static regularization is raised first (up to 1e-6).
  bool factorize(bool first) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      const auto k = assemble(delta_);
      if (first && attempt == 0) {
        ldl_.analyze(k);
      }
      const int reg = ldl_.factor(k, signs_, 1e-13, 1e-7);
      if (reg == 0 || (reg > 0 && delta_ >= 1e-6)) {
        return true;
      }
      delta_ = std::min(reg < 0 ? delta_ * 100.0 : delta_ * 10.0, 1e-6);
    }
    return false;
  }

  Eigen::VectorXd apply_h(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(v.size());
    const auto nn = hessian_.nonneg.size();
    out.head(nn) = hessian_.nonneg.cwiseProduct(v.head(nn));
    Eigen::Index offset = nn;
    for (const auto& blk : hessian_.blocks) {
      out.segment(offset, blk.rows()) = blk * v.segment(offset, blk.rows());
      offset += blk.rows();
    }
    return out;
  }

  // Solves the unregularized KKT system by refinement around the factorization.
  void kkt_solve(const Eigen::VectorXd& bx, const Eigen::VectorXd& by, const Eigen::VectorXd& bz,
                 Eigen::VectorXd& dx, Eigen::VectorXd& dy, Eigen::VectorXd& dz) const {
    const auto dim = n_ + m_eq_ + m_;
    Eigen::VectorXd rhs(dim);
    rhs << bx, by, bz;
    Eigen::VectorXd sol = rhs;
    ldl_.solve(sol);
    const double scale = 1.0 + rhs.lpNorm<Eigen::Infinity>();
    auto residual = [&](const Eigen::VectorXd& v) {
      const auto x = v.head(n_);
      const auto y = v.segment(n_, m_eq_);
      const auto z = v.tail(m_);
      Eigen::VectorXd r(dim);
      r.head(n_) = bx - at_ * y - gt_ * z;
      r.segment(n_, m_eq_) = by - p_.A * x;
      r.tail(m_) = bz - (p_.G * x - apply_h(z));
      return r;
    };
    Eigen::VectorXd r = residual(sol);
    double norm = r.lpNorm<Eigen::Infinity>();
    for (int step = 0; step < 20 && norm > 1e-15 * scale; ++step) {
      ldl_.solve(r);
      Eigen::VectorXd next = sol + r;
      Eigen::VectorXd next_r = residual(next);
      const double next_norm = next_r.lpNorm<Eigen::Infinity>();
      if (!(next_norm < norm)) {
        break;
      }
      sol = std::move(next);
      r = std::move(next_r);
      norm = next_norm;
    }
    dx = sol.head(n_);
    dy = sol.segment(n_, m_eq_);
    dz = sol.tail(m_);
  }

  void newton(const Scaling& w, const Eigen::VectorXd& rx, const Eigen::VectorXd& ry,
              const Eigen::VectorXd& rz, const Eigen::VectorXd& u, Eigen::VectorXd& dx,
              Eigen::VectorXd& dy, Eigen::VectorXd& dz, Eigen::VectorXd& ds) const {
    const Eigen::VectorXd wtu = detail::apply_scaling(p_.cones, w, u, true, false);
    kkt_solve(-rx, -ry, -rz - wtu, dx, dy, dz);
    const Eigen::VectorXd wdz = detail::apply_scaling(p_.cones, w, dz, false, false);
    ds = detail::apply_scaling(p_.cones, w, Eigen::VectorXd(u - wdz), true, false);
  }

  const ConicProblem& p_;
  SolverConfig config_;
  Eigen::Index n_;
  Eigen::Index m_eq_;
  Eigen::Index m_;
  Eigen::SparseMatrix<double> at_;
  Eigen::SparseMatrix<double> gt_;
  Eigen::VectorXd signs_;
  double delta_;
  detail::HessianBlocks hessian_;
  detail::QuasiDefiniteLdl ldl_;
  std::optional<Snapshot> best_;
  int first_accept_ = -1;
  Eigen::VectorXd x_, y_, z_, s_;
};

}  // namespace

const char* to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::infeasible: return "infeasible";
    case SolverStatus::unbounded: return "unbounded";
    case SolverStatus::iteration_limit: return "iteration_limit";
    case SolverStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

SolverConfig SolverConfig::from_env() {
  SolverConfig config;
  if (const char* env = std::getenv("HYOPF_SOLVER_TOL")) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0.0)) {
      throw ParameterError(std::string("HYOPF_SOLVER_TOL must be a positive number, got '") + env + "'");
    }
    config.feasibility_tol = tol;
    config.gap_tol = tol;
  }
  return config;
}

void SolverConfig::check() const {
  if (!(feasibility_tol > 0.0 && gap_tol > 0.0)) {
    throw ParameterError("solver tolerances must be positive");
  }
  if (!(step_fraction > 0.0 && step_fraction < 1.0)) {
    throw ParameterError("step fraction must lie in (0, 1)");
  }
  if (max_iterations < 0) {
    throw ParameterError("iteration limit must be nonnegative");
  }
  if (!(regularization > 0.0)) {
    throw ParameterError("regularization must be positive");
  }
}

Residuals kkt_residuals(const ConicProblem& problem, const SolverSolution& solution) {
  problem.check();
  if (solution.x.size() != problem.c.size() || solution.y.size() != problem.b.size() ||
      solution.z.size() != problem.h.size() || solution.s.size() != problem.h.size()) {
    throw DimensionError("kkt_residuals: solution does not match the problem dimensions");
  }
  Residuals r;
  const Eigen::VectorXd ry = problem.A * solution.x - problem.b;
  const Eigen::VectorXd rz = problem.G * solution.x + solution.s - problem.h;
  r.primal = std::max(ry.norm() / scale_of(problem.b), rz.norm() / scale_of(problem.h));
  const Eigen::VectorXd rx = problem.c - problem.A.transpose() * solution.y +
                             problem.G.transpose() * solution.z;
  r.dual = rx.norm() / scale_of(problem.c);
  r.gap = std::abs(solution.s.dot(solution.z)) / std::max(1.0, std::abs(problem.c.dot(solution.x)));
  return r;
}

SolverSolution solve(const ConicProblem& problem, const SolverConfig& config) {
  config.check();
  problem.check();
  SolverSolution out;
  const auto n = problem.c.size();
  out.x = Eigen::VectorXd::Zero(n);
  out.y = Eigen::VectorXd::Zero(problem.b.size());
  out.z = Eigen::VectorXd::Zero(problem.h.size());
  out.s = Eigen::VectorXd::Zero(problem.h.size());

  auto pre = presolve(problem);
  if (pre.trivial) {
    out.status = *pre.trivial;
    out.message = pre.message;
    out.residuals = kkt_residuals(problem, out);
    return out;
  }
  Engine engine(pre.reduced, config);
  auto res = engine.run();
  out.status = res.status;
  out.iterations = res.iterations;
  out.message = res.message;

  for (std::size_t j = 0; j < pre.columns.size(); ++j) {
    out.x(pre.columns[j]) = res.x(static_cast<Eigen::Index>(j));
  }
  // Reported y is the sensitivity d p* / d b, the negated internal multiplier.
  std::size_t pair = 0;
  for (std::size_t i = 0; i < pre.a_rows.size(); ++i) {
    const double yi = res.y(static_cast<Eigen::Index>(i));
    if (pre.a_rows[i] >= 0) {
      out.y(pre.a_rows[i]) = -yi;
    } else {
      const auto [first, second] = pre.pairs[pair++];
      out.z(first) = std::max(yi, 0.0);
      out.z(second) = std::max(-yi, 0.0);
    }
  }
  const Eigen::VectorXd slack = problem.h - problem.G * out.x;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(problem.cones.nonneg); ++i) {
    out.s(i) = std::max(0.0, slack(i));
  }
  for (std::size_t i = 0; i < pre.g_rows.size(); ++i) {
    out.z(pre.g_rows[i]) = res.z(static_cast<Eigen::Index>(i));
    out.s(pre.g_rows[i]) = res.s(static_cast<Eigen::Index>(i));
  }
  out.primal_objective = problem.c.dot(out.x) + problem.offset;
  out.dual_objective = problem.b.dot(out.y) - problem.h.dot(out.z) + problem.offset;
  out.residuals = kkt_residuals(problem, out);
  return out;
}

}  // namespace hyopf
