#include "hyopf/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "hyopf/validation.hpp"

namespace hyopf {
namespace {

std::string sci(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

}  // namespace

Eigen::VectorXcd traversal_completion(const PartialMatrix& V, const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.buses.size());
  if (static_cast<Eigen::Index>(V.size()) != n) {
    throw DimensionError("traversal_completion: partial matrix and grid sizes differ");
  }
  Eigen::VectorXd magnitude(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (V.diagonal(i) < -1e-9) {
      throw ParameterError("traversal_completion: negative diagonal entry at bus " +
                           std::to_string(i + 1));
    }
    magnitude(i) = std::sqrt(std::max(0.0, V.diagonal(i)));
  }
  std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
  for (const auto& br : grid.branches) {
    if (br.src != br.dst) {
      adj[static_cast<std::size_t>(br.src - 1)].insert(br.dst - 1);
      adj[static_cast<std::size_t>(br.dst - 1)].insert(br.src - 1);
    }
  }
  Eigen::VectorXd angle = Eigen::VectorXd::Zero(n);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Eigen::Index start = 0; start < n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    seen[static_cast<std::size_t>(start)] = 1;
    std::queue<int> todo;
    todo.push(static_cast<int>(start));
    while (!todo.empty()) {
      const int i = todo.front();
      todo.pop();
      for (int j : adj[static_cast<std::size_t>(i)]) {
        if (seen[static_cast<std::size_t>(j)]) continue;
        seen[static_cast<std::size_t>(j)] = 1;
        // V_ij ~ V_i conj(V_j)
        angle(j) = angle(i) - std::arg(V(i, j));
        todo.push(j);
      }
    }
  }
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = std::polar(magnitude(i), angle(i));
  }
  return v;
}

double completion_objective(const PartialMatrix& V, const SparsityPattern& pattern,
                            const Eigen::VectorXcd& v) {
  double out = 0.0;
  for (const auto& [i, j] : pattern.entries) {
    out += std::norm(v(i) * std::conj(v(j)) - V(i, j));
  }
  return out;
}

Eigen::VectorXcd wirtinger_gradient(const PartialMatrix& V, const SparsityPattern& pattern,
                                    const Eigen::VectorXcd& v) {
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(v.size());
  for (const auto& [i, j] : pattern.entries) {
    g(i) += 2.0 * (v(i) * std::conj(v(j)) - V(i, j)) * v(j);
  }
  return g;
}

RefineResult least_squares_refine(const PartialMatrix& V, const Grid& grid,
                                  const Eigen::VectorXcd& v0, const RefineOptions& options) {
  const auto full = sparsity_pattern(grid);
  RefineResult out;
  out.v = v0;
  out.initial_objective = completion_objective(V, full, v0);
  for (const auto& members : subgrids(grid)) {
    SparsityPattern local;
    const std::set<int> in(members.begin(), members.end());
    for (const auto& e : full.entries) {
      if (in.count(e.first + 1)) local.entries.insert(e);
    }
    if (local.empty()) continue;
    Eigen::VectorXcd v = out.v;
    double f = completion_objective(V, local, v);
    double alpha = 1.0;
    for (int it = 0; it < options.max_iterations; ++it) {
      const Eigen::VectorXcd g = wirtinger_gradient(V, local, v);
      const double g2 = g.squaredNorm();
      if (std::sqrt(g2) <= options.gradient_tol) break;
      bool accepted = false;
      Eigen::VectorXcd trial;
      double f_trial = f;
      for (int k = 0; k < 60; ++k) {
        trial = v - alpha * g;
        f_trial = completion_objective(V, local, trial);
        if (f_trial <= f - options.armijo * 2.0 * alpha * g2) {
          accepted = true;
          break;
        }
        alpha *= options.backtrack;
      }
      if (!accepted) break;
      const double decrease = f - f_trial;
      v = trial;
      f = f_trial;
      ++out.iterations;
      alpha = std::min(1.0, alpha / options.backtrack);
      if (decrease <= options.relative_decrease_tol * std::max(f, 1e-300)) break;
    }
    for (int bus : members) {
      out.v(bus - 1) = v(bus - 1);
    }
  }
  out.objective = completion_objective(V, full, out.v);
  if (out.objective > out.initial_objective) {
    out.v = v0;
    out.objective = out.initial_objective;
    out.iterations = 0;
  }
  return out;
}

ReconstructionError reconstruction_error(const PartialMatrix& V, const SparsityPattern& pattern,
                                         const Eigen::VectorXcd& v) {
  ReconstructionError out;
  if (pattern.empty()) {
    out.degenerate = true;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double d = std::norm(v(i)) - V.diagonal(i);
      out.kappa += d * d;
    }
    return out;
  }
  out.kappa = completion_objective(V, pattern, v) / static_cast<double>(pattern.size());
  return out;
}

Eigen::VectorXcd power_balance_error(const Eigen::VectorXcd& v, const Eigen::VectorXd& f,
                                     const Eigen::VectorXcd& s, const QcqpProblem& problem) {
  const auto n = static_cast<Eigen::Index>(problem.balance.size());
  if (v.size() != n || s.size() != static_cast<Eigen::Index>(problem.injectors.size()) ||
      (f.size() != 0 && f.size() != static_cast<Eigen::Index>(problem.converter_slots()))) {
    throw DimensionError("power_balance_error: dimensions do not match the problem");
  }
  Eigen::VectorXcd eps(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = problem.balance[static_cast<std::size_t>(i)];
    Complex value{row.p.value(v, f), row.q.value(v, f)};
    for (auto j : row.injectors) {
      value -= s(static_cast<Eigen::Index>(j));
    }
    eps(i) = value;
  }
  return eps;
}

DcRestoration restore_dc_state(const Eigen::VectorXcd& v, const Grid& grid) {
  DcRestoration out;
  out.v = v;
  for (const auto& br : grid.branches) {
    if (grid.is_dc(br.src) && grid.is_dc(br.dst)) {
      const double im = std::imag(std::conj(v(br.src - 1)) * v(br.dst - 1));
      out.lemma_residual = std::max(out.lemma_residual, std::abs(im));
    }
  }
  for (const auto& bus : grid.buses) {
    if (bus.kind == BusKind::dc) {
      out.v(bus.id - 1) = std::abs(v(bus.id - 1));
    }
  }
  if (out.lemma_residual > 1e-6) {
    out.diagnostic = "DC branch reactive circulation " + sci(out.lemma_residual) +
                     " exceeds 1e-6; the relaxation is not exact";
  }
  return out;
}

Eigen::VectorXd converter_loss_error(const Eigen::VectorXd& f, const Grid& grid) {
  if (f.size() != static_cast<Eigen::Index>(4 * grid.converters.size())) {
    throw DimensionError("converter_loss_error: converter state has the wrong length");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.converters.size()));
  for (std::size_t l = 0; l < grid.converters.size(); ++l) {
    const auto& cv = grid.converters[l];
    const double p_src = f(static_cast<Eigen::Index>(4 * l));
    const double p_dst = f(static_cast<Eigen::Index>(4 * l + 1));
    const double re_src = p_src - (1.0 - cv.loss_bwd) * p_dst;
    const double re_dst = p_dst - (1.0 - cv.loss_fwd) * p_src;
    out(static_cast<Eigen::Index>(l)) = cv.loss_fwd * (p_src - std::max(re_src, 0.0)) +
                                        cv.loss_bwd * (p_dst - std::max(re_dst, 0.0));
  }
  return out;
}

ModeFix choose_mode_fix(const Eigen::VectorXd& f, const Grid& grid, std::size_t converter) {
  const auto& cv = grid.converters.at(converter);
  const double p_src = f(static_cast<Eigen::Index>(4 * converter));
  const double p_dst = f(static_cast<Eigen::Index>(4 * converter + 1));
  const double re_src = p_src - (1.0 - cv.loss_bwd) * p_dst;
  return {converter, re_src > 0.0 ? Side::dst : Side::src};
}

Lmps extract_lmps(const SolverSolution& solution, const Relaxation& relaxation, double kappa,
                  double threshold) {
  Lmps out;
  if (solution.status != SolverStatus::optimal) {
    out.reason = std::string("solver status is ") + to_string(solution.status);
    return out;
  }
  if (!(kappa <= threshold)) {
    out.reason = "reconstruction error " + sci(kappa) + " exceeds the exactness threshold";
    return out;
  }
  const auto n = static_cast<Eigen::Index>(relaxation.buses);
  out.available = true;
  out.p = solution.y.segment(static_cast<Eigen::Index>(relaxation.rows.balance_p), n);
  out.q = solution.y.segment(static_cast<Eigen::Index>(relaxation.rows.balance_q), n);
  return out;
}

}  // namespace hyopf
