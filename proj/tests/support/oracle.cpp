#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyopf/polygon.hpp"

namespace hyopf::testing {

void circuit_currents(const Branch& br, Complex v_src, Complex v_dst, Complex& i_src,
                      Complex& i_dst) {
  const Complex u_src = br.rho_src * v_src;
  const Complex u_dst = br.rho_dst * v_dst;
  const Complex series = br.y_series * (u_src - u_dst);
  i_src = std::conj(br.rho_src) * (series + br.y_src * u_src);
  i_dst = std::conj(br.rho_dst) * (-series + br.y_dst * u_dst);
}

Eigen::MatrixXcd reference_ybus(const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.buses.size());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& bus : grid.buses) y(bus.id - 1, bus.id - 1) += bus.shunt;
  for (const auto& br : grid.branches) {
    const int s = br.src - 1;
    const int d = br.dst - 1;
    Complex is, id;
    circuit_currents(br, 1.0, 0.0, is, id);
    y(s, s) += is;
    y(d, s) += id;
    circuit_currents(br, 0.0, 1.0, is, id);
    y(s, d) += is;
    y(d, d) += id;
  }
  return y;
}

namespace {

struct MpBranch {
  int from, to;
  Complex yff, yft, ytf, ytt;
};

std::vector<MpBranch> matpower_branches(const MatpowerCase& mpc, std::vector<int>& index) {
  index.assign(static_cast<std::size_t>(mpc.bus.col(0).maxCoeff()) + 1, -1);
  int next = 0;
  for (Eigen::Index r = 0; r < mpc.bus.rows(); ++r) {
    if (mpc.bus(r, 1) != 4) index[static_cast<std::size_t>(mpc.bus(r, 0))] = next++;
  }
  std::vector<MpBranch> out;
  for (Eigen::Index r = 0; r < mpc.branch.rows(); ++r) {
    if (mpc.branch(r, 10) == 0) continue;
    const Complex ys = 1.0 / Complex(mpc.branch(r, 2), mpc.branch(r, 3));
    const double b = mpc.branch(r, 4);
    double ratio = mpc.branch(r, 8);
    if (ratio == 0) ratio = 1;
    const Complex tap = std::polar(ratio, mpc.branch(r, 9) * std::numbers::pi / 180.0);
    const Complex ytt = ys + Complex(0, b / 2);
    out.push_back({index[static_cast<std::size_t>(mpc.branch(r, 0))],
                   index[static_cast<std::size_t>(mpc.branch(r, 1))], ytt / (tap * std::conj(tap)),
                   -ys / std::conj(tap), -ys / tap, ytt});
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd matpower_ybus(const MatpowerCase& mpc) {
  std::vector<int> index;
  const auto branches = matpower_branches(mpc, index);
  int n = 0;
  for (int i : index) n += i >= 0;
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& b : branches) {
    y(b.from, b.from) += b.yff;
    y(b.from, b.to) += b.yft;
    y(b.to, b.from) += b.ytf;
    y(b.to, b.to) += b.ytt;
  }
  for (Eigen::Index r = 0; r < mpc.bus.rows(); ++r) {
    const int i = index[static_cast<std::size_t>(mpc.bus(r, 0))];
    if (i >= 0) y(i, i) += Complex(mpc.bus(r, 4), mpc.bus(r, 5)) / mpc.base_mva;
  }
  return y;
}

void matpower_branch_flows(const MatpowerCase& mpc, const Eigen::VectorXcd& v,
                           Eigen::VectorXcd& s_from, Eigen::VectorXcd& s_to) {
  std::vector<int> index;
  const auto branches = matpower_branches(mpc, index);
  s_from.resize(static_cast<Eigen::Index>(branches.size()));
  s_to.resize(static_cast<Eigen::Index>(branches.size()));
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const auto& b = branches[k];
    const Complex vf = v(b.from), vt = v(b.to);
    s_from(static_cast<Eigen::Index>(k)) = vf * std::conj(b.yff * vf + b.yft * vt);
    s_to(static_cast<Eigen::Index>(k)) = vt * std::conj(b.ytf * vf + b.ytt * vt);
  }
}

PowerFlowResult newton_power_flow(const Eigen::MatrixXcd& y, const std::vector<PfBus>& types,
                                  const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& vm0, double tol, int max_iterations) {
  const auto n = y.rows();
  std::vector<Eigen::Index> pvpq, pq;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (types[static_cast<std::size_t>(i)] != PfBus::slack) pvpq.push_back(i);
    if (types[static_cast<std::size_t>(i)] == PfBus::pq) pq.push_back(i);
  }
  Eigen::VectorXd vm = vm0;
  for (auto i : pq) vm(i) = 1.0;
  Eigen::VectorXd va = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXcd s_target = p.cast<Complex>() + Complex(0, 1) * q.cast<Complex>();
  const auto np = static_cast<Eigen::Index>(pvpq.size());
  const auto nq = static_cast<Eigen::Index>(pq.size());
  PowerFlowResult out;
  for (int it = 0; it <= max_iterations; ++it) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = std::polar(vm(i), va(i));
    const Eigen::VectorXcd current = y * v;
    const Eigen::VectorXcd s = v.array() * current.conjugate().array();
    const Eigen::VectorXcd mis = s - s_target;
    Eigen::VectorXd f(np + nq);
    for (Eigen::Index k = 0; k < np; ++k) f(k) = mis(pvpq[static_cast<std::size_t>(k)]).real();
    for (Eigen::Index k = 0; k < nq; ++k) f(np + k) = mis(pq[static_cast<std::size_t>(k)]).imag();
    if (f.size() == 0 || f.lpNorm<Eigen::Infinity>() < tol) {
      out.converged = true;
      out.v = v;
      out.s = s;
      return out;
    }
    if (it == max_iterations || !f.allFinite()) break;
    const Eigen::VectorXcd vnorm = v.array() / v.cwiseAbs().cast<Complex>().array();
    const Eigen::MatrixXcd dva =
        Complex(0, 1) * v.asDiagonal() *
        (Eigen::MatrixXcd(current.asDiagonal()) - y * v.asDiagonal()).conjugate();
    const Eigen::MatrixXcd dvm = v.asDiagonal() * (y * vnorm.asDiagonal()).conjugate() +
                                 Eigen::MatrixXcd(current.conjugate().asDiagonal()) *
                                     Eigen::MatrixXcd(vnorm.asDiagonal());
    Eigen::MatrixXd jac(np + nq, np + nq);
    for (Eigen::Index r = 0; r < np; ++r) {
      const auto i = pvpq[static_cast<std::size_t>(r)];
      for (Eigen::Index c = 0; c < np; ++c) jac(r, c) = dva(i, pvpq[static_cast<std::size_t>(c)]).real();
      for (Eigen::Index c = 0; c < nq; ++c) jac(r, np + c) = dvm(i, pq[static_cast<std::size_t>(c)]).real();
    }
    for (Eigen::Index r = 0; r < nq; ++r) {
      const auto i = pq[static_cast<std::size_t>(r)];
      for (Eigen::Index c = 0; c < np; ++c) jac(np + r, c) = dva(i, pvpq[static_cast<std::size_t>(c)]).imag();
      for (Eigen::Index c = 0; c < nq; ++c) jac(np + r, np + c) = dvm(i, pq[static_cast<std::size_t>(c)]).imag();
    }
    const Eigen::VectorXd dx = -jac.partialPivLu().solve(f);
    for (Eigen::Index k = 0; k < np; ++k) va(pvpq[static_cast<std::size_t>(k)]) += dx(k);
    for (Eigen::Index k = 0; k < nq; ++k) vm(pq[static_cast<std::size_t>(k)]) += dx(np + k);
  }
  return out;
}

std::vector<double> grid_search(const std::vector<SearchBox>& box,
                                const std::function<double(const std::vector<double>&)>& f,
                                double final_step, double& best_value) {
  const auto d = box.size();
  std::vector<double> step(d), center(d);
  for (std::size_t i = 0; i < d; ++i) {
    step[i] = (box[i].hi - box[i].lo) / 10.0;
    center[i] = box[i].lo + 5.0 * step[i];
  }
  best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best = center;
  for (;;) {
    bool last = true;
    for (std::size_t i = 0; i < d; ++i) last = last && step[i] <= final_step;
    std::vector<int> k(d, -5);
    for (;;) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = std::clamp(center[i] + k[i] * step[i], box[i].lo, box[i].hi);
      }
      const double value = f(x);
      if (value < best_value) {
        best_value = value;
        best = x;
      }
      std::size_t i = 0;
      while (i < d && ++k[i] > 5) k[i++] = -5;
      if (i == d) break;
    }
    if (last) break;
    center = best;
    for (auto& s : step) s = std::max(final_step, s / 5.0);
  }
  return best;
}

BruteForceResult brute_force_opf(const Grid& grid, double final_step) {
  const auto n = static_cast<Eigen::Index>(grid.buses.size());
  const Eigen::MatrixXcd y = reference_ybus(grid);
  std::vector<int> gen_at(static_cast<std::size_t>(n), -1);
  std::vector<int> gens;
  for (const auto& inj : grid.injectors) {
    if (gen_at[static_cast<std::size_t>(inj.bus - 1)] >= 0) {
      throw Error("brute_force_opf: one generator per bus");
    }
    gen_at[static_cast<std::size_t>(inj.bus - 1)] = inj.id - 1;
    gens.push_back(inj.id - 1);
  }
  if (gens.empty()) throw Error("brute_force_opf: no generator");
  const int slack = grid.injectors[static_cast<std::size_t>(gens.front())].bus - 1;

  std::vector<SearchBox> box;
  for (int j : gens) {
    const auto& bus = grid.bus(grid.injectors[static_cast<std::size_t>(j)].bus);
    box.push_back({bus.v_min, bus.v_max});
  }
  for (std::size_t k = 1; k < gens.size(); ++k) {
    const auto ext = polygon_extent(grid.injectors[static_cast<std::size_t>(gens[k])].capability);
    box.push_back({ext.p_min, ext.p_max});
  }

  BruteForceResult result;
  auto evaluate = [&](const std::vector<double>& x, Eigen::VectorXcd* state) {
    ++result.evaluations;
    std::vector<PfBus> types(static_cast<std::size_t>(n), PfBus::pq);
    Eigen::VectorXd p(n), q(n), vm = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p(i) = -grid.buses[static_cast<std::size_t>(i)].load.real();
      q(i) = -grid.buses[static_cast<std::size_t>(i)].load.imag();
    }
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const int bus = grid.injectors[static_cast<std::size_t>(gens[k])].bus - 1;
      types[static_cast<std::size_t>(bus)] = k == 0 ? PfBus::slack : PfBus::pv;
      vm(bus) = x[k];
      if (k > 0) p(bus) += x[gens.size() + k - 1];
    }
    const auto pf = newton_power_flow(y, types, p, q, vm);
    if (!pf.converged) return std::numeric_limits<double>::infinity();
    const auto& v = pf.v;
    constexpr double tol = 1e-9;
    double cost = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& bus = grid.buses[static_cast<std::size_t>(i)];
      const double m = std::abs(v(i));
      if (m < bus.v_min - tol || m > bus.v_max + tol) return std::numeric_limits<double>::infinity();
      const int j = gen_at[static_cast<std::size_t>(i)];
      if (j >= 0) {
        const Complex s = pf.s(i) + bus.load;
        const auto& inj = grid.injectors[static_cast<std::size_t>(j)];
        if (!polygon_contains(inj.capability, s.real(), s.imag(), tol)) {
          return std::numeric_limits<double>::infinity();
        }
        cost += inj.cost_p(s.real()) + inj.cost_q(s.imag());
      }
    }
    for (const auto& br : grid.branches) {
      const Complex vs = v(br.src - 1), vd = v(br.dst - 1);
      Complex is, id;
      circuit_currents(br, vs, vd, is, id);
      if (std::abs(is) > br.i_max_src + tol || std::abs(id) > br.i_max_dst + tol) {
        return std::numeric_limits<double>::infinity();
      }
      const double drop = std::abs(vd) / std::abs(vs) - 1.0;
      if (drop < br.drop_min - tol || drop > br.drop_max + tol) {
        return std::numeric_limits<double>::infinity();
      }
      const double angle = std::arg(vs * std::conj(vd));
      if (angle < br.angle_min - tol || angle > br.angle_max + tol) {
        return std::numeric_limits<double>::infinity();
      }
    }
    if (state) *state = v;
    return cost;
  };
  double best = 0.0;
  const auto x = grid_search(
      box, [&](const std::vector<double>& p) { return evaluate(p, nullptr); }, final_step, best);
  result.objective = best;
  evaluate(x, &result.v);
  return result;
}

}  // namespace hyopf::testing
