#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "hyopf/grid.hpp"
#include "hyopf/matpower.hpp"

// Reference computations written from circuit laws, independent of the
// library's matrix builders.
namespace hyopf::testing {

/// Branch terminal currents of the transformer/pi circuit: internal voltages
/// U = rho V, currents referred back with conj(rho).
void circuit_currents(const Branch& br, Complex v_src, Complex v_dst, Complex& i_src,
                      Complex& i_dst);

/// Dense bus admittance assembled from `circuit_currents` unit responses.
Eigen::MatrixXcd reference_ybus(const Grid& grid);

/// Bus admittance with MATPOWER's branch formulas, straight from the tables.
Eigen::MatrixXcd matpower_ybus(const MatpowerCase& mpc);

/// Branch flows S_from, S_to in p.u. from the MATPOWER tables (in-service rows).
void matpower_branch_flows(const MatpowerCase& mpc, const Eigen::VectorXcd& v,
                           Eigen::VectorXcd& s_from, Eigen::VectorXcd& s_to);

enum class PfBus { slack, pv, pq };

struct PowerFlowResult {
  bool converged = false;
  Eigen::VectorXcd v;
  Eigen::VectorXcd s;  // net injection V conj(Y V)
};

/// Newton-Raphson in polar coordinates. `p`, `q` are net injections
/// (used for PV: p; PQ: p and q); `vm` holds slack/PV magnitudes.
PowerFlowResult newton_power_flow(const Eigen::MatrixXcd& y, const std::vector<PfBus>& types,
                                  const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& vm, double tol = 1e-12,
                                  int max_iterations = 30);

struct SearchBox {
  double lo;
  double hi;
};

/// Nested grid search: each level scans a grid around the incumbent and the
/// step shrinks until it reaches `final_step`. Returns the best point.
std::vector<double> grid_search(const std::vector<SearchBox>& box,
                                const std::function<double(const std::vector<double>&)>& f,
                                double final_step, double& best_value);

struct BruteForceResult {
  double objective = 0.0;
  Eigen::VectorXcd v;
  int evaluations = 0;
};

/// Brute-force OPF for AC grids with at most one generator per bus: grid
/// search over generator voltage magnitudes and non-slack active dispatch,
/// angles and the remaining states from a power flow. Loss price 0.
BruteForceResult brute_force_opf(const Grid& grid, double final_step = 1e-3);

}  // namespace hyopf::testing
