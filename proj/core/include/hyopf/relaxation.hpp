#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyopf/conic_problem.hpp"
#include "hyopf/opf_builder.hpp"

namespace hyopf {

enum class RelaxationKind { socr, sdr };

const char* to_string(RelaxationKind kind);

/// Default bus count limit for the dense SDR.
inline constexpr std::size_t kDenseSdrLimit = 120;

/// Where the relaxation keeps each quantity in the real variable vector.
struct VariableLayout {
  std::size_t diagonal = 0;  // V_nn at diagonal + n
  /// (i, j) with i < j, 0-based -> slot of Re V_ij; Im V_ij follows.
  std::map<std::pair<int, int>, std::size_t> off_diagonal;
  std::size_t converter = 0;  // f at converter + slot
  std::size_t injector = 0;   // P_j at injector + 2j, Q_j at injector + 2j + 1
  /// Epigraph variable per injector, -1 if that cost is absent.
  std::vector<long> epigraph_p;
  std::vector<long> epigraph_q;
  std::size_t size = 0;
};

/// Where the rows of the OPF ended up. Balance and mode-fix rows are rows of A,
/// everything else rows of G in the nonnegative block.
struct RowMap {
  std::size_t balance_p = 0;  // bus n at balance_p + n
  std::size_t balance_q = 0;
  std::vector<std::size_t> mode_fix;
  std::size_t inequality = 0;  // C_m at inequality + m
  std::vector<std::size_t> injector_capability;  // first row of injector j
  std::vector<std::size_t> epigraph_p;  // first segment row of injector j
  std::vector<std::size_t> epigraph_q;
};

struct Relaxation {
  RelaxationKind kind = RelaxationKind::socr;
  ConicProblem conic;
  VariableLayout layout;
  RowMap rows;
  std::size_t buses = 0;
};

/// Hermitian partial matrix on the sparsity pattern plus the diagonal.
struct PartialMatrix {
  Eigen::VectorXd diagonal;
  std::map<std::pair<int, int>, Complex> upper;  // i < j

  std::size_t size() const { return static_cast<std::size_t>(diagonal.size()); }
  /// Entry (i, j) if it is known, zero otherwise.
  Complex operator()(int i, int j) const;
  /// P_J(v v^H) on the given pattern.
  static PartialMatrix from_vector(const Eigen::VectorXcd& v, const SparsityPattern& pattern);
};

Relaxation build_socr(const QcqpProblem& problem);
/// Throws Error("dense SDR size limit ...") for more than `limit` buses.
Relaxation build_sdr(const QcqpProblem& problem, std::size_t limit = kDenseSdrLimit);

/// Second-order cone point `(a + b, 2 Re c, 2 Im c, a - b)`; the first entry
/// bounds the norm of the rest iff `[[a, c], [conj(c), b]]` is PSD.
Eigen::Vector4d psd2x2_to_soc(double a, double b, Complex c);
bool in_soc(const Eigen::Ref<const Eigen::VectorXd>& u, double tol = 0.0);

/// `[[Re M, -Im M], [Im M, Re M]]`. Throws ParameterError for non-Hermitian M.
Eigen::MatrixXd hermitian_embed(const Eigen::MatrixXcd& m, double tol = 1e-12);

/// Relaxation point of a QCQP point: V = v v^H, epigraph variables at the cost.
Eigen::VectorXd lift_point(const Relaxation& relaxation, const QcqpProblem& problem,
                           const Eigen::VectorXcd& v, const Eigen::VectorXd& f,
                           const Eigen::VectorXcd& s);

/// The parts of a relaxation solution.
PartialMatrix extract_partial(const Relaxation& relaxation, const SparsityPattern& pattern,
                              const Eigen::VectorXd& x);
Eigen::VectorXd extract_converter(const Relaxation& relaxation, const QcqpProblem& problem,
                                  const Eigen::VectorXd& x);
Eigen::VectorXcd extract_injection(const Relaxation& relaxation, const QcqpProblem& problem,
                                   const Eigen::VectorXd& x);

}  // namespace hyopf
