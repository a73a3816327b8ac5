#include "cones.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hyopf/grid.hpp"

namespace hyopf::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Calls fn(kind, index, offset, size) for each cone slice.
enum class Kind { soc, psd };

template <typename Fn>
void for_each_cone(const ConeDims& cones, Fn fn) {
  std::size_t offset = cones.nonneg;
  for (std::size_t k = 0; k < cones.soc.size(); ++k) {
    fn(Kind::soc, k, offset, cones.soc[k]);
    offset += cones.soc[k];
  }
  for (std::size_t k = 0; k < cones.psd.size(); ++k) {
    fn(Kind::psd, k, offset, svec_size(cones.psd[k]));
    offset += svec_size(cones.psd[k]);
  }
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double soc_det(const Eigen::Ref<const Eigen::VectorXd>& u) {
  return u(0) * u(0) - u.tail(u.size() - 1).squaredNorm();
}

}  // namespace

Scaling nt_scaling(const ConeDims& cones, const Eigen::VectorXd& s, const Eigen::VectorXd& z) {
  Scaling w;
  const auto nn = idx(cones.nonneg);
  w.lambda.resize(s.size());
  w.nonneg = (s.head(nn).array() / z.head(nn).array()).sqrt();
  w.lambda.head(nn) = (s.head(nn).array() * z.head(nn).array()).sqrt();
  for_each_cone(cones, [&](Kind kind, std::size_t, std::size_t offset, std::size_t size) {
    const auto sk = s.segment(idx(offset), idx(size));
    const auto zk = z.segment(idx(offset), idx(size));
    if (kind == Kind::soc) {
      const double sdet = soc_det(sk);
      const double zdet = soc_det(zk);
      if (!(sdet > 0.0 && zdet > 0.0 && sk(0) > 0.0 && zk(0) > 0.0)) {
        throw Error("nt_scaling: point not interior to a second-order cone");
      }
      const Eigen::VectorXd sbar = sk / std::sqrt(sdet);
      const Eigen::VectorXd zbar = zk / std::sqrt(zdet);
      const double gamma = std::sqrt((1.0 + sbar.dot(zbar)) / 2.0);
      Eigen::VectorXd wbar = sbar;
      wbar(0) += zbar(0);
      wbar.tail(idx(size) - 1) -= zbar.tail(idx(size) - 1);
      wbar /= 2.0 * gamma;
      const double beta = std::pow(sdet / zdet, 0.25);
      Eigen::VectorXd v = wbar;
      v(0) += 1.0;
      v /= std::sqrt(2.0 * (wbar(0) + 1.0));
      Eigen::MatrixXd j = -Eigen::MatrixXd::Identity(idx(size), idx(size));
      j(0, 0) = 1.0;
      const Eigen::VectorXd jv = j * v;
      w.soc.push_back(beta * (2.0 * v * v.transpose() - j));
      w.soc_inv.push_back((2.0 * jv * jv.transpose() - j) / beta);
      w.lambda.segment(idx(offset), idx(size)) = w.soc.back() * zk;
    } else {
      const auto order = static_cast<std::size_t>(
          std::lround((std::sqrt(8.0 * static_cast<double>(size) + 1.0) - 1.0) / 2.0));
      Eigen::LLT<Eigen::MatrixXd> ls(smat(sk, order));
      Eigen::LLT<Eigen::MatrixXd> lz(smat(zk, order));
      if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) {
        throw Error("nt_scaling: point not interior to a PSD cone");
      }
      const Eigen::MatrixXd l1 = ls.matrixL();
      const Eigen::MatrixXd l2 = lz.matrixL();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(l2.transpose() * l1,
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::VectorXd lam = svd.singularValues();
      const Eigen::VectorXd isq = lam.array().rsqrt();
      w.psd_r.push_back(l1 * svd.matrixV() * isq.asDiagonal());
      w.psd_rinv.push_back(isq.asDiagonal() * svd.matrixU().transpose() * l2.transpose());
      w.psd_lambda.push_back(lam);
      w.lambda.segment(idx(offset), idx(size)) = svec(Eigen::MatrixXd(lam.asDiagonal()));
    }
  });
  return w;
}

Eigen::VectorXd apply_scaling(const ConeDims& cones, const Scaling& w, const Eigen::VectorXd& v,
                              bool transpose, bool inverse) {
  Eigen::VectorXd out(v.size());
  const auto nn = idx(cones.nonneg);
  if (inverse) {
    out.head(nn) = v.head(nn).array() / w.nonneg.array();
  } else {
    out.head(nn) = v.head(nn).array() * w.nonneg.array();
  }
  for_each_cone(cones, [&](Kind kind, std::size_t k, std::size_t offset, std::size_t size) {
    const auto vk = v.segment(idx(offset), idx(size));
    auto ok = out.segment(idx(offset), idx(size));
    if (kind == Kind::soc) {
      ok = (inverse ? w.soc_inv[k] : w.soc[k]) * vk;
      return;
    }
    const auto order = static_cast<std::size_t>(w.psd_r[k].rows());
    const Eigen::MatrixXd m = smat(vk, order);
    // W(Z) = r^T Z r, W^T(Z) = r Z r^T, W^-1(Z) = r^-T Z r^-1, W^-T(Z) = r^-1 Z r^-T.
    const Eigen::MatrixXd& r = inverse ? w.psd_rinv[k] : w.psd_r[k];
    if (transpose) {
      ok = svec(r * m * r.transpose());
    } else {
      ok = svec(r.transpose() * m * r);
    }
  });
  return out;
}

HessianBlocks scaling_hessian(const ConeDims& /*cones*/, const Scaling& w) {
  HessianBlocks out;
  out.nonneg = w.nonneg.array().square();
  for (const auto& m : w.soc) {
    out.blocks.push_back(m * m);
  }
  for (std::size_t k = 0; k < w.psd_r.size(); ++k) {
    const Eigen::MatrixXd t = w.psd_r[k] * w.psd_r[k].transpose();
    const auto order = static_cast<std::size_t>(t.rows());
    const auto n = idx(svec_size(order));
    Eigen::MatrixXd h(n, n);
    const double r2 = std::sqrt(2.0);
    // Column of E_ij: (E_ij + E_ji) / sqrt(2) for i != j, E_ii otherwise.
    for (std::size_t j = 0; j < order; ++j) {
      for (std::size_t i = j; i < order; ++i) {
        const auto col = idx(svec_index(order, i, j));
        Eigen::MatrixXd m;
        if (i == j) {
          m = t.col(idx(i)) * t.row(idx(i));
        } else {
          m = (t.col(idx(i)) * t.row(idx(j)) + t.col(idx(j)) * t.row(idx(i))) / r2;
        }
        h.col(col) = svec(m);
      }
    }
    out.blocks.push_back(0.5 * (h + h.transpose()));
  }
  return out;
}

Eigen::VectorXd identity(const ConeDims& cones) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(idx(cones.size()));
  e.head(idx(cones.nonneg)).setOnes();
  for_each_cone(cones, [&](Kind kind, std::size_t k, std::size_t offset, std::size_t size) {
    if (kind == Kind::soc) {
      e(idx(offset)) = 1.0;
    } else {
      const auto order = cones.psd[k];
      e.segment(idx(offset), idx(size)) =
          svec(Eigen::MatrixXd::Identity(idx(order), idx(order)));
    }
  });
  return e;
}

Eigen::VectorXd jordan(const ConeDims& cones, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd out(x.size());
  const auto nn = idx(cones.nonneg);
  out.head(nn) = x.head(nn).array() * y.head(nn).array();
  for_each_cone(cones, [&](Kind kind, std::size_t k, std::size_t offset, std::size_t size) {
    const auto xk = x.segment(idx(offset), idx(size));
    const auto yk = y.segment(idx(offset), idx(size));
    auto ok = out.segment(idx(offset), idx(size));
    if (kind == Kind::soc) {
      ok(0) = xk.dot(yk);
      ok.tail(idx(size) - 1) = xk(0) * yk.tail(idx(size) - 1) + yk(0) * xk.tail(idx(size) - 1);
    } else {
      const auto order = cones.psd[k];
      const Eigen::MatrixXd a = smat(xk, order);
      const Eigen::MatrixXd b = smat(yk, order);
      ok = svec(0.5 * (a * b + b * a));
    }
  });
  return out;
}

Eigen::VectorXd jordan_div(const ConeDims& cones, const Scaling& w, const Eigen::VectorXd& y) {
  Eigen::VectorXd out(y.size());
  const auto nn = idx(cones.nonneg);
  out.head(nn) = y.head(nn).array() / w.lambda.head(nn).array();
  for_each_cone(cones, [&](Kind kind, std::size_t k, std::size_t offset, std::size_t size) {
    const auto yk = y.segment(idx(offset), idx(size));
    auto ok = out.segment(idx(offset), idx(size));
    if (kind == Kind::soc) {
      const auto lk = w.lambda.segment(idx(offset), idx(size));
      const double det = soc_det(lk);
      const double x0 = (lk(0) * yk(0) - lk.tail(idx(size) - 1).dot(yk.tail(idx(size) - 1))) / det;
      ok(0) = x0;
      ok.tail(idx(size) - 1) = (yk.tail(idx(size) - 1) - x0 * lk.tail(idx(size) - 1)) / lk(0);
    } else {
      const auto order = cones.psd[k];
      const auto& lam = w.psd_lambda[k];
      Eigen::MatrixXd m = smat(yk, order);
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          m(i, j) *= 2.0 / (lam(i) + lam(j));
        }
      }
      ok = svec(m);
    }
  });
  return out;
}

double interior_margin(const ConeDims& cones, const Eigen::VectorXd& v) {
  double out = kInf;
  const auto nn = idx(cones.nonneg);
  if (nn > 0) {
    out = v.head(nn).minCoeff();
  }
  for_each_cone(cones, [&](Kind kind, std::size_t k, std::size_t offset, std::size_t size) {
    const auto vk = v.segment(idx(offset), idx(size));
    if (kind == Kind::soc) {
      out = std::min(out, vk(0) - vk.tail(idx(size) - 1).norm());
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(smat(vk, cones.psd[k]),
                                                         Eigen::EigenvaluesOnly);
      out = std::min(out, eig.eigenvalues().minCoeff());
    }
  });
  return out;
}

double max_step(const ConeDims& cones, const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double out = kInf;
  for (Eigen::Index i = 0; i < idx(cones.nonneg); ++i) {
    if (dv(i) < 0.0) {
      out = std::min(out, -v(i) / dv(i));
    }
  }
  for_each_cone(cones, [&](Kind kind, std::size_t k, std::size_t offset, std::size_t size) {
    const auto vk = v.segment(idx(offset), idx(size));
    const auto dk = dv.segment(idx(offset), idx(size));
    if (kind == Kind::soc) {
      // (v0 + a d0)^2 - ||v1 + a d1||^2 = c + b a + q a^2
      const double q = soc_det(dk);
      const double b = 2.0 * (vk(0) * dk(0) - vk.tail(idx(size) - 1).dot(dk.tail(idx(size) - 1)));
      const double c = soc_det(vk);
      double alpha = kInf;
      const double scale = std::max({std::abs(q), std::abs(b), std::abs(c)});
      if (std::abs(q) <= 1e-15 * scale) {
        if (b < 0.0) alpha = -c / b;
      } else {
        const double disc = b * b - 4.0 * q * c;
        if (disc >= 0.0) {
          const double root = -0.5 * (b + std::copysign(std::sqrt(disc), b));
          const double r1 = root / q;
          const double r2 = root != 0.0 ? c / root : kInf;
          for (double r : {r1, r2}) {
            if (r > 0.0) alpha = std::min(alpha, r);
          }
        }
      }
      if (dk(0) < 0.0) {
        alpha = std::min(alpha, -vk(0) / dk(0));
      }
      out = std::min(out, alpha);
    } else {
      const auto order = cones.psd[k];
      Eigen::LLT<Eigen::MatrixXd> llt(smat(vk, order));
      const Eigen::MatrixXd l = llt.matrixL();
      Eigen::MatrixXd m = smat(dk, order);
      m = l.triangularView<Eigen::Lower>().solve(m);
      m = l.triangularView<Eigen::Lower>().solve(m.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()),
                                                         Eigen::EigenvaluesOnly);
      const double mu = eig.eigenvalues().minCoeff();
      if (mu < 0.0) {
        out = std::min(out, -1.0 / mu);
      }
    }
  });
  return out;
}

}  // namespace hyopf::detail
