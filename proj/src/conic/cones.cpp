#include "paretoaro/conic/cones.hpp"

#include <cmath>
#include <limits>

#include "paretoaro/common/error.hpp"

namespace paretoaro::conic::cones {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

int svec_len(int order) { return order * (order + 1) / 2; }

// Matrix of the linear map Y -> P' Y P in svec coordinates.
Matrix congruence_matrix(const Matrix& P) {
  const int p = static_cast<int>(P.rows());
  const int len = svec_len(p);
  Matrix out(len, len);
  Vector e = Vector::Zero(len);
  for (int k = 0; k < len; ++k) {
    e.setZero();
    e(k) = 1.0;
    out.col(k) = svec(P.transpose() * smat(e, p) * P);
  }
  return out;
}

double soc_step(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& d) {
  // Largest alpha with x0 + a d0 >= ||x1 + a d1||.
  const double jx = x(0) * x(0) - x.tail(x.size() - 1).squaredNorm();
  const double jd = d(0) * d(0) - d.tail(d.size() - 1).squaredNorm();
  const double jxd = x(0) * d(0) - x.tail(x.size() - 1).dot(d.tail(d.size() - 1));
  // J(x + a d) = jx + 2 a jxd + a^2 jd, need >= 0 and x0 + a d0 >= 0.
  double alpha = kInf;
  if (d(0) < 0) alpha = -x(0) / d(0);
  if (jd == 0.0) {
    if (jxd < 0) alpha = std::min(alpha, -jx / (2 * jxd));
    return alpha;
  }
  const double disc = jxd * jxd - jx * jd;
  if (disc < 0) return alpha;  // quadratic keeps its sign (positive)
  const double sq = std::sqrt(disc);
  // roots (-jxd +- sq) / jd; take smallest positive
  double r1 = (-jxd - sq) / jd;
  double r2 = (-jxd + sq) / jd;
  if (r1 > r2) std::swap(r1, r2);
  if (r1 > 0) return std::min(alpha, r1);
  if (r2 > 0 && jd < 0) return std::min(alpha, r2);
  return alpha;
}

double psd_step(const Matrix& X, const Matrix& dX) {
  Eigen::LLT<Matrix> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const Matrix L = llt.matrixL();
  Matrix T = L.triangularView<Eigen::Lower>().solve(dX);
  T = L.triangularView<Eigen::Lower>().solve(T.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (T + T.transpose()), Eigen::EigenvaluesOnly);
  const double mn = es.eigenvalues()(0);
  return mn < 0 ? -1.0 / mn : kInf;
}

}  // namespace

int Dims::dim() const {
  int d = nonneg;
  for (int q : soc) d += q;
  for (int p : psd) d += svec_len(p);
  return d;
}

int Dims::degree() const {
  int d = nonneg + static_cast<int>(soc.size());
  for (int p : psd) d += p;
  return d;
}

Vector svec(const Matrix& m) {
  const int p = static_cast<int>(m.rows());
  Vector v(svec_len(p));
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i <= j; ++i) {
      v(j * (j + 1) / 2 + i) = (i == j) ? m(i, j) : kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return v;
}

Matrix smat(const Eigen::Ref<const Vector>& v, int order) {
  Matrix m(order, order);
  for (int j = 0; j < order; ++j) {
    for (int i = 0; i <= j; ++i) {
      const double x = v(j * (j + 1) / 2 + i);
      if (i == j) {
        m(i, i) = x;
      } else {
        m(i, j) = m(j, i) = x / kSqrt2;
      }
    }
  }
  return m;
}

Vector identity(const Dims& dims) {
  Vector e = Vector::Zero(dims.dim());
  int off = 0;
  e.head(dims.nonneg).setOnes();
  off += dims.nonneg;
  for (int q : dims.soc) {
    e(off) = 1.0;
    off += q;
  }
  for (int p : dims.psd) {
    for (int i = 0; i < p; ++i) e(off + i * (i + 1) / 2 + i) = 1.0;
    off += svec_len(p);
  }
  return e;
}

Vector jordan(const Dims& dims, const Vector& x, const Vector& y) {
  Vector out(x.size());
  int off = 0;
  out.head(dims.nonneg) = x.head(dims.nonneg).cwiseProduct(y.head(dims.nonneg));
  off += dims.nonneg;
  for (int q : dims.soc) {
    auto xs = x.segment(off, q);
    auto ys = y.segment(off, q);
    out(off) = xs.dot(ys);
    out.segment(off + 1, q - 1) = xs(0) * ys.tail(q - 1) + ys(0) * xs.tail(q - 1);
    off += q;
  }
  for (int p : dims.psd) {
    const int len = svec_len(p);
    const Matrix X = smat(x.segment(off, len), p);
    const Matrix Y = smat(y.segment(off, len), p);
    out.segment(off, len) = svec(0.5 * (X * Y + Y * X));
    off += len;
  }
  return out;
}

double max_step(const Dims& dims, const Vector& x, const Vector& dx) {
  double alpha = kInf;
  for (int i = 0; i < dims.nonneg; ++i) {
    if (dx(i) < 0) alpha = std::min(alpha, -x(i) / dx(i));
  }
  int off = dims.nonneg;
  for (int q : dims.soc) {
    alpha = std::min(alpha, soc_step(x.segment(off, q), dx.segment(off, q)));
    off += q;
  }
  for (int p : dims.psd) {
    const int len = svec_len(p);
    alpha = std::min(alpha, psd_step(smat(x.segment(off, len), p), smat(dx.segment(off, len), p)));
    off += len;
  }
  return alpha;
}

Scaling nt_scaling(const Dims& dims, const Vector& s, const Vector& z) {
  Scaling sc;
  sc.lambda.resize(s.size());
  const int nn = dims.nonneg;
  if (nn > 0 && !(s.head(nn).minCoeff() > 0 && z.head(nn).minCoeff() > 0)) {
    fail(ErrorCode::kNumericalBreakdown, "iterate left the nonnegative orthant");
  }
  sc.nonneg_w = (s.head(nn).array() / z.head(nn).array()).sqrt();
  sc.lambda.head(nn) = (s.head(nn).array() * z.head(nn).array()).sqrt();
  int off = nn;
  for (int q : dims.soc) {
    const Vector ss = s.segment(off, q);
    const Vector zz = z.segment(off, q);
    const double js = ss(0) * ss(0) - ss.tail(q - 1).squaredNorm();
    const double jz = zz(0) * zz(0) - zz.tail(q - 1).squaredNorm();
    if (!(js > 0) || !(jz > 0)) fail(ErrorCode::kNumericalBreakdown, "iterate left the second-order cone");
    const Vector sb = ss / std::sqrt(js);
    const Vector zb = zz / std::sqrt(jz);
    const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
    Vector w(q);
    w(0) = (sb(0) + zb(0)) / (2 * gamma);
    w.tail(q - 1) = (sb.tail(q - 1) - zb.tail(q - 1)) / (2 * gamma);
    const double beta = std::pow(js / jz, 0.25);
    Matrix Wb(q, q);
    Wb(0, 0) = w(0);
    Wb.block(0, 1, 1, q - 1) = w.tail(q - 1).transpose();
    Wb.block(1, 0, q - 1, 1) = w.tail(q - 1);
    Wb.block(1, 1, q - 1, q - 1) =
        Matrix::Identity(q - 1, q - 1) + w.tail(q - 1) * w.tail(q - 1).transpose() / (1.0 + w(0));
    Matrix J = Matrix::Identity(q, q);
    J.block(1, 1, q - 1, q - 1) *= -1.0;
    sc.W.push_back(beta * Wb);
    sc.W_inv.push_back((J * Wb * J) / beta);
    sc.lambda.segment(off, q) = sc.W.back() * zz;
    off += q;
  }
  for (int p : dims.psd) {
    const int len = svec_len(p);
    const Matrix S = smat(s.segment(off, len), p);
    const Matrix Z = smat(z.segment(off, len), p);
    Eigen::LLT<Matrix> ls(S), lz(Z);
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) {
      fail(ErrorCode::kNumericalBreakdown, "iterate left the PSD cone");
    }
    const Matrix Ls = ls.matrixL();
    const Matrix Lz = lz.matrixL();
    Eigen::JacobiSVD<Matrix> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector sig = svd.singularValues();
    const Vector isq = sig.array().rsqrt();
    // R = Ls V diag(sig^-1/2);  R^{-1} = diag(sig^-1/2) U' Lz'
    const Matrix R = Ls * svd.matrixV() * isq.asDiagonal();
    const Matrix R_inv = isq.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
    // W z = R' Z R,  W^{-1} y = R^{-T} Y R^{-1}.
    sc.W.push_back(congruence_matrix(R));
    sc.W_inv.push_back(congruence_matrix(R_inv));
    Vector lam = Vector::Zero(len);
    for (int i = 0; i < p; ++i) lam(i * (i + 1) / 2 + i) = sig(i);
    sc.lambda.segment(off, len) = lam;
    off += len;
  }
  return sc;
}

namespace {

enum class Op { kW, kWt, kWinvT };

Vector apply(const Dims& dims, const Scaling& sc, const Vector& v, Op op) {
  Vector out(v.size());
  const int nn = dims.nonneg;
  if (op == Op::kWinvT) {
    out.head(nn) = v.head(nn).cwiseQuotient(sc.nonneg_w);
  } else {
    out.head(nn) = v.head(nn).cwiseProduct(sc.nonneg_w);
  }
  int off = nn;
  std::size_t k = 0;
  auto block = [&](int len) {
    const auto seg = v.segment(off, len);
    switch (op) {
      case Op::kW: out.segment(off, len) = sc.W[k] * seg; break;
      case Op::kWt: out.segment(off, len) = sc.W[k].transpose() * seg; break;
      case Op::kWinvT: out.segment(off, len) = sc.W_inv[k].transpose() * seg; break;
    }
    off += len;
    ++k;
  };
  for (int q : dims.soc) block(q);
  for (int p : dims.psd) block(svec_len(p));
  return out;
}

}  // namespace

Vector apply_W(const Dims& dims, const Scaling& sc, const Vector& v) { return apply(dims, sc, v, Op::kW); }
Vector apply_W_transpose(const Dims& dims, const Scaling& sc, const Vector& v) {
  return apply(dims, sc, v, Op::kWt);
}
Vector apply_W_inv_transpose(const Dims& dims, const Scaling& sc, const Vector& v) {
  return apply(dims, sc, v, Op::kWinvT);
}

Vector jordan_solve(const Dims& dims, const Vector& lambda, const Vector& v) {
  Vector x(v.size());
  const int nn = dims.nonneg;
  x.head(nn) = v.head(nn).cwiseQuotient(lambda.head(nn));
  int off = nn;
  for (int q : dims.soc) {
    const auto l = lambda.segment(off, q);
    const auto vv = v.segment(off, q);
    const double jl = l(0) * l(0) - l.tail(q - 1).squaredNorm();
    const double x0 = (l(0) * vv(0) - l.tail(q - 1).dot(vv.tail(q - 1))) / jl;
    x(off) = x0;
    x.segment(off + 1, q - 1) = (vv.tail(q - 1) - x0 * l.tail(q - 1)) / l(0);
    off += q;
  }
  for (int p : dims.psd) {
    for (int j = 0; j < p; ++j) {
      for (int i = 0; i <= j; ++i) {
        const int k = off + j * (j + 1) / 2 + i;
        const double li = lambda(off + i * (i + 1) / 2 + i);
        const double lj = lambda(off + j * (j + 1) / 2 + j);
        x(k) = 2.0 * v(k) / (li + lj);
      }
    }
    off += svec_len(p);
  }
  return x;
}

}  // namespace paretoaro::conic::cones
