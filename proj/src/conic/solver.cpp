#include "paretoaro/conic/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <vector>

#include "paretoaro/common/error.hpp"
#include "paretoaro/conic/cones.hpp"

namespace paretoaro::conic {

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kNearOptimal: return "near_optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kStalled: return "stalled";
  }
  return "?";
}

double ConicSolution::value(const LinExpr& e) const {
  double v = e.constant;
  for (const auto& [k, c] : e.terms) v += c * primal(k);
  return v;
}

Matrix ConicSolution::matrix(const ConicProgram& program, int block) const {
  const Block& b = program.block(block);
  if (b.cone != Cone::kPsd) return primal.segment(b.offset, b.size);
  Matrix m(b.size, b.size);
  for (int j = 0; j < b.size; ++j) {
    for (int i = 0; i <= j; ++i) m(i, j) = m(j, i) = primal(program.entry(block, i, j));
  }
  return m;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
const double kSqrt2 = std::sqrt(2.0);

// Program rewritten in solver coordinates:
//   min cF'xF + cK'xK  s.t.  AF xF + AK xK = b,  xK = s in K.
struct Internal {
  cones::Dims dims;
  int nF = 0;
  int nK = 0;
  int ny = 0;
  SpMat AF, AK;
  Matrix AF_dense;
  Vector b, cF, cK;
  Vector row_scale;
  // For each program scalar: solver slot (free or cone) and the factor that
  // maps the program value to the solver value.
  std::vector<int> slot;
  std::vector<bool> is_free;
  std::vector<double> factor;
  std::vector<int> kept_rows;
  bool trivially_infeasible = false;
};

Internal lower(const ConicProgram& p) {
  Internal in;
  const int n = p.num_scalars();
  in.slot.assign(n, -1);
  in.is_free.assign(n, false);
  in.factor.assign(n, 1.0);

  for (const auto& blk : p.blocks()) {
    if (blk.cone == Cone::kFree) {
      for (int i = 0; i < blk.size; ++i) {
        in.slot[blk.offset + i] = in.nF++;
        in.is_free[blk.offset + i] = true;
      }
    }
  }
  for (const auto& blk : p.blocks()) {
    if (blk.cone == Cone::kNonNeg) {
      for (int i = 0; i < blk.size; ++i) in.slot[blk.offset + i] = in.nK++;
      in.dims.nonneg += blk.size;
    }
  }
  for (const auto& blk : p.blocks()) {
    if (blk.cone == Cone::kSecondOrder) {
      for (int i = 0; i < blk.size; ++i) in.slot[blk.offset + i] = in.nK++;
      in.dims.soc.push_back(blk.size);
    }
  }
  for (const auto& blk : p.blocks()) {
    if (blk.cone == Cone::kPsd) {
      for (int j = 0; j < blk.size; ++j) {
        for (int i = 0; i <= j; ++i) {
          const int idx = blk.offset + j * (j + 1) / 2 + i;
          in.slot[idx] = in.nK + j * (j + 1) / 2 + i;
          in.factor[idx] = (i == j) ? 1.0 : kSqrt2;
        }
      }
      in.nK += blk.length();
      in.dims.psd.push_back(blk.size);
    }
  }

  std::vector<Triplet> tf, tk;
  std::vector<double> rhs;
  for (std::size_t r = 0; r < p.equalities().size(); ++r) {
    const auto& eq = p.equalities()[r];
    double mx = 0.0;
    for (const auto& [k, v] : eq.terms) mx = std::max(mx, std::abs(v / in.factor[k]));
    if (mx == 0.0) {
      if (std::abs(eq.rhs) > 1e-12) in.trivially_infeasible = true;
      continue;
    }
    const int row = in.ny++;
    const double scale = 1.0 / mx;
    for (const auto& [k, v] : eq.terms) {
      const double coef = scale * v / in.factor[k];
      if (in.is_free[k]) {
        tf.emplace_back(row, in.slot[k], coef);
      } else {
        tk.emplace_back(row, in.slot[k], coef);
      }
    }
    rhs.push_back(scale * eq.rhs);
    in.kept_rows.push_back(static_cast<int>(r));
  }
  in.row_scale.resize(in.ny);
  for (int i = 0; i < in.ny; ++i) {
    const auto& eq = p.equalities()[in.kept_rows[i]];
    double mx = 0.0;
    for (const auto& [k, v] : eq.terms) mx = std::max(mx, std::abs(v / in.factor[k]));
    in.row_scale(i) = 1.0 / mx;
  }
  in.AF.resize(in.ny, in.nF);
  in.AF.setFromTriplets(tf.begin(), tf.end());
  in.AK.resize(in.ny, in.nK);
  in.AK.setFromTriplets(tk.begin(), tk.end());
  in.AF_dense = Matrix(in.AF);
  in.b = Eigen::Map<Vector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  in.cF = Vector::Zero(in.nF);
  in.cK = Vector::Zero(in.nK);
  for (const auto& [k, v] : p.objective()) {
    if (in.is_free[k]) {
      in.cF(in.slot[k]) += v / in.factor[k];
    } else {
      in.cK(in.slot[k]) += v / in.factor[k];
    }
  }
  return in;
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

// Factorization of the Newton system
//   AF' dy = r1F,  AK' dy - dz = r1K,  AF dxF + AK dxK = r2,  -dxK - Theta dz = r3
// through the Schur complements M = AK Theta AK' and S = AF' M^-1 AF, with
// iterative refinement against the full equations and a pivoted augmented
// fallback.
class NewtonSystem {
 public:
  NewtonSystem(const Internal& in, const cones::Dims& dims, const cones::Scaling& sc)
      : in_(in), dims_(dims), sc_(sc) {
    theta_ = build_theta();
    SpMat M = in.AK * theta_ * SpMat(in.AK.transpose());
    // Relative diagonal shift keeps M definite when rows are dependent. Rows
    // without cone variables (M_ii = 0) get a shift tied to the largest
    // diagonal; refinement removes the perturbation.
    double max_diag = 0.0;
    for (int i = 0; i < M.rows(); ++i) max_diag = std::max(max_diag, std::abs(M.coeff(i, i)));
    std::vector<Triplet> shift;
    for (int i = 0; i < M.rows(); ++i) {
      const double d = std::abs(M.coeff(i, i));
      shift.emplace_back(i, i, d > 0.0 ? 1e-14 * d + 1e-300 : std::max(1e-10 * max_diag, 1e-300));
    }
    SpMat reg(in.ny, in.ny);
    reg.setFromTriplets(shift.begin(), shift.end());
    M += reg;
    M.makeCompressed();
    M_ = M;
    ldlt_.compute(M);
    if (ldlt_.info() != Eigen::Success) fail(ErrorCode::kNumericalBreakdown, "normal matrix factorization failed");
    if (in.nF > 0) {
      MinvAF_ = ldlt_.solve(in.AF_dense);
      Matrix S = in.AF_dense.transpose() * MinvAF_;
      S = 0.5 * (S + S.transpose());
      S.diagonal() += 1e-14 * S.diagonal().cwiseAbs() + Vector::Constant(S.rows(), 1e-300);
      schur_.compute(S);
      if (schur_.info() != Eigen::Success) fail(ErrorCode::kNumericalBreakdown, "Schur complement factorization failed");
    }
  }

  struct Sol {
    Vector xF, xK, y, z;
  };

  Sol solve(const Vector& r1F, const Vector& r1K, const Vector& r2, const Vector& r3) const {
    auto [s, err] = refined(r1F, r1K, r2, r3, false);
    // The Schur complement loses accuracy once free variables are basic and
    // M is nearly singular; the pivoted augmented system then takes over.
    if (err > 1e-9 && in_.nF > 0 && build_augmented()) {
      auto [s2, err2] = refined(r1F, r1K, r2, r3, true);
      if (err2 < err) return s2;
    }
    return s;
  }

 private:
  std::pair<Sol, double> refined(const Vector& r1F, const Vector& r1K, const Vector& r2, const Vector& r3,
                                 bool augmented) const {
    Sol s = solve_once(r1F, r1K, r2, r3, augmented);
    double prev = std::numeric_limits<double>::infinity();
    const double n1F = 1.0 + inf_norm(r1F), n1K = 1.0 + inf_norm(r1K), n2 = 1.0 + inf_norm(r2),
                 n3 = 1.0 + inf_norm(r3);
    for (int round = 0;; ++round) {
      const Vector e1F = r1F - in_.AF.transpose() * s.y;
      const Vector e1K = r1K - (in_.AK.transpose() * s.y - s.z);
      const Vector e2 = r2 - (in_.AF * s.xF + in_.AK * s.xK);
      const Vector e3 = r3 - (-s.xK - theta_ * s.z);
      const double err =
          std::max({inf_norm(e1F) / n1F, inf_norm(e1K) / n1K, inf_norm(e2) / n2, inf_norm(e3) / n3});
      if (round == 8 || err <= 1e-15 || err >= 0.5 * prev || !std::isfinite(err)) {
        return {std::move(s), std::isfinite(err) ? err : std::numeric_limits<double>::infinity()};
      }
      prev = err;
      Sol c = solve_once(e1F, e1K, e2, e3, augmented);
      s.xF += c.xF;
      s.xK += c.xK;
      s.y += c.y;
      s.z += c.z;
    }
  }

  // [-M AF; AF' 0] factored with pivoting; false when singular.
  bool build_augmented() const {
    if (lu_state_ == 0) {
      std::vector<Triplet> t;
      for (int k = 0; k < M_.outerSize(); ++k) {
        for (SpMat::InnerIterator it(M_, k); it; ++it) t.emplace_back(it.row(), it.col(), -it.value());
      }
      for (int k = 0; k < in_.AF.outerSize(); ++k) {
        for (SpMat::InnerIterator it(in_.AF, k); it; ++it) {
          t.emplace_back(it.row(), in_.ny + it.col(), it.value());
          t.emplace_back(in_.ny + it.col(), it.row(), it.value());
        }
      }
      SpMat K(in_.ny + in_.nF, in_.ny + in_.nF);
      K.setFromTriplets(t.begin(), t.end());
      K.makeCompressed();
      lu_.analyzePattern(K);
      lu_.factorize(K);
      lu_state_ = lu_.info() == Eigen::Success ? 1 : -1;
    }
    return lu_state_ == 1;
  }

  SpMat build_theta() const {
    std::vector<Triplet> t;
    const int nn = dims_.nonneg;
    for (int i = 0; i < nn; ++i) t.emplace_back(i, i, sc_.nonneg_w(i) * sc_.nonneg_w(i));
    int off = nn;
    std::size_t k = 0;
    auto add_block = [&](int len) {
      const Matrix th = sc_.W[k].transpose() * sc_.W[k];
      for (int j = 0; j < len; ++j) {
        for (int i = 0; i < len; ++i) {
          if (th(i, j) != 0.0) t.emplace_back(off + i, off + j, th(i, j));
        }
      }
      off += len;
      ++k;
    };
    for (int q : dims_.soc) add_block(q);
    for (int p : dims_.psd) add_block(p * (p + 1) / 2);
    SpMat th(in_.nK, in_.nK);
    th.setFromTriplets(t.begin(), t.end());
    return th;
  }

  Sol solve_once(const Vector& r1F, const Vector& r1K, const Vector& r2, const Vector& r3, bool augmented) const {
    Sol s;
    const Vector q = r2 + in_.AK * (r3 - theta_ * r1K);
    if (augmented) {
      Vector rhs(in_.ny + in_.nF);
      rhs << q, r1F;
      const Vector sol = lu_.solve(rhs);
      s.y = sol.head(in_.ny);
      s.xF = sol.tail(in_.nF);
    } else if (in_.nF > 0) {
      const Vector Minv_q = ldlt_.solve(q);
      const Vector rhs = r1F + in_.AF_dense.transpose() * Minv_q;
      s.xF = schur_.solve(rhs);
      s.y = MinvAF_ * s.xF - Minv_q;
    } else {
      s.xF = Vector::Zero(0);
      s.y = ldlt_.solve(-q);
    }
    s.z = in_.AK.transpose() * s.y - r1K;
    s.xK = -r3 - theta_ * s.z;
    return s;
  }

  const Internal& in_;
  const cones::Dims& dims_;
  const cones::Scaling& sc_;
  SpMat theta_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  SpMat M_;
  mutable Eigen::SparseLU<SpMat> lu_;
  mutable int lu_state_ = 0;
  Matrix MinvAF_;
  Eigen::LDLT<Matrix> schur_;
};

bool all_finite(const Vector& v) { return v.allFinite(); }

// Relative equality residual max_r |a_r'x - b_r| / (1 + |b_r| + sum |a_ri x_i|).
double equality_residual(const ConicProgram& p, const Vector& x) {
  double worst = 0.0;
  for (const auto& eq : p.equalities()) {
    double lhs = 0.0, size = 1.0 + std::abs(eq.rhs);
    for (const auto& [k, a] : eq.terms) {
      lhs += a * x(k);
      size += std::abs(a * x(k));
    }
    worst = std::max(worst, std::abs(lhs - eq.rhs) / size);
  }
  return worst;
}

// Euclidean projection of each block of x onto its cone, in the program's
// coordinates (PSD blocks hold the upper triangle of X).
void project_cones(const ConicProgram& p, Vector& x) {
  for (const auto& b : p.blocks()) {
    auto seg = x.segment(b.offset, b.length());
    switch (b.cone) {
      case Cone::kFree: break;
      case Cone::kNonNeg: seg = seg.cwiseMax(0.0); break;
      case Cone::kSecondOrder: {
        const double t = seg(0), n = seg.tail(b.size - 1).norm();
        if (n <= t) break;
        if (n <= -t) {
          seg.setZero();
          break;
        }
        const double a = 0.5 * (t + n);
        seg.tail(b.size - 1) *= a / n;
        seg(0) = a;
        break;
      }
      case Cone::kPsd: {
        Matrix m(b.size, b.size);
        for (int j = 0; j < b.size; ++j) {
          for (int i = 0; i <= j; ++i) m(i, j) = m(j, i) = seg(j * (j + 1) / 2 + i);
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        if (es.eigenvalues().minCoeff() >= 0.0) break;
        m = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
        for (int j = 0; j < b.size; ++j) {
          for (int i = 0; i <= j; ++i) seg(j * (j + 1) / 2 + i) = m(i, j);
        }
        break;
      }
    }
  }
}

// The interior-point iterate meets the tolerance on the equilibrated data;
// on programs without interior points the equalities can be off by more in
// the original units. Alternating projections onto {A x = b, c'x fixed} and
// the cone, ending in the cone, reduce that residual; the result is kept
// only when it is lower than before.
void polish_primal(const ConicProgram& p, Vector& x, double tol) {
  const int m = p.num_equalities();
  const double before = equality_residual(p, x);
  if (m == 0 || before <= 0.1 * tol) return;
  // the objective row holds c'x at its current value so the gap is kept
  std::vector<Eigen::Triplet<double>> t;
  Vector b(m + 1);
  for (int r = 0; r < m; ++r) {
    for (const auto& [k, a] : p.equalities()[r].terms) t.emplace_back(r, k, a);
    b(r) = p.equalities()[r].rhs;
  }
  b(m) = 0.0;
  for (const auto& [k, c] : p.objective()) {
    t.emplace_back(m, k, c);
    b(m) += c * x(k);
  }
  SpMat A(m + 1, p.num_scalars());
  A.setFromTriplets(t.begin(), t.end());
  SpMat normal = A * A.transpose();
  double diag = 0.0;
  for (int r = 0; r <= m; ++r) diag = std::max(diag, normal.coeff(r, r));
  // dependent or empty rows make A A' singular
  for (int r = 0; r <= m; ++r) normal.coeffRef(r, r) += 1e-13 * std::max(diag, 1.0);
  Eigen::SimplicialLDLT<SpMat> ldlt(normal);
  if (ldlt.info() != Eigen::Success) return;
  Vector y = x;
  double after = before;
  for (int round = 0; round < 200 && after > 0.1 * tol; ++round) {
    for (int pass = 0; pass < 2; ++pass) y += A.transpose() * ldlt.solve(b - A * y);
    project_cones(p, y);
    if (!y.allFinite()) return;
    after = equality_residual(p, y);
  }
  if (after < before) x = y;
}

}  // namespace

ConicSolution solve(const ConicProgram& program, const SolverOptions& options) {
  const auto issues = program.validate();
  require(issues.empty(), ErrorCode::kInvalidArgument, issues.empty() ? "" : issues.front());

  Internal in = lower(program);
  ConicSolution out;
  out.primal = Vector::Zero(program.num_scalars());
  out.dual = Vector::Zero(program.num_equalities());
  if (in.trivially_infeasible) {
    out.status = Status::kInfeasible;
    return out;
  }

  const cones::Dims& dims = in.dims;
  const int deg = dims.degree();
  const Vector e = cones::identity(dims);

  Vector xF = Vector::Zero(in.nF), xK = Vector::Zero(in.nK), y = Vector::Zero(in.ny);
  Vector s = e, z = e;
  double tau = 1.0, kappa = 1.0;

  const double nb = 1.0 + inf_norm(in.b);
  const double nc = 1.0 + std::max(inf_norm(in.cF), inf_norm(in.cK));

  auto objective_terms = [&](const Vector& vF, const Vector& vK) { return in.cF.dot(vF) + in.cK.dot(vK); };

  Status status = Status::kStalled;
  double pres = 0, dres = 0, gap = 0, pobj = 0, dobj = 0;
  int it = 0;
  int tiny_steps = 0;
  // Best iterate by the worst of the three criteria, kept for problems
  // without interior points where the final iterations lose accuracy.
  struct Snapshot {
    Vector xF, xK, y, z, s;
    double tau = 1, kappa = 1, pres = 0, dres = 0, gap = 0, merit = std::numeric_limits<double>::infinity();
  } best;
  // Scaling at the current iterate; computing it also certifies that s and z
  // are interior.
  std::optional<cones::Scaling> scaling;
  for (; it <= options.max_iter; ++it) {
    // Residuals of the homogeneous embedding.
    const Vector rxF = in.AF.transpose() * y + in.cF * tau;
    const Vector rxK = in.AK.transpose() * y - z + in.cK * tau;
    const Vector ry = -(in.AF * xF + in.AK * xK) + in.b * tau;
    const Vector rz = s - xK;
    const double cx = objective_terms(xF, xK);
    const double by = in.b.dot(y);
    const double rt = kappa + cx + by;

    pobj = cx / tau;
    dobj = -by / tau;
    // Residuals relative to the size of the terms they balance, so that
    // diverging multipliers on problems without interior points do not
    // swamp the measure.
    const double n_ax = std::max(inf_norm(in.AF * xF + in.AK * xK), inf_norm(s)) / tau;
    const double n_aty = std::max({inf_norm(in.AF.transpose() * y), inf_norm(in.AK.transpose() * y), inf_norm(z)}) / tau;
    pres = std::max(inf_norm(ry), inf_norm(rz)) / tau / (nb + n_ax);
    dres = std::max(inf_norm(rxF), inf_norm(rxK)) / tau / (nc + n_aty);
    const double sz = s.dot(z) / (tau * tau);
    gap = std::max(std::abs(pobj - dobj), std::abs(sz)) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (options.verbose) {
      std::cerr << "it " << it << " pobj " << pobj << " dobj " << dobj << " pres " << pres << " dres " << dres
                << " gap " << gap << " tau " << tau << " kappa " << kappa << " |y| " << inf_norm(y) / tau << "\n";
    }
    const double merit = std::max({pres, dres, gap});
    if (merit < best.merit) best = Snapshot{xF, xK, y, z, s, tau, kappa, pres, dres, gap, merit};
    if (pres <= options.tol && dres <= options.tol && gap <= options.tol) {
      status = Status::kOptimal;
      break;
    }
    // Infeasibility certificates.
    if (by < 0) {
      const double res = std::max(inf_norm(in.AF.transpose() * y), inf_norm(in.AK.transpose() * y - z)) / nc;
      if (res <= options.tol * (-by)) {
        status = Status::kInfeasible;
        break;
      }
    }
    if (cx < 0) {
      const double res = std::max(inf_norm(in.AF * xF + in.AK * xK), inf_norm(s - xK)) / nb;
      if (res <= options.tol * (-cx)) {
        status = Status::kUnbounded;
        break;
      }
    }
    if (it == options.max_iter || tiny_steps >= 5) break;

    const double mu = (s.dot(z) + tau * kappa) / (deg + 1);
    std::optional<NewtonSystem> system;
    try {
      if (!scaling) scaling.emplace(cones::nt_scaling(dims, s, z));
      system.emplace(in, dims, *scaling);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kNumericalBreakdown) throw;
      break;
    }
    const cones::Scaling& sc = *scaling;
    const Vector& lam = sc.lambda;
    const NewtonSystem& kkt = *system;

    const NewtonSystem::Sol d1 =
        kkt.solve(-in.cF, -in.cK, in.b, Vector::Zero(in.nK));
    const double denom_base = objective_terms(d1.xF, d1.xK) + in.b.dot(d1.y);

    struct Dir {
      NewtonSystem::Sol d;
      double dtau, dkappa;
      Vector ds_scaled, dz_scaled;
    };
    auto direction = [&](double sigma, const Vector& ds_target, double dk_target) {
      const double f = 1.0 - sigma;
      const Vector r3 = -f * rz - cones::apply_W_transpose(dims, sc, cones::jordan_solve(dims, lam, ds_target));
      NewtonSystem::Sol d2 = kkt.solve(-f * rxF, -f * rxK, f * ry, r3);
      const double num = -f * rt - dk_target / tau - (objective_terms(d2.xF, d2.xK) + in.b.dot(d2.y));
      const double den = -kappa / tau + denom_base;
      Dir dir;
      dir.dtau = num / den;
      d2.xF += dir.dtau * d1.xF;
      d2.xK += dir.dtau * d1.xK;
      d2.y += dir.dtau * d1.y;
      d2.z += dir.dtau * d1.z;
      dir.dkappa = (dk_target - kappa * dir.dtau) / tau;
      dir.dz_scaled = cones::apply_W(dims, sc, d2.z);
      dir.ds_scaled = cones::jordan_solve(dims, lam, ds_target) - dir.dz_scaled;
      dir.d = std::move(d2);
      return dir;
    };
    auto step_length = [&](const Dir& dir) {
      double a = std::min(cones::max_step(dims, lam, dir.ds_scaled), cones::max_step(dims, lam, dir.dz_scaled));
      if (dir.dtau < 0) a = std::min(a, -tau / dir.dtau);
      if (dir.dkappa < 0) a = std::min(a, -kappa / dir.dkappa);
      return a;
    };

    const Vector lam_sq = cones::jordan(dims, lam, lam);
    const Dir aff = direction(0.0, -lam_sq, -tau * kappa);
    const double alpha_aff = std::min(1.0, step_length(aff));
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    const Vector corr = cones::jordan(dims, aff.ds_scaled, aff.dz_scaled);
    const Dir cmb = direction(sigma, -lam_sq - corr + sigma * mu * e, -tau * kappa - aff.dtau * aff.dkappa + sigma * mu);
    double alpha = std::min(1.0, 0.99 * step_length(cmb));
    if (!std::isfinite(alpha) || !all_finite(cmb.d.xK) || !all_finite(cmb.d.y)) break;
    const Vector ds = cones::apply_W_transpose(dims, sc, cmb.ds_scaled);
    // Rounding can push a long step out of the cone; shorten it until the
    // new iterate admits a scaling.
    std::optional<cones::Scaling> next;
    for (int tries = 0; tries < 30 && !next; ++tries, alpha *= 0.5) {
      try {
        next.emplace(cones::nt_scaling(dims, s + alpha * ds, z + alpha * cmb.d.z));
      } catch (const Error& err) {
        if (err.code() != ErrorCode::kNumericalBreakdown) throw;
      }
      if (next) break;
    }
    if (!next) break;
    tiny_steps = alpha < 1e-10 ? tiny_steps + 1 : 0;

    xF += alpha * cmb.d.xF;
    xK += alpha * cmb.d.xK;
    y += alpha * cmb.d.y;
    z += alpha * cmb.d.z;
    s += alpha * ds;
    tau += alpha * cmb.dtau;
    kappa += alpha * cmb.dkappa;
    scaling = std::move(next);
  }

  if (status == Status::kStalled && std::isfinite(best.merit)) {
    xF = best.xF;
    xK = best.xK;
    y = best.y;
    z = best.z;
    s = best.s;
    tau = best.tau;
    kappa = best.kappa;
    pres = best.pres;
    dres = best.dres;
    gap = best.gap;
    if (best.merit <= options.reduced_tol) status = Status::kNearOptimal;
  }
  out.status = status;
  out.iterations = it;
  out.primal_residual = pres;
  out.dual_residual = dres;
  out.gap = gap;
  const double scale = (status == Status::kInfeasible || status == Status::kUnbounded) ? 1.0 : 1.0 / tau;
  for (int k = 0; k < program.num_scalars(); ++k) {
    const double v = in.is_free[k] ? xF(in.slot[k]) : s(in.slot[k]);
    out.primal(k) = scale * v / in.factor[k];
  }
  if (solved(status)) polish_primal(program, out.primal, options.tol);
  // Solver multiplier y enters as A'y + c = z; report the conventional sign.
  for (int i = 0; i < in.ny; ++i) out.dual(in.kept_rows[i]) = -scale * y(i) * in.row_scale(i);
  out.primal_objective = program.objective_constant();
  for (const auto& [k, c] : program.objective()) out.primal_objective += c * out.primal(k);
  out.dual_objective = -scale * in.b.dot(y) + program.objective_constant();
  return out;
}

}  // namespace paretoaro::conic
