#include "paretoaro/robust/model.hpp"

#include <Eigen/Cholesky>

#include <cmath>

#include "paretoaro/common/error.hpp"
#include "paretoaro/rule/decision_rule.hpp"

namespace paretoaro::robust {

using conic::Cone;
using conic::LinExpr;

PolyExpr lift(const rule::Polynomial& p) {
  PolyExpr out(p.vars());
  for (const auto& [e, c] : p.terms()) out.add_term(e, LinExpr(c));
  return out;
}

AffineParts affine_parts(const PolyExpr& q) {
  AffineParts out;
  out.linear.assign(q.vars(), LinExpr());
  for (const auto& [e, c] : q.terms()) {
    const int d = rule::total_degree(e);
    if (d == 0) {
      out.constant += c;
    } else if (d == 1) {
      for (int j = 0; j < q.vars(); ++j) {
        if (e[j] == 1) out.linear[j] += c;
      }
    } else if (!c.terms.empty() || c.constant != 0.0) {
      fail(ErrorCode::kIncompatiblePlan, "constraint is not affine in u");
    }
  }
  return out;
}

RuleModel::RuleModel(int n, int vars, int degree, const Vector& center, const Vector& scale)
    : basis_(vars, degree), n_(n) {
  alpha_block_ = program_.add_block("alpha", Cone::kFree, n * basis_.size());
  const Vector m = center.size() == vars ? center : Vector::Zero(vars);
  const Vector h = scale.size() == vars ? scale : Vector::Ones(vars);
  // Column a holds the u-coefficients of prod_j ((u_j - m_j) / h_j)^a_j.
  const int nb = basis_.size();
  to_u_ = Matrix::Zero(nb, nb);
  for (int a = 0; a < nb; ++a) {
    const rule::Exponent& ea = basis_[a];
    for (int b = 0; b < nb; ++b) {
      const rule::Exponent& eb = basis_[b];
      double c = 1.0;
      for (int j = 0; j < vars && c != 0.0; ++j) {
        if (eb[j] > ea[j]) {
          c = 0.0;
          break;
        }
        double binom = 1.0;
        for (int t = 1; t <= eb[j]; ++t) binom = binom * (ea[j] - eb[j] + t) / t;
        c *= binom * std::pow(-m(j), ea[j] - eb[j]) / std::pow(h(j), ea[j]);
      }
      to_u_(b, a) = c;
    }
  }
}

int RuleModel::add_psd_block(const std::string& name, int order) {
  const int b = program_.add_block(name, Cone::kPsd, order);
  psd_blocks_.emplace_back(name, b);
  return b;
}

LinExpr RuleModel::alpha(int i, int a) const {
  LinExpr e;
  for (int c = 0; c < basis_.size(); ++c) {
    if (to_u_(a, c) != 0.0) e += LinExpr::variable(program_.index(alpha_block_, i * basis_.size() + c), to_u_(a, c));
  }
  return e;
}

Matrix RuleModel::coefficients(const Vector& primal) const {
  const int nb = basis_.size();
  Matrix beta(n_, nb);
  for (int i = 0; i < n_; ++i) {
    for (int a = 0; a < nb; ++a) beta(i, a) = primal(program_.index(alpha_block_, i * nb + a));
  }
  return beta * to_u_.transpose();
}

PolyExpr RuleModel::x(int i) const {
  PolyExpr p(vars());
  for (int a = 0; a < basis_.size(); ++a) p.add_term(basis_[a], alpha(i, a));
  return p;
}

PolyExpr RuleModel::combination(const Vector& w) const {
  require(w.size() == n_, ErrorCode::kDimensionMismatch, "weight vector length must equal n");
  PolyExpr p(vars());
  for (int a = 0; a < basis_.size(); ++a) {
    LinExpr c;
    for (int i = 0; i < n_; ++i) {
      if (w(i) != 0.0) c += w(i) * alpha(i, a);
    }
    p.add_term(basis_[a], c);
  }
  return p;
}

void RuleModel::add_robust_nonneg(const PolyExpr& q, const regions::Region& region, RobustMethod method,
                                  const std::string& label) {
  require(q.vars() == vars(), ErrorCode::kDimensionMismatch, "constraint and rule depend on different u");
  ++num_robust_;
  if (q.degree() == 0) {
    program_.add_less_equal(-q.coefficient(rule::Exponent(vars(), 0)));
    return;
  }
  switch (method) {
    case RobustMethod::kPolyhedralLp:
      add_linear_polyhedral(q, regions::as_polyhedron(region), label);
      return;
    case RobustMethod::kEllipsoidSoc:
      add_linear_ellipsoid(q, regions::as_ellipsoid(region), label);
      return;
    case RobustMethod::kMomentInterval: {
      const auto* iv = std::get_if<regions::Interval>(&region);
      require(iv != nullptr, ErrorCode::kIncompatiblePlan, "moment reformulation needs an interval region");
      add_moment_interval(q, *iv, label);
      return;
    }
    case RobustMethod::kSLemma:
      add_s_lemma(q, regions::as_ellipsoid(region), label);
      return;
    case RobustMethod::kSos:
      add_sos(q, region, label);
      return;
  }
}

void RuleModel::add_linear_polyhedral(const PolyExpr& q, const regions::Polyhedron& p, const std::string& label) {
  // q0 + g'u >= 0 on {P u <= h}  <=>  exists w >= 0: P'w = -g, h'w <= q0
  const AffineParts parts = affine_parts(q);
  const int rows = static_cast<int>(p.P.rows());
  const int w = program_.add_block(label + ".w", Cone::kNonNeg, rows);
  for (int j = 0; j < vars(); ++j) {
    LinExpr e = parts.linear[j];
    for (int r = 0; r < rows; ++r) {
      if (p.P(r, j) != 0.0) e += p.P(r, j) * program_.var(w, r);
    }
    program_.add_equality(e);
  }
  LinExpr hw = -parts.constant;
  for (int r = 0; r < rows; ++r) {
    if (p.q(r) != 0.0) hw += p.q(r) * program_.var(w, r);
  }
  program_.add_less_equal(hw);
}

void RuleModel::add_linear_ellipsoid(const PolyExpr& q, const regions::Ellipsoid& e, const std::string& label) {
  // min over the ellipsoid of q0 + g'u is q0 + g'c - |L^{-1} g| with E = L L'
  const AffineParts parts = affine_parts(q);
  const int v = vars();
  const Matrix L = Eigen::LLT<Matrix>(e.E).matrixL();
  const Matrix F = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(v, v));
  const int s = program_.add_block(label + ".soc", Cone::kSecondOrder, v + 1);
  LinExpr t = parts.constant;
  for (int j = 0; j < v; ++j) t += e.center(j) * parts.linear[j];
  program_.add_equality(program_.var(s, 0) - t);
  for (int r = 0; r < v; ++r) {
    LinExpr fr;
    for (int j = 0; j < v; ++j) {
      if (F(r, j) != 0.0) fr += F(r, j) * parts.linear[j];
    }
    program_.add_equality(program_.var(s, r + 1) - fr);
  }
}

void RuleModel::add_moment_interval(const PolyExpr& q, const regions::Interval& iv, const std::string& label) {
  // q(t) = c0 + l'zeta with zeta in Z. q >= 0 on Z iff
  // exists y: y_1 <= c0 and sum_i y_i A_i + C(l) PSD.
  const int deg = std::max(1, q.degree());
  const auto tf = regions::moment_interval_transform(iv.a, iv.b, deg);
  const auto lifted = rule::substitute_affine(q, tf);
  auto it = moment_cache_.find(deg);
  if (it == moment_cache_.end()) {
    it = moment_cache_.emplace(deg, regions::moment_dual(regions::build_moment_set(deg))).first;
  }
  const regions::MomentDual& md = it->second;
  const int order = static_cast<int>(md.A.front().rows());
  const int nad = 2 * order - 1;
  auto antidiagonals = [&](const Matrix& m) {
    Vector sums = Vector::Zero(nad);
    for (int c = 0; c < order; ++c) {
      for (int r = 0; r < order; ++r) sums(r + c) += m(r, c);
    }
    return sums;
  };
  // The A_i with vanishing anti-diagonal sums span exactly the matrices
  // orthogonal to every Hankel matrix, so their multipliers are eliminated and
  // only the anti-diagonal sums of S are constrained.
  std::vector<int> kept;
  std::vector<Vector> kept_sums;
  for (int i = 0; i < static_cast<int>(md.A.size()); ++i) {
    Vector sums = antidiagonals(md.A[i]);
    if (sums.cwiseAbs().maxCoeff() > 1e-12) {
      kept.push_back(i);
      kept_sums.push_back(std::move(sums));
    }
  }
  std::vector<Vector> c_sums;
  for (int j = 0; j < deg; ++j) c_sums.push_back(antidiagonals(md.C[j]));
  const int S = program_.add_block(label + ".S", Cone::kPsd, order);
  psd_blocks_.emplace_back(label + ".S", S);
  // y enters through y_i = (c0 - slack) / b_i when a single normalization
  // remains, which avoids a free variable.
  const bool single = kept.size() == 1 && md.b(kept[0]) != 0.0;
  std::vector<LinExpr> yexpr(kept.size());
  if (single) {
    const int sl = program_.add_block(label + ".slack", Cone::kNonNeg, 1);
    yexpr[0] = (lifted.constant - program_.var(sl, 0)) * (1.0 / md.b(kept[0]));
  } else {
    const int y = program_.add_block(label + ".y", Cone::kFree, static_cast<int>(kept.size()));
    LinExpr cap = -lifted.constant;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      yexpr[i] = program_.var(y, static_cast<int>(i));
      if (md.b(kept[i]) != 0.0) cap += md.b(kept[i]) * yexpr[i];
    }
    program_.add_less_equal(cap);
  }
  for (int d = 0; d < nad; ++d) {
    LinExpr e;
    for (int r = std::max(0, d - order + 1); r <= std::min(d, order - 1); ++r) e += program_.mat(S, r, d - r);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept_sums[i](d) != 0.0) e -= kept_sums[i](d) * yexpr[i];
    }
    for (int j = 0; j < deg; ++j) {
      if (c_sums[j](d) != 0.0) e -= c_sums[j](d) * lifted.linear[j];
    }
    program_.add_equality(e);
  }
}

void RuleModel::add_s_lemma(const PolyExpr& q, const regions::Ellipsoid& e, const std::string& label) {
  // q(u) - tau (1 - (u-c)'E(u-c)) is a nonnegative quadratic, i.e.
  // [[q0 - tau (1 - c'Ec), (g/2 - tau E c)'], [g/2 - tau E c, Q + tau E]] PSD.
  require(q.degree() <= 2, ErrorCode::kIncompatiblePlan, "S-lemma reformulation needs a quadratic constraint");
  const int v = vars();
  LinExpr q0;
  std::vector<LinExpr> g(v);
  std::vector<std::vector<LinExpr>> Q(v, std::vector<LinExpr>(v));
  for (const auto& [ex, c] : q.terms()) {
    std::vector<int> idx;
    for (int j = 0; j < v; ++j) {
      for (int r = 0; r < ex[j]; ++r) idx.push_back(j);
    }
    if (idx.empty()) {
      q0 += c;
    } else if (idx.size() == 1) {
      g[idx[0]] += c;
    } else if (idx[0] == idx[1]) {
      Q[idx[0]][idx[0]] += c;
    } else {
      Q[idx[0]][idx[1]] += 0.5 * c;
    }
  }
  const Vector Ec = e.E * e.center;
  const int tau = program_.add_block(label + ".tau", Cone::kNonNeg, 1);
  const int X = program_.add_block(label + ".X", Cone::kPsd, v + 1);
  psd_blocks_.emplace_back(label + ".X", X);
  // Multiplier of the unnormalized quadratic (u-c)'(u-c) scale; keeps tau of
  // the same size as the rule coefficients for balls of large radius.
  const LinExpr t = program_.var(tau) * (1.0 / e.E.diagonal().maxCoeff());
  program_.add_equality(program_.mat(X, 0, 0) - q0 + (1.0 - e.center.dot(Ec)) * t);
  for (int j = 0; j < v; ++j) program_.add_equality(program_.mat(X, 0, j + 1) - 0.5 * g[j] + Ec(j) * t);
  for (int j = 0; j < v; ++j) {
    for (int l = j; l < v; ++l) program_.add_equality(program_.mat(X, j + 1, l + 1) - Q[j][l] - e.E(j, l) * t);
  }
}

PolyExpr RuleModel::gram_polynomial(int half_degree, const std::string& label) {
  const rule::MonomialBasis b(vars(), half_degree);
  const int G = program_.add_block(label, Cone::kPsd, b.size());
  psd_blocks_.emplace_back(label, G);
  PolyExpr p(vars());
  for (int c = 0; c < b.size(); ++c) {
    for (int r = 0; r <= c; ++r) {
      rule::Exponent e(vars());
      for (int j = 0; j < vars(); ++j) e[j] = b[r][j] + b[c][j];
      p.add_term(e, (r == c ? 1.0 : 2.0) * program_.mat(G, r, c));
    }
  }
  return p;
}

void RuleModel::add_sos(const PolyExpr& q, const regions::Region& region, const std::string& label) {
  // q = sigma_0 - sum_i p_i sigma_i, with p_i <= 0 describing the region
  const std::string key = regions::to_json(region).dump();
  auto it = sos_sets_.find(key);
  if (it == sos_sets_.end()) {
    regions::Semialgebraic s = regions::to_semialgebraic(region);
    if (!regions::is_ellipsoidal(region)) {
      const regions::Box& b = *s.bounds;
      s = regions::add_compactness_certificate(s, b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs()).squaredNorm());
    }
    it = sos_sets_.emplace(key, std::move(s)).first;
  }
  const regions::Semialgebraic& s = it->second;
  std::vector<int> pdeg;
  for (const auto& p : s.polys) pdeg.push_back(p.degree());
  const int s0 = sigma0_degree(q.degree(), pdeg);
  PolyExpr residual = q - gram_polynomial(s0 / 2, label + ".sigma0");
  for (std::size_t i = 0; i < s.polys.size(); ++i) {
    const int di = multiplier_degree(s0, pdeg[i]);
    residual += gram_polynomial(di / 2, label + ".sigma" + std::to_string(i + 1)).times(s.polys[i]);
  }
  for (const auto& [e, c] : residual.terms()) program_.add_equality(c);
}

}  // namespace paretoaro::robust
