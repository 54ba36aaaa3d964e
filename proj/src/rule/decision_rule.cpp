#include "paretoaro/rule/decision_rule.hpp"

namespace paretoaro::rule {

PolynomialRule::PolynomialRule(MonomialBasis b, Matrix c) : basis(std::move(b)), coeffs(std::move(c)) {
  require(coeffs.cols() == basis.size(), ErrorCode::kDimensionMismatch, "coefficient columns must match basis size");
  require(coeffs.allFinite(), ErrorCode::kInvalidArgument, "rule coefficients must be finite");
}

Vector PolynomialRule::evaluate(const Vector& u) const {
  require(u.size() == basis.vars(), ErrorCode::kDimensionMismatch, "u has wrong dimension for rule");
  return coeffs * basis.evaluate(u);
}

Matrix PolynomialRule::gradient(const Vector& u) const {
  require(u.size() == basis.vars(), ErrorCode::kDimensionMismatch, "u has wrong dimension for rule");
  const int v = basis.vars();
  Matrix J = Matrix::Zero(coeffs.rows(), v);
  for (int a = 0; a < basis.size(); ++a) {
    const Exponent& e = basis[a];
    for (int j = 0; j < v; ++j) {
      if (e[j] == 0) continue;
      Exponent d = e;
      d[j] -= 1;
      const double dv = e[j] * monomial_value(d, u);
      J.col(j) += coeffs.col(a) * dv;
    }
  }
  return J;
}

Polynomial PolynomialRule::component(int i) const {
  Polynomial p(basis.vars());
  for (int a = 0; a < basis.size(); ++a) {
    if (coeffs(i, a) != 0.0) p.add_term(basis[a], coeffs(i, a));
  }
  return p;
}

Polynomial PolynomialRule::combination(const Vector& w) const {
  require(w.size() == coeffs.rows(), ErrorCode::kDimensionMismatch, "weight vector length must equal n");
  const Vector c = coeffs.transpose() * w;
  Polynomial p(basis.vars());
  for (int a = 0; a < basis.size(); ++a) p.add_term(basis[a], c(a));
  return p;
}

PolynomialRule operator+(const PolynomialRule& a, const PolynomialRule& b) {
  require(a.basis == b.basis && a.coeffs.rows() == b.coeffs.rows(), ErrorCode::kDimensionMismatch,
          "rules have different shapes");
  return PolynomialRule(a.basis, a.coeffs + b.coeffs);
}

molp::ObjectivePoint objective_curve(const PolynomialRule& rule, const molp::Molp& problem, const Vector& u) {
  require(rule.num_outputs() == problem.num_variables(), ErrorCode::kDimensionMismatch,
          "rule output size differs from number of variables");
  require(rule.basis.vars() == problem.num_objectives() - 1, ErrorCode::kDimensionMismatch,
          "rule must depend on k-1 objective values");
  return problem.objective_matrix() * rule.evaluate(u);
}

QuadraticRuleView QuadraticRuleView::from_rule(const PolynomialRule& rule) {
  require(rule.basis.degree() <= 2, ErrorCode::kUnsupportedShape, "quadratic view needs a rule of degree <= 2");
  const int v = rule.basis.vars();
  const int n = rule.num_outputs();
  QuadraticRuleView q;
  q.alpha0 = Vector::Zero(n);
  q.alpha1.assign(n, Vector::Zero(v));
  q.gamma.assign(n, Matrix::Zero(v, v));
  for (int a = 0; a < rule.basis.size(); ++a) {
    const Exponent& e = rule.basis[a];
    const int deg = total_degree(e);
    std::vector<int> idx;
    for (int j = 0; j < v; ++j) {
      for (int r = 0; r < e[j]; ++r) idx.push_back(j);
    }
    for (int i = 0; i < n; ++i) {
      const double c = rule.coeffs(i, a);
      if (deg == 0) {
        q.alpha0(i) = c;
      } else if (deg == 1) {
        q.alpha1[i](idx[0]) = c;
      } else if (idx[0] == idx[1]) {
        q.gamma[i](idx[0], idx[0]) = c;
      } else {
        q.gamma[i](idx[0], idx[1]) = 0.5 * c;
        q.gamma[i](idx[1], idx[0]) = 0.5 * c;
      }
    }
  }
  return q;
}

PolynomialRule QuadraticRuleView::to_rule() const {
  const int n = static_cast<int>(alpha0.size());
  require(n > 0, ErrorCode::kInvalidArgument, "empty quadratic rule");
  const int v = static_cast<int>(alpha1.at(0).size());
  MonomialBasis basis(v, 2);
  Matrix c = Matrix::Zero(n, basis.size());
  for (int a = 0; a < basis.size(); ++a) {
    const Exponent& e = basis[a];
    const int deg = total_degree(e);
    std::vector<int> idx;
    for (int j = 0; j < v; ++j) {
      for (int r = 0; r < e[j]; ++r) idx.push_back(j);
    }
    for (int i = 0; i < n; ++i) {
      if (deg == 0) {
        c(i, a) = alpha0(i);
      } else if (deg == 1) {
        c(i, a) = alpha1[i](idx[0]);
      } else if (idx[0] == idx[1]) {
        c(i, a) = gamma[i](idx[0], idx[0]);
      } else {
        // Gamma_ij = coef / 2 is exact in binary, so this round trip is too.
        c(i, a) = 2.0 * gamma[i](idx[0], idx[1]);
      }
    }
  }
  return PolynomialRule(basis, c);
}

nlohmann::json to_json(const PolynomialRule& rule) {
  nlohmann::json j;
  j["vars"] = rule.basis.vars();
  j["degree"] = rule.basis.degree();
  j["exponents"] = rule.basis.exponents();
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < rule.coeffs.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index a = 0; a < rule.coeffs.cols(); ++a) row.push_back(rule.coeffs(i, a));
    rows.push_back(std::move(row));
  }
  j["coeffs"] = std::move(rows);
  return j;
}

PolynomialRule rule_from_json(const nlohmann::json& j) {
  try {
    MonomialBasis basis(j.at("vars").get<int>(), j.at("degree").get<int>());
    if (j.contains("exponents") && j.at("exponents").get<std::vector<Exponent>>() != basis.exponents()) {
      fail(ErrorCode::kParseError, "rule exponents are not in graded-lex order");
    }
    const auto& rows = j.at("coeffs");
    Matrix c(static_cast<Eigen::Index>(rows.size()), basis.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto row = rows[i].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != basis.size()) fail(ErrorCode::kParseError, "rule row has wrong length");
      for (int a = 0; a < basis.size(); ++a) c(static_cast<Eigen::Index>(i), a) = row[a];
    }
    return PolynomialRule(std::move(basis), std::move(c));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("bad rule JSON: ") + e.what());
  }
}

}  // namespace paretoaro::rule
