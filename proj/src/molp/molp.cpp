#include "paretoaro/molp/molp.hpp"

#include <cmath>

#include "paretoaro/common/error.hpp"
#include "paretoaro/conic/solver.hpp"

namespace paretoaro::molp {

Matrix Molp::objective_matrix() const {
  Matrix C(num_objectives(), num_variables());
  for (int i = 0; i < num_objectives(); ++i) C.row(i) = objectives[i].transpose();
  return C;
}

std::vector<std::string> validate(const Molp& p) {
  std::vector<std::string> v;
  const auto m = p.A.rows();
  const auto n = p.A.cols();
  if (p.num_objectives() < 2) v.push_back("k must be >= 2");
  if (m < 1) v.push_back("A must have at least one row (m >= 1)");
  if (n < 1) v.push_back("A must have at least one column (n >= 1)");
  if (p.b.size() != m) v.push_back("b has length " + std::to_string(p.b.size()) + ", expected " + std::to_string(m));
  for (int i = 0; i < p.num_objectives(); ++i) {
    if (p.objectives[i].size() != n) {
      v.push_back("objectives[" + std::to_string(i) + "] has length " + std::to_string(p.objectives[i].size()) +
                  ", expected " + std::to_string(n));
    }
    for (Eigen::Index j = 0; j < p.objectives[i].size(); ++j) {
      if (!std::isfinite(p.objectives[i](j))) {
        v.push_back("objectives[" + std::to_string(i) + "][" + std::to_string(j) + "] not finite");
      }
    }
  }
  if (!p.names.empty() && static_cast<int>(p.names.size()) != p.num_objectives()) {
    v.push_back("names has " + std::to_string(p.names.size()) + " labels for " + std::to_string(p.num_objectives()) +
                " objectives");
  }
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.A.cols(); ++j) {
      if (!std::isfinite(p.A(i, j))) v.push_back("A[" + std::to_string(i) + "][" + std::to_string(j) + "] not finite");
    }
  }
  for (Eigen::Index i = 0; i < p.b.size(); ++i) {
    if (!std::isfinite(p.b(i))) v.push_back("b[" + std::to_string(i) + "] not finite");
  }
  return v;
}

namespace {

Vector vector_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) fail(ErrorCode::kParseError, field + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(ErrorCode::kParseError, field + " must contain numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

}  // namespace

Molp from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorCode::kParseError, "problem must be a JSON object");
  for (const char* key : {"A", "b", "objectives"}) {
    if (!j.contains(key)) fail(ErrorCode::kParseError, std::string("problem is missing '") + key + "'");
  }
  Molp p;
  const auto& rows = j.at("A");
  if (!rows.is_array()) fail(ErrorCode::kParseError, "A must be an array of rows");
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  p.A.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Vector row = vector_from_json(rows[r], "A[" + std::to_string(r) + "]");
    if (static_cast<std::size_t>(row.size()) != n) fail(ErrorCode::kParseError, "A rows must have equal length");
    p.A.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  p.b = vector_from_json(j.at("b"), "b");
  for (std::size_t i = 0; i < j.at("objectives").size(); ++i) {
    p.objectives.push_back(vector_from_json(j.at("objectives")[i], "objectives[" + std::to_string(i) + "]"));
  }
  if (j.contains("names")) p.names = j.at("names").get<std::vector<std::string>>();
  return p;
}

nlohmann::json to_json(const Molp& p) {
  nlohmann::json j;
  j["A"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < p.A.rows(); ++r) j["A"].push_back(vector_to_json(p.A.row(r).transpose()));
  j["b"] = vector_to_json(p.b);
  j["objectives"] = nlohmann::json::array();
  for (const auto& c : p.objectives) j["objectives"].push_back(vector_to_json(c));
  if (!p.names.empty()) j["names"] = p.names;
  return j;
}

std::string to_string(ScalarizationStatus s) {
  switch (s) {
    case ScalarizationStatus::kOptimal: return "optimal";
    case ScalarizationStatus::kInfeasible: return "infeasible";
    case ScalarizationStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

namespace {

// min obj'x  s.t.  rows x <= rhs, x free.
conic::ConicSolution solve_lp(const Matrix& rows, const Vector& rhs, const Vector& obj) {
  using conic::LinExpr;
  conic::ConicProgram lp;
  const int n = static_cast<int>(rows.cols());
  const int x = lp.add_block("x", conic::Cone::kFree, n);
  const int s = lp.add_block("s", conic::Cone::kNonNeg, static_cast<int>(rows.rows()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    LinExpr row = lp.var(s, static_cast<int>(r));
    for (int j = 0; j < n; ++j) {
      if (rows(r, j) != 0.0) row += LinExpr::variable(lp.index(x, j), rows(r, j));
    }
    lp.add_equality(row, rhs(r));
  }
  LinExpr o;
  for (int j = 0; j < n; ++j) o += LinExpr::variable(lp.index(x, j), obj(j));
  lp.set_objective(o);
  conic::SolverOptions opt;
  opt.tol = 1e-9;
  return conic::solve(lp, opt);
}

}  // namespace

ScalarizationResult scalarize_epsilon_constraint(const Molp& p, const Vector& u) {
  const int k = p.num_objectives();
  require(u.size() == k - 1, ErrorCode::kDimensionMismatch, "u must have k-1 entries");
  require(u.allFinite(), ErrorCode::kInvalidArgument, "u must be finite");
  const int m = p.num_constraints();
  const int n = p.num_variables();
  Matrix rows(m + k - 1, n);
  Vector rhs(m + k - 1);
  rows.topRows(m) = p.A;
  rhs.head(m) = p.b;
  for (int i = 0; i + 1 < k; ++i) {
    rows.row(m + i) = p.objectives[i].transpose();
    rhs(m + i) = u(i);
  }
  const auto sol = solve_lp(rows, rhs, p.objectives[k - 1]);
  ScalarizationResult res;
  switch (sol.status) {
    case conic::Status::kOptimal:
    case conic::Status::kNearOptimal: break;
    case conic::Status::kInfeasible: res.status = ScalarizationStatus::kInfeasible; return res;
    case conic::Status::kUnbounded: res.status = ScalarizationStatus::kUnbounded; return res;
    case conic::Status::kStalled: fail(ErrorCode::kSolverFailure, "scalarization LP did not converge");
  }
  res.status = ScalarizationStatus::kOptimal;
  Vector x = sol.primal.head(n);
  res.x = x;
  Vector f(k);
  for (int i = 0; i < k; ++i) f(i) = p.objectives[i].dot(x);
  res.f = f;
  return res;
}

std::vector<FrontPoint> pareto_front_oracle(const Molp& p, const std::vector<Vector>& grid) {
  require(!grid.empty(), ErrorCode::kInvalidArgument, "oracle grid must be nonempty");
  std::vector<FrontPoint> out;
  out.reserve(grid.size());
  for (const auto& u : grid) {
    const auto r = scalarize_epsilon_constraint(p, u);
    FrontPoint pt;
    pt.u = u;
    pt.feasible = r.status == ScalarizationStatus::kOptimal;
    if (pt.feasible) pt.value = (*r.f)(p.num_objectives() - 1);
    out.push_back(std::move(pt));
  }
  return out;
}

std::string to_string(Dominance d) {
  switch (d) {
    case Dominance::kStrong: return "strong";
    case Dominance::kWeak: return "weak";
    case Dominance::kNone: return "none";
  }
  return "?";
}

Dominance dominates(const ObjectivePoint& f1, const ObjectivePoint& f2) {
  require(f1.size() == f2.size(), ErrorCode::kDimensionMismatch, "objective points differ in length");
  if ((f1.array() < f2.array()).all()) return Dominance::kStrong;
  if ((f1.array() <= f2.array()).all() && f1 != f2) return Dominance::kWeak;
  return Dominance::kNone;
}

std::optional<std::pair<double, double>> objective_range(const Molp& p, int objective) {
  const Vector& c = p.objectives.at(objective);
  const auto lo = solve_lp(p.A, p.b, c);
  const auto hi = solve_lp(p.A, p.b, -c);
  if (lo.status == conic::Status::kInfeasible) fail(ErrorCode::kInfeasible, "feasible set is empty");
  if (!conic::solved(lo.status) || !conic::solved(hi.status)) return std::nullopt;
  return std::make_pair(lo.primal_objective, -hi.primal_objective);
}

}  // namespace paretoaro::molp
