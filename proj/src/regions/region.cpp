#include "paretoaro/regions/region.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "paretoaro/common/error.hpp"
#include "paretoaro/conic/solver.hpp"

namespace paretoaro::regions {

namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

// max obj'u s.t. P u <= q; nullopt when unbounded.
std::optional<double> lp_max(const Polyhedron& p, const Vector& obj) {
  conic::ConicProgram lp;
  const int n = static_cast<int>(p.P.cols());
  const int u = lp.add_block("u", conic::Cone::kFree, n);
  const int s = lp.add_block("s", conic::Cone::kNonNeg, static_cast<int>(p.P.rows()));
  for (Eigen::Index r = 0; r < p.P.rows(); ++r) {
    conic::LinExpr row = lp.var(s, static_cast<int>(r));
    for (int j = 0; j < n; ++j) row += p.P(r, j) * lp.var(u, j);
    lp.add_equality(row, p.q(r));
  }
  conic::LinExpr o;
  for (int j = 0; j < n; ++j) o += -obj(j) * lp.var(u, j);
  lp.set_objective(o);
  const auto sol = conic::solve(lp);
  switch (sol.status) {
    case conic::Status::kOptimal:
    case conic::Status::kNearOptimal: return -sol.primal_objective;
    case conic::Status::kUnbounded: return std::nullopt;
    case conic::Status::kInfeasible: fail(ErrorCode::kEmptyRegion, "polyhedron is empty");
    case conic::Status::kStalled: break;
  }
  fail(ErrorCode::kSolverFailure, "LP over polyhedron did not converge");
}

rule::Polynomial linear_poly(const Vector& g, double c) {
  const int v = static_cast<int>(g.size());
  rule::Polynomial p = rule::Polynomial::constant(v, c);
  for (int j = 0; j < v; ++j) {
    if (g(j) != 0.0) p += rule::Polynomial::coordinate(v, j, g(j));
  }
  return p;
}

// (u - c)' E (u - c) - 1.
rule::Polynomial quadratic_poly(const Vector& c, const Matrix& E) {
  const int v = static_cast<int>(c.size());
  rule::Polynomial p(v);
  for (int i = 0; i < v; ++i) {
    for (int j = i; j < v; ++j) {
      const double w = (i == j) ? E(i, i) : E(i, j) + E(j, i);
      if (w == 0.0) continue;
      rule::Exponent e(v, 0);
      e[i] += 1;
      e[j] += 1;
      p.add_term(e, w);
    }
  }
  const Vector g = -2.0 * E * c;
  for (int j = 0; j < v; ++j) {
    if (g(j) != 0.0) p += rule::Polynomial::coordinate(v, j, g(j));
  }
  p += rule::Polynomial::constant(v, c.dot(E * c) - 1.0);
  return p;
}

Vector json_vector(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix json_matrix(const nlohmann::json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n) fail(ErrorCode::kParseError, "matrix rows must have equal length");
    for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

nlohmann::json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

nlohmann::json mat_json(const Matrix& m) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(vec_json(m.row(r).transpose()));
  return j;
}

nlohmann::json poly_json(const rule::Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"e", e}, {"c", c}});
  return terms;
}

rule::Polynomial poly_from_json(int vars, const nlohmann::json& j) {
  rule::Polynomial p(vars);
  for (const auto& t : j) p.add_term(t.at("e").get<rule::Exponent>(), t.at("c").get<double>());
  return p;
}

}  // namespace

nlohmann::json polynomial_to_json(const rule::Polynomial& p) { return poly_json(p); }

rule::Polynomial polynomial_from_json(int vars, const nlohmann::json& j) {
  try {
    return poly_from_json(vars, j);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("polynomial: ") + e.what());
  }
}

std::string kind(const Region& region) {
  return std::visit(Overloaded{[](const Interval&) { return std::string("interval"); },
                               [](const Box&) { return std::string("box"); },
                               [](const Polyhedron&) { return std::string("polyhedron"); },
                               [](const Ball&) { return std::string("ball"); },
                               [](const Ellipsoid&) { return std::string("ellipsoid"); },
                               [](const Semialgebraic&) { return std::string("semialgebraic"); }},
                    region);
}

int dimension(const Region& region) {
  return std::visit(Overloaded{[](const Interval&) { return 1; },
                               [](const Box& r) { return static_cast<int>(r.lo.size()); },
                               [](const Polyhedron& r) { return static_cast<int>(r.P.cols()); },
                               [](const Ball& r) { return static_cast<int>(r.center.size()); },
                               [](const Ellipsoid& r) { return static_cast<int>(r.center.size()); },
                               [](const Semialgebraic& r) { return r.vars; }},
                    region);
}

bool contains(const Region& region, const Vector& u) {
  require(u.size() == dimension(region), ErrorCode::kDimensionMismatch, "point dimension does not match region");
  const double t = kContainsTol;
  return std::visit(
      Overloaded{
          [&](const Interval& r) { return u(0) >= r.a - t && u(0) <= r.b + t; },
          [&](const Box& r) { return ((u - r.lo).array() >= -t).all() && ((r.hi - u).array() >= -t).all(); },
          [&](const Polyhedron& r) { return ((r.P * u - r.q).array() <= t).all(); },
          [&](const Ball& r) { return (u - r.center).squaredNorm() <= r.radius * r.radius + t; },
          [&](const Ellipsoid& r) {
            const Vector d = u - r.center;
            return d.dot(r.E * d) <= 1.0 + t;
          },
          [&](const Semialgebraic& r) {
            for (const auto& p : r.polys) {
              if (p.evaluate(u) > t) return false;
            }
            return true;
          }},
      region);
}

void validate(const Region& region) {
  std::visit(
      Overloaded{
          [](const Interval& r) {
            require(std::isfinite(r.a) && std::isfinite(r.b) && r.a < r.b, ErrorCode::kInvalidArgument,
                    "interval requires finite a < b");
          },
          [](const Box& r) {
            require(r.lo.size() == r.hi.size() && r.lo.size() >= 1, ErrorCode::kDimensionMismatch,
                    "box bounds differ in length");
            require(r.lo.allFinite() && r.hi.allFinite() && (r.lo.array() < r.hi.array()).all(),
                    ErrorCode::kInvalidArgument, "box requires lo < hi componentwise");
          },
          [](const Polyhedron& r) {
            require(r.P.rows() == r.q.size() && r.P.cols() >= 1, ErrorCode::kDimensionMismatch,
                    "polyhedron P and q differ in length");
            require(r.P.allFinite() && r.q.allFinite(), ErrorCode::kInvalidArgument, "polyhedron data not finite");
            for (Eigen::Index j = 0; j < r.P.cols(); ++j) {
              for (double sign : {1.0, -1.0}) {
                Vector e = Vector::Zero(r.P.cols());
                e(j) = sign;
                require(lp_max(r, e).has_value(), ErrorCode::kInvalidBound, "polyhedron is unbounded");
              }
            }
          },
          [](const Ball& r) {
            require(r.center.size() >= 1 && r.center.allFinite(), ErrorCode::kInvalidArgument, "ball center invalid");
            require(std::isfinite(r.radius) && r.radius > 0.0, ErrorCode::kInvalidArgument, "ball radius must be > 0");
          },
          [](const Ellipsoid& r) {
            require(r.E.rows() == r.center.size() && r.E.cols() == r.center.size(), ErrorCode::kDimensionMismatch,
                    "ellipsoid shape has wrong size");
            require(r.E.allFinite() && r.center.allFinite(), ErrorCode::kInvalidArgument, "ellipsoid data not finite");
            require((r.E - r.E.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + r.E.cwiseAbs().maxCoeff()),
                    ErrorCode::kInvalidArgument, "ellipsoid shape must be symmetric");
            Eigen::SelfAdjointEigenSolver<Matrix> es(r.E);
            require(es.eigenvalues().minCoeff() > 0.0, ErrorCode::kInvalidArgument,
                    "ellipsoid shape must be positive definite");
          },
          [](const Semialgebraic& r) {
            require(r.vars >= 1, ErrorCode::kInvalidArgument, "semialgebraic set needs vars >= 1");
            require(!r.polys.empty(), ErrorCode::kInvalidBound, "semialgebraic set without constraints is unbounded");
            for (const auto& p : r.polys) {
              require(p.vars() == r.vars, ErrorCode::kDimensionMismatch, "polynomial variable count mismatch");
            }
            require(r.bounds.has_value(), ErrorCode::kInvalidBound, "semialgebraic set needs a bounding box");
          }},
      region);
}

Polyhedron as_polyhedron(const Region& region) {
  return std::visit(Overloaded{[](const Interval& r) {
                                 Polyhedron p{Matrix(2, 1), Vector(2)};
                                 p.P << -1.0, 1.0;
                                 p.q << -r.a, r.b;
                                 return p;
                               },
                               [](const Box& r) {
                                 const auto v = r.lo.size();
                                 Polyhedron p{Matrix::Zero(2 * v, v), Vector(2 * v)};
                                 for (Eigen::Index j = 0; j < v; ++j) {
                                   p.P(2 * j, j) = -1.0;
                                   p.q(2 * j) = -r.lo(j);
                                   p.P(2 * j + 1, j) = 1.0;
                                   p.q(2 * j + 1) = r.hi(j);
                                 }
                                 return p;
                               },
                               [](const Polyhedron& r) { return r; },
                               [](const auto&) -> Polyhedron {
                                 fail(ErrorCode::kUnsupportedRegion, "region is not polyhedral");
                               }},
                    region);
}

Ellipsoid as_ellipsoid(const Region& region) {
  return std::visit(
      Overloaded{[](const Ball& r) {
                   const auto v = r.center.size();
                   return Ellipsoid{r.center, Matrix::Identity(v, v) / (r.radius * r.radius)};
                 },
                 [](const Ellipsoid& r) { return r; },
                 [](const auto&) -> Ellipsoid { fail(ErrorCode::kUnsupportedRegion, "region is not ellipsoidal"); }},
      region);
}

bool is_polyhedral(const Region& region) {
  return std::holds_alternative<Interval>(region) || std::holds_alternative<Box>(region) ||
         std::holds_alternative<Polyhedron>(region);
}

bool is_ellipsoidal(const Region& region) {
  return std::holds_alternative<Ball>(region) || std::holds_alternative<Ellipsoid>(region);
}

Box bounding_box(const Region& region) {
  return std::visit(Overloaded{[](const Interval& r) {
                                 Box b{Vector(1), Vector(1)};
                                 b.lo(0) = r.a;
                                 b.hi(0) = r.b;
                                 return b;
                               },
                               [](const Box& r) { return r; },
                               [](const Polyhedron& r) {
                                 const auto v = r.P.cols();
                                 Box b{Vector(v), Vector(v)};
                                 for (Eigen::Index j = 0; j < v; ++j) {
                                   Vector e = Vector::Zero(v);
                                   e(j) = 1.0;
                                   const auto hi = lp_max(r, e);
                                   const auto lo = lp_max(r, -e);
                                   require(hi && lo, ErrorCode::kInvalidBound, "polyhedron is unbounded");
                                   b.hi(j) = *hi;
                                   b.lo(j) = -*lo;
                                 }
                                 return b;
                               },
                               [](const Ball& r) {
                                 const Vector rad = Vector::Constant(r.center.size(), r.radius);
                                 return Box{r.center - rad, r.center + rad};
                               },
                               [](const Ellipsoid& r) {
                                 // half-widths sqrt((E^-1)_jj)
                                 const Matrix inv = r.E.inverse();
                                 const Vector w = inv.diagonal().cwiseSqrt();
                                 return Box{r.center - w, r.center + w};
                               },
                               [](const Semialgebraic& r) {
                                 require(r.bounds.has_value(), ErrorCode::kInvalidBound,
                                         "semialgebraic set has no bounding box");
                                 return *r.bounds;
                               }},
                    region);
}

Semialgebraic to_semialgebraic(const Region& region) {
  if (const auto* s = std::get_if<Semialgebraic>(&region)) return *s;
  Semialgebraic out;
  out.vars = dimension(region);
  if (is_polyhedral(region)) {
    const Polyhedron p = as_polyhedron(region);
    for (Eigen::Index r = 0; r < p.P.rows(); ++r) out.polys.push_back(linear_poly(p.P.row(r).transpose(), -p.q(r)));
    out.bounds = bounding_box(region);
  } else {
    const Ellipsoid e = as_ellipsoid(region);
    out.polys.push_back(quadratic_poly(e.center, e.E));
    out.bounds = bounding_box(region);
  }
  // For a ball the polynomial is scaled to the familiar |u - c|^2 - r^2.
  if (const auto* b = std::get_if<Ball>(&region)) out.polys.back() *= b->radius * b->radius;
  return out;
}

Semialgebraic add_compactness_certificate(const Semialgebraic& s, double R) {
  require(s.bounds.has_value(), ErrorCode::kInvalidBound, "no bounding box to check the compactness bound against");
  const Box& b = *s.bounds;
  const double max_sq = b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs()).squaredNorm();
  require(R >= max_sq - 1e-12, ErrorCode::kInvalidBound,
          "R = " + std::to_string(R) + " is below max |u|^2 = " + std::to_string(max_sq) + " on the bounding box");
  Semialgebraic out = s;
  rule::Polynomial p = rule::Polynomial::constant(s.vars, -R);
  for (int j = 0; j < s.vars; ++j) {
    rule::Exponent e(s.vars, 0);
    e[j] = 2;
    p.add_term(e, 1.0);
  }
  out.polys.push_back(std::move(p));
  return out;
}

Vector monomial_moments(const Region& region, const std::vector<rule::Exponent>& exponents) {
  Box box;
  if (const auto* i = std::get_if<Interval>(&region)) {
    box = bounding_box(*i);
  } else if (const auto* b = std::get_if<Box>(&region)) {
    box = *b;
  } else {
    fail(ErrorCode::kUnsupportedRegion, "closed-form moments need an interval or box; use a sampled objective");
  }
  Vector out(static_cast<Eigen::Index>(exponents.size()));
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    const auto& e = exponents[k];
    require(static_cast<Eigen::Index>(e.size()) == box.lo.size(), ErrorCode::kDimensionMismatch,
            "exponent length does not match region dimension");
    double v = 1.0;
    for (std::size_t j = 0; j < e.size(); ++j) {
      const int p = e[j] + 1;
      const auto jj = static_cast<Eigen::Index>(j);
      v *= (std::pow(box.hi(jj), p) - std::pow(box.lo(jj), p)) / p;
    }
    out(static_cast<Eigen::Index>(k)) = v;
  }
  return out;
}

double volume(const Region& region) {
  if (std::holds_alternative<Interval>(region) || std::holds_alternative<Box>(region)) {
    return monomial_moments(region, {rule::Exponent(dimension(region), 0)})(0);
  }
  fail(ErrorCode::kUnsupportedRegion, "volume is only available for intervals and boxes");
}

nlohmann::json to_json(const Region& region) {
  return std::visit(
      Overloaded{[](const Interval& r) -> nlohmann::json { return {{"type", "interval"}, {"a", r.a}, {"b", r.b}}; },
                 [](const Box& r) -> nlohmann::json {
                   return {{"type", "box"}, {"lo", vec_json(r.lo)}, {"hi", vec_json(r.hi)}};
                 },
                 [](const Polyhedron& r) -> nlohmann::json {
                   return {{"type", "polyhedron"}, {"P", mat_json(r.P)}, {"q", vec_json(r.q)}};
                 },
                 [](const Ball& r) -> nlohmann::json {
                   return {{"type", "ball"}, {"center", vec_json(r.center)}, {"radius", r.radius}};
                 },
                 [](const Ellipsoid& r) -> nlohmann::json {
                   return {{"type", "ellipsoid"}, {"center", vec_json(r.center)}, {"E", mat_json(r.E)}};
                 },
                 [](const Semialgebraic& r) -> nlohmann::json {
                   nlohmann::json j{{"type", "semialgebraic"}, {"vars", r.vars}};
                   j["polys"] = nlohmann::json::array();
                   for (const auto& p : r.polys) j["polys"].push_back(poly_json(p));
                   if (r.bounds) j["bounds"] = {{"lo", vec_json(r.bounds->lo)}, {"hi", vec_json(r.bounds->hi)}};
                   return j;
                 }},
      region);
}

Region region_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "interval") return Interval{j.at("a").get<double>(), j.at("b").get<double>()};
    if (type == "box") return Box{json_vector(j.at("lo")), json_vector(j.at("hi"))};
    if (type == "polyhedron") return Polyhedron{json_matrix(j.at("P")), json_vector(j.at("q"))};
    if (type == "ball") return Ball{json_vector(j.at("center")), j.at("radius").get<double>()};
    if (type == "ellipsoid") return Ellipsoid{json_vector(j.at("center")), json_matrix(j.at("E"))};
    if (type == "semialgebraic") {
      Semialgebraic s;
      s.vars = j.at("vars").get<int>();
      for (const auto& p : j.at("polys")) s.polys.push_back(poly_from_json(s.vars, p));
      if (j.contains("bounds")) s.bounds = Box{json_vector(j["bounds"].at("lo")), json_vector(j["bounds"].at("hi"))};
      return s;
    }
    fail(ErrorCode::kParseError, "unknown region type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("bad region JSON: ") + e.what());
  }
}

}  // namespace paretoaro::regions
