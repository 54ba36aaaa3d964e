#include "paretoaro/api/grid.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

#include "paretoaro/common/error.hpp"

namespace paretoaro::api {

namespace {

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

int parse_count(const std::string& s) {
  std::size_t pos = 0;
  int n = 0;
  try {
    n = std::stoi(s, &pos);
  } catch (const std::exception&) {
    fail(ErrorCode::kBadGrid, "bad grid count '" + s + "'");
  }
  if (pos != s.size() || n < 1) fail(ErrorCode::kBadGrid, "grid count must be a positive integer, got '" + s + "'");
  return n;
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail(ErrorCode::kBadGrid, "bad grid bound '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) fail(ErrorCode::kBadGrid, "bad grid bound '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<Vector> tensor(const std::vector<Axis>& axes) {
  std::vector<Vector> pts;
  const auto dim = static_cast<Eigen::Index>(axes.size());
  std::vector<int> idx(axes.size(), 0);
  while (true) {
    Vector u(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Axis& a = axes[static_cast<std::size_t>(j)];
      const double t = a.n == 1 ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(j)]) / (a.n - 1);
      u(j) = a.lo + t * (a.hi - a.lo);
    }
    pts.push_back(u);
    std::size_t j = 0;
    for (; j < axes.size(); ++j) {
      if (++idx[j] < axes[j].n) break;
      idx[j] = 0;
    }
    if (j == axes.size()) break;
  }
  return pts;
}

}  // namespace

std::vector<Vector> tensor_grid(const std::string& spec) {
  std::vector<Axis> axes;
  for (const auto& part : split(spec, ',')) {
    const auto f = split(part, ':');
    if (f.size() != 3) fail(ErrorCode::kBadGrid, "axis spec must be a:b:N, got '" + part + "'");
    axes.push_back({parse_number(f[0]), parse_number(f[1]), parse_count(f[2])});
  }
  if (axes.empty()) fail(ErrorCode::kBadGrid, "empty grid spec");
  return tensor(axes);
}

std::vector<Vector> make_grid(const regions::Region& region, const std::string& spec) {
  const int dim = regions::dimension(region);
  if (spec.empty()) fail(ErrorCode::kBadGrid, "empty grid spec");
  if (spec.find(':') != std::string::npos) {
    auto pts = tensor_grid(spec);
    if (pts.front().size() != dim) fail(ErrorCode::kBadGrid, "grid dimension differs from the region");
    return pts;
  }
  const int n = parse_count(spec);
  if (regions::is_ellipsoidal(region)) {
    // The cube [-1, 1]^d is mapped radially onto the unit ball, then onto the
    // ellipsoid through u = c + L^-T v with E = L L'.
    const regions::Ellipsoid e = regions::as_ellipsoid(region);
    const Eigen::LLT<Matrix> llt(e.E);
    const Matrix Lt = llt.matrixU();
    std::vector<Vector> pts;
    for (Vector s : tensor(std::vector<Axis>(static_cast<std::size_t>(dim), Axis{-1.0, 1.0, n}))) {
      const double r2 = s.norm();
      if (r2 > 0) s *= s.lpNorm<Eigen::Infinity>() / r2;
      pts.push_back(e.center + Lt.triangularView<Eigen::Upper>().solve(s));
    }
    return pts;
  }
  const regions::Box box = regions::bounding_box(region);
  std::vector<Axis> axes;
  for (int j = 0; j < dim; ++j) axes.push_back({box.lo(j), box.hi(j), n});
  std::vector<Vector> pts = tensor(axes);
  if (!std::holds_alternative<regions::Interval>(region) && !std::holds_alternative<regions::Box>(region)) {
    std::erase_if(pts, [&](const Vector& u) { return !regions::contains(region, u); });
  }
  if (pts.empty()) fail(ErrorCode::kBadGrid, "no grid point lies in the region");
  return pts;
}

Mesh evaluate_surface(const ApproximationResult& result, const std::vector<Vector>& grid, bool with_oracle) {
  if (grid.empty()) fail(ErrorCode::kBadGrid, "empty grid");
  require(result.rule.has_value() || result.outer.has_value(), ErrorCode::kInvalidArgument,
          "result has neither a rule nor an outer approximation");
  const molp::Molp& p = result.request.problem;
  const int dim = static_cast<int>(p.objectives.size()) - 1;
  for (const auto& u : grid) {
    if (u.size() != dim) fail(ErrorCode::kBadGrid, "grid point has the wrong dimension");
    if (!u.allFinite()) fail(ErrorCode::kBadGrid, "grid point is not finite");
  }
  Mesh mesh;
  mesh.points.reserve(grid.size());
  for (const auto& u : grid) {
    MeshPoint pt;
    pt.u = u;
    if (result.rule) {
      pt.objectives = rule::objective_curve(*result.rule, p, u);
      pt.value = pt.objectives(pt.objectives.size() - 1);
    } else {
      pt.value = (*result.outer)(u);
    }
    mesh.points.push_back(std::move(pt));
  }
  if (with_oracle) {
    mesh.has_oracle = true;
    const auto front = molp::pareto_front_oracle(p, grid);
    for (std::size_t i = 0; i < front.size(); ++i) {
      mesh.points[i].oracle_feasible = front[i].feasible;
      if (front[i].feasible) mesh.points[i].oracle = front[i].value;
    }
  }
  return mesh;
}

nlohmann::json to_json(const Mesh& mesh) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : mesh.points) {
    nlohmann::json j{{"u", std::vector<double>(p.u.data(), p.u.data() + p.u.size())}, {"value", p.value}};
    if (p.objectives.size() > 0) {
      j["objectives"] = std::vector<double>(p.objectives.data(), p.objectives.data() + p.objectives.size());
    }
    if (mesh.has_oracle) {
      j["oracle_feasible"] = p.oracle_feasible;
      j["oracle"] = p.oracle ? nlohmann::json(*p.oracle) : nlohmann::json(nullptr);
    }
    pts.push_back(std::move(j));
  }
  return {{"v", kSchemaVersion}, {"points", pts}, {"has_oracle", mesh.has_oracle}};
}

ApproximationRequest refine(const ApproximationResult& parent, const regions::Region& subregion,
                            std::optional<int> degree) {
  const regions::Region& outer = parent.request.region;
  regions::validate(subregion);
  require(regions::dimension(subregion) == regions::dimension(outer), ErrorCode::kDimensionMismatch,
          "subregion dimension differs from the parent region");
  std::vector<Vector> probes = regions::sample(subregion, 1000, parent.request.seed);
  const regions::Box box = regions::bounding_box(subregion);
  if (std::holds_alternative<regions::Interval>(subregion) || std::holds_alternative<regions::Box>(subregion)) {
    probes.push_back(box.lo);
    probes.push_back(box.hi);
  }
  for (const auto& u : probes) {
    if (!regions::contains(outer, u)) fail(ErrorCode::kNotContained, "subregion is not contained in the parent region");
  }
  ApproximationRequest child = parent.request;
  child.region = subregion;
  if (degree) {
    require(*degree >= 1, ErrorCode::kInvalidArgument, "degree must be at least 1");
    child.degree = *degree;
  }
  return child;
}

}  // namespace paretoaro::api
