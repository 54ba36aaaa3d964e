#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "paretoaro/api/types.hpp"

namespace paretoaro::api {

// Grid specs: "N" spreads N points per coordinate over the region (mapped
// into the region for balls and ellipsoids, filtered by membership for
// polyhedra and semialgebraic sets); "a:b:N" per coordinate, comma
// separated, gives an explicit tensor grid. Throws Error(kBadGrid).
std::vector<Vector> make_grid(const regions::Region& region, const std::string& spec);
// Explicit "a:b:N[,a:b:N...]" tensor grid, independent of any region.
std::vector<Vector> tensor_grid(const std::string& spec);

struct MeshPoint {
  Vector u;
  double value = 0.0;       // (c^k)'x(u) for rules, l(u) for outer results
  Vector objectives;        // all k objective values of x(u); empty for outer
  std::optional<double> oracle;
  bool oracle_feasible = false;
};

struct Mesh {
  std::vector<MeshPoint> points;
  bool has_oracle = false;
};

// Pure evaluation of the result's surface; the oracle overlay costs one LP
// per point. Throws Error(kBadGrid) for empty or malformed grids.
Mesh evaluate_surface(const ApproximationResult& result, const std::vector<Vector>& grid, bool with_oracle = false);

nlohmann::json to_json(const Mesh& mesh);

// A request cloning the parent with a smaller region (and optionally a new
// degree). Throws Error(kNotContained) when sampled points of the subregion
// fall outside the parent region.
ApproximationRequest refine(const ApproximationResult& parent, const regions::Region& subregion,
                            std::optional<int> degree = std::nullopt);

}  // namespace paretoaro::api
