#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "paretoaro/common/types.hpp"
#include "paretoaro/rule/polynomial.hpp"

namespace paretoaro::regions {

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

struct Box {
  Vector lo;
  Vector hi;
};

// P u <= q.
struct Polyhedron {
  Matrix P;
  Vector q;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

// (u - center)' E (u - center) <= 1.
struct Ellipsoid {
  Vector center;
  Matrix E;
};

// p_i(u) <= 0 for every i. `bounds` is an optional enclosing box used for
// compactness checks and rejection sampling.
struct Semialgebraic {
  int vars = 0;
  std::vector<rule::Polynomial> polys;
  std::optional<Box> bounds;
};

using Region = std::variant<Interval, Box, Polyhedron, Ball, Ellipsoid, Semialgebraic>;

std::string kind(const Region& region);
int dimension(const Region& region);

inline constexpr double kContainsTol = 1e-9;

bool contains(const Region& region, const Vector& u);

// Throws Error(kInvalidBound / kEmptyRegion / kInvalidArgument) when the
// region violates its invariants.
void validate(const Region& region);

Semialgebraic to_semialgebraic(const Region& region);

// Appends sum u_i^2 - R <= 0 after checking R against the bounding box.
Semialgebraic add_compactness_certificate(const Semialgebraic& s, double R);

// Axis-aligned box enclosing the region.
Box bounding_box(const Region& region);

// Linear description P u <= q of Interval/Box/Polyhedron.
Polyhedron as_polyhedron(const Region& region);

// Ball becomes E = I / r^2.
Ellipsoid as_ellipsoid(const Region& region);

bool is_polyhedral(const Region& region);
bool is_ellipsoidal(const Region& region);

std::vector<Vector> sample(const Region& region, int count, std::uint64_t seed);

// Integrals of u^a over an Interval or Box, one per exponent.
Vector monomial_moments(const Region& region, const std::vector<rule::Exponent>& exponents);

double volume(const Region& region);

nlohmann::json to_json(const Region& region);
Region region_from_json(const nlohmann::json& j);

// Polynomials as [{"e": [exponents], "c": coefficient}, ...].
nlohmann::json polynomial_to_json(const rule::Polynomial& p);
rule::Polynomial polynomial_from_json(int vars, const nlohmann::json& j);

}  // namespace paretoaro::regions
